#include <doctest.h>

#include <map>

#include "finicheck/vcg.hpp"
#include "helpers.hpp"

using namespace finicheck;
using namespace testutil;

namespace {

std::map<VcCategory, int> category_counts(
    const std::vector<VerificationCondition>& vcs) {
  std::map<VcCategory, int> counts;
  for (const auto& vc : vcs) counts[vc.category]++;
  return counts;
}

const VerificationCondition& find_vc(
    const std::vector<VerificationCondition>& vcs, const std::string& id) {
  for (const auto& vc : vcs)
    if (vc.id == id) return vc;
  REQUIRE_MESSAGE(false, "no VC named " << id);
  return vcs.front();
}

}  // namespace

TEST_CASE("the assignment rule produces a let binding") {
  auto spec = typed_of(
      "proc p(m:ℤ[0,9]): ℤ[0,9] { var a:ℤ[0,9] ≔ m; return a; }");
  const OpInfo* op = spec->find_operation("p");
  WpResult r = wp(*spec, *op->decl, *op->decl->body_cmd->commands[0],
                  expr_of("a = m"));
  CHECK(alpha_equal(*r.formula, *expr_of("let a = m in a = m")));
}

TEST_CASE("wp of an empty block is the postcondition unchanged") {
  auto spec = typed_of("proc p(m:ℤ[0,9]): ℤ[0,9] { { } return m; }");
  const OpInfo* op = spec->find_operation("p");
  ExprPtr post = expr_of("m ≥ 0");
  WpResult r = wp(*spec, *op->decl, *op->decl->body_cmd->commands[0], post);
  CHECK(equal(*r.formula, *post));
  CHECK(r.side_conditions.empty());
}

TEST_CASE("gcdp generates all six categories with the documented ids") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  const OpInfo* op = spec->find_operation("gcdp");
  auto vcs = generate_vcs(*spec, *op->decl);
  REQUIRE(vcs.size() == 10);
  auto counts = category_counts(vcs);
  CHECK(counts[VcCategory::ResultCorrect] == 1);
  CHECK(counts[VcCategory::InvariantInit] == 2);
  CHECK(counts[VcCategory::MeasureNonNegative] == 1);
  CHECK(counts[VcCategory::InvariantPreserved] == 2);
  CHECK(counts[VcCategory::MeasureDecreased] == 1);
  CHECK(counts[VcCategory::OpPrecondition] == 3);
  // gcdp is the sixth operation declaration (0-based index 5)
  CHECK(vcs[0].id == "_gcdp_5_CorrOp0");
  // at least 5 loop-related conditions for the single loop
  int loop_related = counts[VcCategory::InvariantInit] +
                     counts[VcCategory::MeasureNonNegative] +
                     counts[VcCategory::InvariantPreserved] +
                     counts[VcCategory::MeasureDecreased];
  CHECK(loop_related >= 5);
}

TEST_CASE("the ResultCorrect condition is alpha-equivalent to the published "
          "formula") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  const OpInfo* op = spec->find_operation("gcdp");
  auto vcs = generate_vcs(*spec, *op->decl);
  const auto& corr = find_vc(vcs, "_gcdp_5_CorrOp0");
  ExprPtr expected = expr_of(
      "let a = m in (let b = n in "
      "(letpar old_a = a, old_b = b in "
      "(∀a:nat, b:nat. (((((a ≠ 0) ∨ (b ≠ 0)) ∧ "
      "(gcd(a, b) = gcd(old_a, old_b))) ∧ "
      "(¬((a > 0) ∧ (b > 0)))) ⇒ "
      "(let result = if a = 0 then b else a in "
      "(result = gcd(m, n)))))))");
  CHECK(alpha_equal(*corr.theorem->body_expr, *expected));
  // and its requires clause is the procedure's
  REQUIRE(corr.theorem->requires_.size() == 1);
  CHECK(alpha_equal(*corr.theorem->requires_[0], *expr_of("m ≠ 0 ∨ n ≠ 0")));
}

TEST_CASE("a straight-line procedure yields one quantifier-free VC") {
  auto spec = typed_of(
      "proc id(x:ℤ[0,5]): ℤ[0,5] ensures result = x; { return x; }");
  const OpInfo* op = spec->find_operation("id");
  auto vcs = generate_vcs(*spec, *op->decl);
  REQUIRE(vcs.size() == 1);
  CHECK(vcs[0].category == VcCategory::ResultCorrect);
  CHECK(alpha_equal(*vcs[0].theorem->body_expr,
                    *expr_of("let result = x in result = x")));
  CheckConfig cfg;
  auto outcomes = check_vcs(vcs, *spec, cfg);
  CHECK(outcomes[0].status == VcStatus::Valid);
}

TEST_CASE("all gcdp conditions check valid at N in {5, 10, 20}") {
  for (long long n : {5, 10, 20}) {
    auto spec = typed_corpus("gcd.spec", n_of(n));
    auto vcs = generate_all_vcs(*spec, "gcdp");
    CheckConfig cfg;
    auto outcomes = check_vcs(vcs, *spec, cfg);
    for (const auto& out : outcomes)
      CHECK_MESSAGE(out.status == VcStatus::Valid,
                    out.id << " at N=" << n);
  }
}

TEST_CASE("deleting the gcd-preservation invariant invalidates ResultCorrect") {
  std::string text = read_file(corpus_path("gcd.spec"));
  std::string mutated = text;
  std::string line = "    invariant gcd(a,b) = gcd(old_a,old_b);\n";
  auto at = mutated.find(line);
  REQUIRE(at != std::string::npos);
  mutated.erase(at, line.size());
  auto spec = typed_of(mutated, n_of(5));
  auto vcs = generate_all_vcs(*spec, "gcdp");
  CheckConfig cfg;
  auto outcomes = check_vcs(vcs, *spec, cfg);
  bool corr_invalid = false;
  bool pres_valid = true;
  for (size_t i = 0; i < vcs.size(); ++i) {
    if (vcs[i].category == VcCategory::ResultCorrect)
      corr_invalid = outcomes[i].status == VcStatus::Invalid;
    if (vcs[i].category == VcCategory::InvariantPreserved)
      pres_valid = outcomes[i].status == VcStatus::Valid;
  }
  CHECK(corr_invalid);
  CHECK(pres_valid);
  // the invalid VC reports a concrete counterexample
  for (size_t i = 0; i < vcs.size(); ++i)
    if (vcs[i].category == VcCategory::ResultCorrect)
      CHECK(!outcomes[i].report.failures.empty());
}

TEST_CASE("weakening the measure to 'a' invalidates MeasureDecreased") {
  std::string text = read_file(corpus_path("gcd.spec"));
  std::string mutated = text;
  auto at = mutated.find("decreases a+b;");
  REQUIRE(at != std::string::npos);
  mutated.replace(at, std::string("decreases a+b;").size(), "decreases a;");
  auto spec = typed_of(mutated, n_of(5));
  auto vcs = generate_all_vcs(*spec, "gcdp");
  CheckConfig cfg;
  auto outcomes = check_vcs(vcs, *spec, cfg);
  bool measdec_invalid = false;
  for (size_t i = 0; i < vcs.size(); ++i)
    if (vcs[i].category == VcCategory::MeasureDecreased &&
        outcomes[i].status == VcStatus::Invalid)
      measdec_invalid = !outcomes[i].report.failures.empty();
  CHECK(measdec_invalid);
}

TEST_CASE("self-checkability: printed conditions re-parse and re-check alike") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  auto vcs = generate_all_vcs(*spec, "gcdp");
  CheckConfig cfg;
  auto direct = check_vcs(vcs, *spec, cfg);

  // append the printed theorems to the original source and check them there
  std::string text = read_file(corpus_path("gcd.spec"));
  for (const auto& vc : vcs) text += "\n" + vc_to_text(vc);
  auto reparsed = typed_of(text, n_of(5));
  for (size_t i = 0; i < vcs.size(); ++i) {
    CheckConfig one;
    one.operation = vcs[i].id;
    one.silent = true;
    RunReport r = run_operation(*reparsed, one);
    bool valid = r.ok();
    CHECK_MESSAGE(valid == (direct[i].status == VcStatus::Valid), vcs[i].id);
  }
}

TEST_CASE("category completeness: k loops and nontrivial call sites") {
  auto spec = typed_corpus("verified.spec", nm_of(3, 1));
  for (const char* name : {"sumUp", "mult", "find", "maxElem", "gcdm"}) {
    const OpInfo* op = spec->find_operation(name);
    auto vcs = generate_vcs(*spec, *op->decl);
    // one loop with at least one invariant and a measure: >= 1 + 4k
    CHECK_MESSAGE(vcs.size() >= 5, name);
  }
  // bubbleSortV has two loops
  const OpInfo* op = spec->find_operation("bubbleSortV");
  auto vcs = generate_vcs(*spec, *op->decl);
  CHECK(vcs.size() >= 1 + 4 * 2);
  // cswapv is called once with a nontrivial requires
  int preops = 0;
  for (const auto& vc : vcs)
    if (vc.category == VcCategory::OpPrecondition && vc.callee == "cswapv")
      ++preops;
  CHECK(preops == 1);
}

TEST_CASE("span links: goals and contributing spans lie within the procedure") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  const OpInfo* op = spec->find_operation("gcdp");
  auto vcs = generate_vcs(*spec, *op->decl);
  const Span& proc_span = op->decl->span;
  for (const auto& vc : vcs) {
    CHECK(proc_span.contains(vc.goal_span));
    for (const auto& s : vc.contributing_spans)
      CHECK_MESSAGE(proc_span.contains(s), vc.id);
  }
}

TEST_CASE("the ResultCorrect VC of a single-loop procedure draws nothing "
          "from the loop body") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  const OpInfo* op = spec->find_operation("gcdp");
  auto vcs = generate_vcs(*spec, *op->decl);
  const auto& corr = find_vc(vcs, "_gcdp_5_CorrOp0");
  // locate the loop body span in the source
  const Command* loop = nullptr;
  for (const auto& c : op->decl->body_cmd->commands)
    if (c->kind == CmdKind::While) loop = c.get();
  REQUIRE(loop);
  const Span& body_span = loop->body->span;
  for (const auto& s : corr.contributing_spans)
    CHECK(!body_span.contains(s));
}

TEST_CASE("procedure calls outside assignment right-hand sides are rejected") {
  auto spec = typed_of(
      "proc q(x:ℤ[0,3]): ℤ[0,3] { return x; }\n"
      "proc p(x:ℤ[0,3]): ℤ[0,3] { var v:ℤ[0,3] ≔ q(x) + 0; return v; }");
  const OpInfo* op = spec->find_operation("p");
  CHECK_THROWS_AS(generate_vcs(*spec, *op->decl), UnsupportedConstructError);
}

TEST_CASE("all verification conditions of the annotated corpus are valid") {
  auto spec = typed_corpus("verified.spec", nm_of(3, 1));
  auto vcs = generate_all_vcs(*spec);
  REQUIRE(vcs.size() > 40);
  CheckConfig cfg;
  auto outcomes = check_vcs(vcs, *spec, cfg);
  for (const auto& out : outcomes)
    CHECK_MESSAGE(out.status == VcStatus::Valid, out.id);
}

TEST_CASE("vcg JSON export lists ids, categories, formulas and spans") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  auto vcs = generate_all_vcs(*spec, "gcdp");
  std::string json = vcs_to_json(vcs);
  CHECK(json.find("_gcdp_5_CorrOp0") != std::string::npos);
  CHECK(json.find("ResultCorrect") != std::string::npos);
  CHECK(json.find("Is the result correct?") != std::string::npos);
  CHECK(json.find("goal_span") != std::string::npos);
  CHECK(json.find("contributing_spans") != std::string::npos);
}

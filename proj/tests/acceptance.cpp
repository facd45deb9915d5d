// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "finicheck/vcg.hpp"
#include "finicheck/viz.hpp"
#include "gen_oracle.hpp"
#include "helpers.hpp"
#include "tree_reconstruct.hpp"

using namespace finicheck;
using namespace testutil;

namespace {

int g_failures = 0;

#define EXPECT(cond)                                                       \
  do {                                                                     \
    if (!(cond)) throw std::runtime_error("check failed: " #cond);         \
  } while (0)

void criterion(int number, const std::string& title,
               const std::function<void()>& body) {
  auto started = std::chrono::steady_clock::now();
  try {
    body();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    std::printf("[PASS] %d. %s (%lld ms)\n", number, title.c_str(),
                static_cast<long long>(ms));
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("[FAIL] %d. %s: %s\n", number, title.c_str(), e.what());
  }
  std::fflush(stdout);
}

RunReport run(const TypedSpec& spec, const std::string& op) {
  CheckConfig cfg;
  cfg.operation = op;
  cfg.silent = true;
  return run_operation(spec, cfg);
}

}  // namespace

int main() {
  criterion(1, "gcd corpus reproduction (441/441/0 and 440/1 at N=20)", [] {
    auto started = std::chrono::steady_clock::now();
    auto spec = typed_corpus("gcd.spec", n_of(20));
    RunReport gcd2 = run(*spec, "gcd2");
    EXPECT(gcd2.total_inputs == 441);
    EXPECT(gcd2.checked == 441);
    EXPECT(gcd2.inadmissible == 0);
    EXPECT(gcd2.failures.empty());
    RunReport gcdp = run(*spec, "gcdp");
    EXPECT(gcdp.total_inputs == 441);
    EXPECT(gcdp.checked == 440);
    EXPECT(gcdp.inadmissible == 1);
    EXPECT(gcdp.failures.empty());
    // the sole inadmissible tuple is (0,0)
    Interp interp(*spec, EvalMode::Det);
    const OpInfo* op = spec->find_operation("gcdp");
    for (uint64_t k = 0; k < 441; ++k) {
      auto args = input_tuple(*op, k);
      bool admissible = interp.requires_holds(*op, args);
      bool zz = args[0].as_int() == 0 && args[1].as_int() == 0;
      EXPECT(admissible == !zz);
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    EXPECT(ms < 10000);  // runtime budget
  });

  criterion(2, "VCG categories and the published ResultCorrect formula", [] {
    auto spec = typed_corpus("gcd.spec", n_of(20));
    auto vcs = generate_all_vcs(*spec, "gcdp");
    int counts[6] = {0, 0, 0, 0, 0, 0};
    int loop_related = 0;
    for (const auto& vc : vcs) {
      counts[static_cast<int>(vc.category)]++;
      switch (vc.category) {
        case VcCategory::InvariantInit:
        case VcCategory::MeasureNonNegative:
        case VcCategory::InvariantPreserved:
        case VcCategory::MeasureDecreased:
          ++loop_related;
          break;
        default:
          break;
      }
    }
    for (int i = 0; i < 6; ++i) EXPECT(counts[i] >= 1);  // all six categories
    EXPECT(loop_related >= 5);
    // structural comparison after normalization against the published shape
    const VerificationCondition* corr = nullptr;
    for (const auto& vc : vcs)
      if (vc.category == VcCategory::ResultCorrect) corr = &vc;
    EXPECT(corr != nullptr);
    EXPECT(corr->id == "_gcdp_5_CorrOp0");
    ExprPtr expected = expr_of(
        "let a = m in (let b = n in "
        "(letpar old_a = a, old_b = b in "
        "(∀a:nat, b:nat. (((((a ≠ 0) ∨ (b ≠ 0)) ∧ "
        "(gcd(a, b) = gcd(old_a, old_b))) ∧ "
        "(¬((a > 0) ∧ (b > 0)))) ⇒ "
        "(let result = if a = 0 then b else a in "
        "(result = gcd(m, n)))))))");
    EXPECT(alpha_equal(*corr->theorem->body_expr, *expected));
  });

  criterion(3, "VC validity at N in {5,10,20} and mutation sensitivity", [] {
    for (long long n : {5LL, 10LL, 20LL}) {
      auto spec = typed_corpus("gcd.spec", n_of(n));
      auto vcs = generate_all_vcs(*spec, "gcdp");
      CheckConfig cfg;
      auto outcomes = check_vcs(vcs, *spec, cfg);
      for (const auto& out : outcomes)
        if (out.status != VcStatus::Valid)
          throw std::runtime_error(out.id + " invalid at N=" +
                                   std::to_string(n));
    }
    std::string text = read_file(corpus_path("gcd.spec"));
    {  // delete the gcd-preservation invariant
      std::string mutated = text;
      std::string line = "    invariant gcd(a,b) = gcd(old_a,old_b);\n";
      mutated.erase(mutated.find(line), line.size());
      auto spec = typed_of(mutated, n_of(5));
      auto vcs = generate_all_vcs(*spec, "gcdp");
      CheckConfig cfg;
      auto outcomes = check_vcs(vcs, *spec, cfg);
      bool some_invalid_with_cex = false;
      for (const auto& out : outcomes)
        if (out.status == VcStatus::Invalid && !out.report.failures.empty())
          some_invalid_with_cex = true;
      EXPECT(some_invalid_with_cex);
    }
    {  // weaken the termination measure
      std::string mutated = text;
      auto at = mutated.find("decreases a+b;");
      mutated.replace(at, 14, "decreases a;");
      auto spec = typed_of(mutated, n_of(5));
      auto vcs = generate_all_vcs(*spec, "gcdp");
      CheckConfig cfg;
      auto outcomes = check_vcs(vcs, *spec, cfg);
      bool measdec_invalid = false;
      for (size_t i = 0; i < vcs.size(); ++i)
        if (vcs[i].category == VcCategory::MeasureDecreased &&
            outcomes[i].status == VcStatus::Invalid &&
            !outcomes[i].report.failures.empty())
          measdec_invalid = true;
      EXPECT(measdec_invalid);
    }
  });

  criterion(4, "enumeration order: second bubble-sort input is [-2,-3,-3,-3]",
            [] {
              auto spec = typed_corpus("bubblesort.spec", nm_of(4, 3));
              const OpInfo* op = spec->find_operation("bubbleSort");
              auto args = input_tuple(*op, 1);
              EXPECT(args.size() == 1);
              EXPECT(args[0].to_string() == "[-2,-3,-3,-3]");
              auto first = input_tuple(*op, 0);
              EXPECT(first[0].to_string() == "[-3,-3,-3,-3]");
            });

  criterion(5, "evaluation-tree shape for the Fig. 5 model", [] {
    auto spec = typed_corpus("fig5.spec");
    EvalTree t = record_eval_tree(*spec, "forallPexistsQFormula", true);
    EXPECT(t.root->children.size() == 1);
    const EvalNode& instance = *t.root->children[0];
    EXPECT(instance.children.size() == 1);
    const EvalNode& forall = *instance.children[0];
    EXPECT(forall.label == "∀");
    EXPECT(forall.children.size() == 5);
    for (int x = 0; x <= 3; ++x) {
      const EvalNode& imp = *forall.children[static_cast<size_t>(x)];
      EXPECT(imp.label == "⇒");
      const EvalNode* ex = nullptr;
      for (const auto& ch : imp.children)
        if (ch->label == "∃") ex = ch.get();
      EXPECT(ex != nullptr);
      EXPECT(ex->children.size() == 1);  // exactly one witness
      bool witness_ok = false;
      for (const auto& [name, value] : ex->children[0]->bindings)
        if (name == "y" && value.as_int() == x + 1) witness_ok = true;
      EXPECT(witness_ok);
    }
    const EvalNode& last = *forall.children[4];
    EXPECT(last.label == "⇒");
    EXPECT(last.children.size() == 1);  // pruned to the antecedent
    EXPECT(last.children[0]->label == "p");
    EXPECT(last.children[0]->has_truth && !last.children[0]->truth);
  });

  criterion(6, "oracle equivalence on 10000 random formulas", [] {
    genoracle::FormulaGen gen(424242);
    int compared = 0;
    for (int i = 0; i < 10000; ++i) {
      ExprPtr f = gen.closed_bool(4);
      auto decl = std::make_shared<Decl>();
      decl->kind = DeclKind::Pred;
      decl->name = "probe";
      decl->body_expr = f;
      auto raw = std::make_shared<Spec>();
      raw->decls.push_back(decl);
      auto spec = resolve(raw, {});

      bool oracle_err = false;
      Value oracle_value;
      try {
        genoracle::OEnv env;
        oracle_value = genoracle::oracle_eval(*f, env);
      } catch (const genoracle::OracleError&) {
        oracle_err = true;
      }

      bool det_err = false;
      Value det_value;
      try {
        Interp interp(*spec, EvalMode::Det);
        Frame frame;
        det_value = interp.eval_det(*f, frame);
      } catch (const RuntimeException&) {
        det_err = true;
      }

      bool nd_err = false;
      Value nd_value;
      try {
        Interp interp(*spec, EvalMode::Nondet);
        Frame frame;
        bool got = false;
        interp.eval_stream(*f, frame, [&](const Value& v) {
          nd_value = v;
          got = true;
          return false;
        });
        nd_err = !got;
      } catch (const RuntimeException&) {
        nd_err = true;
      }

      // det outcome is the first nondet outcome
      EXPECT(det_err == nd_err);
      if (!det_err) EXPECT(det_value == nd_value);

      if (oracle_err) continue;  // full evaluation hit a fault
      EXPECT(!det_err);
      EXPECT(det_value == oracle_value);
      ++compared;

      // pruned-tree reconstruction equals evaluator truth
      EvalTree t = record_eval_tree(*spec, "probe", true);
      EXPECT(treeoracle::reconstruct(*t.root->children[0]) ==
             det_value.as_bool());
    }
    EXPECT(compared >= 5000);
  });

  criterion(7, "wp soundness across the annotated corpus", [] {
    int procedures_validated = 0;
    auto check_file = [&](const std::string& name,
                          std::vector<ConstBinding> consts) {
      auto spec = typed_corpus(name, consts);
      for (const auto& opname : spec->operation_order) {
        const OpInfo& info = spec->operations.at(opname);
        if (info.decl->kind != DeclKind::Proc) continue;
        auto vcs = generate_vcs(*spec, *info.decl);
        CheckConfig cfg;
        auto outcomes = check_vcs(vcs, *spec, cfg);
        bool all_valid = true;
        for (const auto& out : outcomes)
          all_valid = all_valid && out.status == VcStatus::Valid;
        if (!all_valid)
          throw std::runtime_error(opname + " has an invalid condition in " +
                                   name);
        RunReport direct = run(*spec, opname);
        if (!direct.failures.empty())
          throw std::runtime_error(opname + " fails directly in " + name);
        ++procedures_validated;
      }
    };
    for (long long n : {3LL, 5LL, 8LL}) check_file("gcd.spec", n_of(n));
    check_file("verified.spec", nm_of(3, 1));
    check_file("verified.spec", nm_of(2, 2));
    EXPECT(procedures_validated >= 10);
  });

  criterion(8, "round-trip suites: corpus files, 10000 trees, JSON exports", [] {
    for (const char* name :
         {"gcd.spec", "bubblesort.spec", "fig5.spec", "verified.spec"}) {
      auto tree = parse_source(*source_of(read_file(corpus_path(name)), name));
      auto reparsed = parse_source(*source_of(pretty_print(*tree), name));
      EXPECT(equal(*tree, *reparsed));
    }
    genoracle::FormulaGen gen(515151);
    for (int i = 0; i < 10000; ++i) {
      ExprPtr e = gen.closed_expr(4);
      ExprPtr back = expr_of(pretty_print(*e));
      EXPECT(equal(*e, *back));
    }
    {  // JSON exports round-trip structurally
      auto spec = typed_corpus("bubblesort.spec", nm_of(4, 3));
      const OpInfo* op = spec->find_operation("bubbleSort");
      TraceGraph g = build_trace(*spec, "bubbleSort", input_tuple(*op, 1));
      EXPECT(equal(g, trace_from_json(emit_json(g))));
      auto fig5 = typed_corpus("fig5.spec");
      EvalTree t = record_eval_tree(*fig5, "forallPexistsQFormula", true);
      EXPECT(equal(t, tree_from_json(emit_json(t))));
    }
  });

  if (g_failures == 0) {
    std::printf("All acceptance criteria passed.\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED.\n", g_failures);
  return 1;
}

#include <doctest.h>

#include "finicheck/errors.hpp"
#include "helpers.hpp"

using namespace finicheck;
using namespace testutil;

namespace {

RuntimeErrorKind error_kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RuntimeException& e) {
    return e.error().kind;
  }
  FAIL("expected a runtime error");
  return RuntimeErrorKind::Timeout;
}

}  // namespace

TEST_CASE("divides and gcd evaluate per the theory") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  Interp interp(*spec, EvalMode::Det);
  CHECK(interp.call_det("divides", {Value::of_int(2), Value::of_int(6)})
            .as_bool());
  CHECK(!interp.call_det("divides", {Value::of_int(4), Value::of_int(6)})
             .as_bool());
  // theorem gcd0: m≠0 ⇒ gcd(m,0) = m
  CHECK(interp.call_det("gcd", {Value::of_int(5), Value::of_int(0)}).as_int() ==
        5);
  // implicit definition picks the greatest common divisor
  CHECK(interp.call_det("gcd", {Value::of_int(4), Value::of_int(6)}).as_int() ==
        2);
  // cross-check against a brute-force oracle over the whole carrier
  auto gcd_oracle = [](long long m, long long n) {
    long long best = 0;
    for (long long r = 1; r <= 20; ++r)
      if ((m % r == 0 || m == 0) && (n % r == 0 || n == 0)) best = r;
    return best;
  };
  for (long long m = 0; m <= 20; ++m)
    for (long long n = 0; n <= 20; ++n) {
      if (m == 0 && n == 0) continue;
      CHECK(interp.call_det("gcd", {Value::of_int(m), Value::of_int(n)})
                .as_int() == gcd_oracle(m, n));
    }
}

TEST_CASE("existential with no witness is false after full enumeration") {
  auto spec = typed_of("theorem t() ⇔ ∃p:ℤ[0,4]. 3⋅p = 7;");
  Interp interp(*spec, EvalMode::Det);
  CHECK(!interp.call_det("t", {}).as_bool());
}

TEST_CASE("choose: deterministic first value, nondet stream, failure") {
  auto spec = typed_of("fun f(): ℤ[0,3] = choose x:ℤ[0,3] with x⋅x = x;\n"
                       "fun g(): ℤ[1,3] = choose x:ℤ[1,3] with x < 1;");
  {
    Interp det(*spec, EvalMode::Det);
    CHECK(det.call_det("f", {}).as_int() == 0);
  }
  {
    Interp nd(*spec, EvalMode::Nondet);
    std::vector<long long> outcomes;
    nd.call_stream("f", {}, [&](const Value& v) {
      outcomes.push_back(v.as_int());
      return true;
    });
    CHECK(outcomes == std::vector<long long>{0, 1});
  }
  {
    Interp det(*spec, EvalMode::Det);
    CHECK(error_kind_of([&] { det.call_det("g", {}); }) ==
          RuntimeErrorKind::ChooseFailure);
  }
}

TEST_CASE("gcdp executes the subtraction Euclid with passing annotations") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  Interp interp(*spec, EvalMode::Det);
  CHECK(interp.call_det("gcdp", {Value::of_int(6), Value::of_int(4)}).as_int() ==
        2);
  CHECK(interp.call_det("gcdp", {Value::of_int(20), Value::of_int(15)})
            .as_int() == 5);
}

TEST_CASE("a false invariant is reported on iteration 0") {
  auto spec = typed_of(
      "proc p(x:ℤ[0,3]): ℤ[0,3] {\n"
      "  var i:ℤ[0,4] ≔ 0;\n"
      "  while i < x do invariant false; decreases x-i; { i ≔ i+1 }\n"
      "  return x;\n"
      "}");
  Interp interp(*spec, EvalMode::Det);
  try {
    interp.call_det("p", {Value::of_int(2)});
    FAIL("expected InvariantViolation");
  } catch (const RuntimeException& e) {
    CHECK(e.error().kind == RuntimeErrorKind::InvariantViolation);
    CHECK(e.error().iteration == 0);
  }
}

TEST_CASE("binding a value outside the declared range is a range violation") {
  auto typed = typed_of(
      "proc p(x:ℤ[0,30]): ℤ[0,30] {\n"
      "  var v:ℤ[0,20] ≔ x;\n"
      "  return v;\n"
      "}");
  Interp interp(*typed, EvalMode::Det);
  CHECK(interp.call_det("p", {Value::of_int(20)}).as_int() == 20);
  CHECK(error_kind_of([&] { interp.call_det("p", {Value::of_int(21)}); }) ==
        RuntimeErrorKind::RangeViolation);
}

TEST_CASE("arithmetic beyond a variable's range is fine inside expressions") {
  // decreases a+b may exceed N; only bindings enforce ranges
  auto spec = typed_of(
      "pred p(a:ℤ[0,20], b:ℤ[0,20]) ⇔ a+b ≥ 0;");
  Interp interp(*spec, EvalMode::Det);
  CHECK(interp.call_det("p", {Value::of_int(20), Value::of_int(20)}).as_bool());
}

TEST_CASE("division and remainder by zero raise range violations") {
  auto spec = typed_of("fun f(x:ℤ[0,3]): ℤ[0,3] = 1 / x;\n"
                       "fun g(x:ℤ[0,3]): ℤ[0,3] = 1 % x;");
  Interp interp(*spec, EvalMode::Det);
  CHECK(error_kind_of([&] { interp.call_det("f", {Value::of_int(0)}); }) ==
        RuntimeErrorKind::RangeViolation);
  CHECK(error_kind_of([&] { interp.call_det("g", {Value::of_int(0)}); }) ==
        RuntimeErrorKind::RangeViolation);
}

TEST_CASE("call_operation checks contracts") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  Interp interp(*spec, EvalMode::Det);
  // inadmissible tuple violates the precondition when invoked directly
  CHECK(error_kind_of([&] {
          interp.call_det("gcdp", {Value::of_int(0), Value::of_int(0)});
        }) == RuntimeErrorKind::PreconditionViolation);
  // theorem applications evaluate their bodies
  CHECK(interp.call_det("gcd1", {Value::of_int(3), Value::of_int(5)}).as_bool());
}

TEST_CASE("postcondition violations carry the result environment") {
  auto spec = typed_of(
      "proc bad(x:ℤ[0,5]): ℤ[0,5]\n"
      "  ensures result = x;\n"
      "{\n"
      "  var y:ℤ[0,5] ≔ 0;\n"
      "  return y;\n"
      "}");
  Interp interp(*spec, EvalMode::Det);
  try {
    interp.call_det("bad", {Value::of_int(3)});
    FAIL("expected PostconditionViolation");
  } catch (const RuntimeException& e) {
    CHECK(e.error().kind == RuntimeErrorKind::PostconditionViolation);
    bool has_result = false;
    for (const auto& [name, value] : e.error().environment)
      if (name == "result") has_result = true;
    CHECK(has_result);
  }
}

TEST_CASE("assertions are checked") {
  auto spec = typed_of(
      "proc p(x:ℤ[0,5]): ℤ[0,5] { assert x > 0; return x; }");
  Interp interp(*spec, EvalMode::Det);
  CHECK(interp.call_det("p", {Value::of_int(1)}).as_int() == 1);
  CHECK(error_kind_of([&] { interp.call_det("p", {Value::of_int(0)}); }) ==
        RuntimeErrorKind::AssertionViolation);
}

TEST_CASE("det outcome equals the first nondet outcome") {
  auto spec = typed_corpus("gcd.spec", n_of(8));
  for (const char* text : {
           "gcd(4, 6)",
           "gcd(8, 0)",
           "(choose x:ℤ[0,7] with divides(x, 6)) + 1",
           "∀m:nat. m ≠ 0 ⇒ divides(1, m)",
       }) {
    ExprPtr e = expr_of(text);
    auto probe = std::make_shared<Decl>();
    probe->kind = DeclKind::Theorem;
    probe->name = "_probe";
    probe->body_expr = mk_binary(BinaryOp::Eq, e, e);
    auto ext = std::make_shared<Spec>();
    ext->decls = spec->spec->decls;
    ext->decls.push_back(probe);
    auto typed = resolve(ext, spec->bindings, spec->source);

    Interp det(*typed, EvalMode::Det);
    Interp nd(*typed, EvalMode::Nondet);
    Frame fd, fn;
    Value d = det.eval_det(*e, fd);
    Value first;
    bool got = false;
    nd.eval_stream(*e, fn, [&](const Value& v) {
      first = v;
      got = true;
      return false;  // lazy: stop after the first outcome
    });
    REQUIRE(got);
    CHECK_MESSAGE(d == first, text);
  }
}

TEST_CASE("quantifier evaluation equals a brute-force loop over the carrier") {
  auto spec = typed_corpus("gcd.spec", n_of(12));
  Interp interp(*spec, EvalMode::Det);
  // ∀m:nat. divides(1, m) — check against an explicit loop
  ExprPtr e = expr_of("∀m:nat. divides(1, m)");
  auto probe = std::make_shared<Decl>();
  probe->kind = DeclKind::Theorem;
  probe->name = "_probe";
  probe->body_expr = e;
  auto ext = std::make_shared<Spec>();
  ext->decls = spec->spec->decls;
  ext->decls.push_back(probe);
  auto typed = resolve(ext, spec->bindings, spec->source);
  Interp fresh(*typed, EvalMode::Det);
  Frame f;
  bool via_eval = fresh.eval_det(*e, f).as_bool();
  bool via_loop = true;
  enumerate(*typed->type_names.at("nat"), [&](const Value& v) {
    via_loop = via_loop &&
               fresh.call_det("divides", {Value::of_int(1), v}).as_bool();
    return true;
  });
  CHECK(via_eval == via_loop);
}

TEST_CASE("evaluation leaves the environment unchanged") {
  auto spec = typed_corpus("gcd.spec", n_of(10));
  ExprPtr e = expr_of("∃p:nat. p ⋅ 2 = 8");
  auto probe = std::make_shared<Decl>();
  probe->kind = DeclKind::Theorem;
  probe->name = "_probe";
  probe->body_expr = e;
  auto ext = std::make_shared<Spec>();
  ext->decls = spec->spec->decls;
  ext->decls.push_back(probe);
  auto typed = resolve(ext, spec->bindings, spec->source);
  Interp interp(*typed, EvalMode::Det);
  Frame f;
  f.push("x", Value::of_int(7), nullptr);
  auto before = f.snapshot();
  CHECK(interp.eval_det(*e, f).as_bool());
  auto after = f.snapshot();
  REQUIRE(before.size() == after.size());
  for (size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].first == after[i].first);
    CHECK(before[i].second == after[i].second);
  }
}

TEST_CASE("nondeterministic procedures run every choose branch") {
  auto spec = typed_of(
      "proc pick(x:ℤ[0,3]): ℤ[0,3]\n"
      "  ensures result ≥ 0;\n"
      "{\n"
      "  var v:ℤ[0,3] ≔ choose y:ℤ[0,3] with y ≥ x;\n"
      "  return v;\n"
      "}");
  Interp nd(*spec, EvalMode::Nondet);
  std::vector<long long> outcomes;
  nd.call_stream("pick", {Value::of_int(2)}, [&](const Value& v) {
    outcomes.push_back(v.as_int());
    return true;
  });
  CHECK(outcomes == std::vector<long long>{2, 3});
}

TEST_CASE("nondet postconditions must hold on every branch") {
  auto spec = typed_of(
      "proc pick(x:ℤ[0,3]): ℤ[0,3]\n"
      "  ensures result = x;\n"
      "{\n"
      "  var v:ℤ[0,3] ≔ choose y:ℤ[0,3] with y ≥ x;\n"
      "  return v;\n"
      "}");
  Interp nd(*spec, EvalMode::Nondet);
  std::vector<long long> outcomes;
  CHECK(error_kind_of([&] {
          nd.call_stream("pick", {Value::of_int(2)}, [&](const Value& v) {
            outcomes.push_back(v.as_int());
            return true;
          });
        }) == RuntimeErrorKind::PostconditionViolation);
  CHECK(outcomes == std::vector<long long>{2});  // the x branch passed first
}

TEST_CASE("letpar binds simultaneously") {
  auto spec = typed_of("fun f(a:ℤ[0,9], b:ℤ[0,9]): ℤ[0,9]\n"
                       "  requires a ≤ 9 ∧ b ≤ 9;\n"
                       "= letpar x = b, y = a in (if x ≥ y then x - y else y - x);");
  Interp interp(*spec, EvalMode::Det);
  CHECK(interp.call_det("f", {Value::of_int(2), Value::of_int(7)}).as_int() ==
        5);
}

TEST_CASE("per-input timeout raises a timeout error") {
  auto spec = typed_of(
      "pred slow() ⇔ ∀a:ℤ[0,400], b:ℤ[0,400], c:ℤ[0,120]. a+b+c ≥ 0;");
  EvalLimits limits;
  limits.timeout = std::chrono::milliseconds(5);
  Interp interp(*spec, EvalMode::Det, nullptr, limits);
  CHECK(error_kind_of([&] { interp.call_det("slow", {}); }) ==
        RuntimeErrorKind::Timeout);
}

TEST_CASE("frame growth during continuations leaves no dangling state") {
  // index expressions with their own bindings grow the frame mid-assignment
  auto spec = typed_of(
      "proc put(a:Array[3, ℤ[0,5]], x:ℤ[0,5]): Array[3, ℤ[0,5]]\n"
      "  ensures result[1] = x;\n"
      "{\n"
      "  var b:Array[3, ℤ[0,5]] ≔ a;\n"
      "  b[let one = 1 in one] ≔ x;\n"
      "  return b;\n"
      "}");
  Value arr = Value::array({Value::of_int(0), Value::of_int(0), Value::of_int(0)});
  for (EvalMode mode : {EvalMode::Det, EvalMode::Nondet}) {
    Interp interp(*spec, mode);
    std::vector<Value> got;
    interp.call_stream("put", {arr, Value::of_int(4)}, [&](const Value& v) {
      got.push_back(v);
      return true;
    });
    REQUIRE(got.size() == 1);
    CHECK(got[0].to_string() == "[0,4,0]");
  }
}

TEST_CASE("nondet procedure calls inside procedures return sound results") {
  auto spec = typed_of(
      "proc inc(x:ℤ[0,9]): ℤ[0,9]\n"
      "  requires x < 9;\n"
      "  ensures result = x+1;\n"
      "{\n"
      "  return x+1;\n"
      "}\n"
      "proc twice(x:ℤ[0,7]): ℤ[0,9]\n"
      "  ensures result = x+2;\n"
      "{\n"
      "  var a:ℤ[0,9] ≔ inc(x);\n"
      "  var b:ℤ[0,9] ≔ inc(a);\n"
      "  return b;\n"
      "}");
  Interp nd(*spec, EvalMode::Nondet);
  std::vector<long long> got;
  nd.call_stream("twice", {Value::of_int(3)}, [&](const Value& v) {
    got.push_back(v.as_int());
    return true;
  });
  CHECK(got == std::vector<long long>{5});
}

TEST_CASE("outcome streams are lazy and expose first and collect") {
  auto spec = typed_corpus("gcd.spec", n_of(9));
  ExprPtr e = expr_of("choose x:nat with divides(3, x)");
  auto probe = std::make_shared<Decl>();
  probe->kind = DeclKind::Theorem;
  probe->name = "_probe";
  probe->body_expr = mk_binary(BinaryOp::Eq, e, e);
  auto ext = std::make_shared<Spec>();
  ext->decls = spec->spec->decls;
  ext->decls.push_back(probe);
  auto typed = resolve(ext, spec->bindings, spec->source);

  Interp nd(*typed, EvalMode::Nondet);
  Frame frame;
  OutcomeStream stream = nd.outcomes(e, frame);
  CHECK(stream.first().as_int() == 0);  // multiples of 3 in [0,9]
  std::vector<long long> all;
  for (const Value& v : stream.collect()) all.push_back(v.as_int());
  CHECK(all == std::vector<long long>{0, 3, 6, 9});
  // laziness: stop after two outcomes
  int seen = 0;
  bool completed = stream.for_each([&](const Value&) { return ++seen < 2; });
  CHECK(!completed);
  CHECK(seen == 2);

  Interp det(*typed, EvalMode::Det);
  OutcomeStream one = det.outcomes(e, frame);
  CHECK(one.collect().size() == 1);
  CHECK(one.first().as_int() == 0);
}

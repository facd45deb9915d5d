#include <doctest.h>

#include "helpers.hpp"

using namespace finicheck;
using namespace testutil;

TEST_CASE("gcd2 at N=20: 441 inputs, all checked, none inadmissible") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  CheckConfig cfg;
  cfg.operation = "gcd2";
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.total_inputs == 441);
  CHECK(r.checked == 441);
  CHECK(r.inadmissible == 0);
  CHECK(r.failures.empty());
}

TEST_CASE("gcdp at N=20: 440 checked, 1 inadmissible, the tuple (0,0)") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  CheckConfig cfg;
  cfg.operation = "gcdp";
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.total_inputs == 441);
  CHECK(r.checked == 440);
  CHECK(r.inadmissible == 1);
  CHECK(r.failures.empty());
  // the sole inadmissible tuple is (0,0): verify by direct admissibility
  Interp interp(*spec, EvalMode::Det);
  const OpInfo* op = spec->find_operation("gcdp");
  for (uint64_t k = 0; k < 441; ++k) {
    auto args = input_tuple(*op, k);
    bool admissible = interp.requires_holds(*op, args);
    bool is_zero_zero = args[0].as_int() == 0 && args[1].as_int() == 0;
    CHECK(admissible == !is_zero_zero);
  }
}

TEST_CASE("a failing theorem reports a counterexample environment") {
  auto spec = typed_of(
      "val N: ℕ;\ntype nat = ℕ[N];\ntheorem bad(m:nat) ⇔ m < N;", n_of(20));
  CheckConfig cfg;
  cfg.operation = "bad";
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.total_inputs == 21);
  CHECK(r.checked == 20);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].input[0].as_int() == 20);
  std::string text = format_report(r);
  CHECK(text.find("Executing bad(ℤ) with all 21 inputs.") == 0);
  CHECK(text.find("m = 20") != std::string::npos);
}

TEST_CASE("report header and summary line shapes") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  CheckConfig cfg;
  cfg.operation = "gcd2";
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  std::string text = format_report(r);
  CHECK(text.find("Executing gcd2(ℤ,ℤ) with all 441 inputs.") == 0);
  CHECK(text.find("checked, 0 inadmissible).") != std::string::npos);
  // duration is reported in milliseconds between the parentheses
  CHECK(text.find(" ms, 441 checked") != std::string::npos);
}

TEST_CASE("a zero-parameter operation runs on the single empty input") {
  auto spec = typed_of("pred taut() ⇔ true;");
  CheckConfig cfg;
  cfg.operation = "taut";
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.total_inputs == 1);
  CHECK(r.checked == 1);
  std::string text = format_report(r);
  CHECK(text.find("with all 1 inputs.") != std::string::npos);
}

TEST_CASE("inadmissible soundness: requires false exactly marks inputs") {
  auto spec = typed_of(
      "pred even(x:ℤ[0,9]) ⇔ x % 2 = 0;\n"
      "fun half(x:ℤ[0,9]): ℤ[0,9] requires even(x); = x / 2;");
  CheckConfig cfg;
  cfg.operation = "half";
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.total_inputs == 10);
  CHECK(r.checked == 5);
  CHECK(r.inadmissible == 5);
}

TEST_CASE("serial and parallel runs produce identical reports") {
  auto spec = typed_corpus("gcd.spec", n_of(15));
  for (const char* opname : {"gcd1", "gcdp"}) {
    CheckConfig serial;
    serial.operation = opname;
    serial.workers = 1;
    RunReport a = run_operation(*spec, serial);
    CheckConfig parallel = serial;
    parallel.workers = 4;
    RunReport b = run_operation(*spec, parallel);
    CHECK(a.total_inputs == b.total_inputs);
    CHECK(a.checked == b.checked);
    CHECK(a.inadmissible == b.inadmissible);
    CHECK(a.failures.size() == b.failures.size());
    // per-input output is restored into canonical order
    REQUIRE(a.output_lines.size() == b.output_lines.size());
    for (size_t i = 0; i < a.output_lines.size(); ++i)
      CHECK(a.output_lines[i] == b.output_lines[i]);
  }
}

TEST_CASE("parallel failure lists are deterministic and ordered") {
  auto spec = typed_of(
      "theorem few(m:ℤ[0,99]) ⇔ m % 7 ≠ 3;");
  CheckConfig serial;
  serial.operation = "few";
  serial.silent = true;
  serial.workers = 1;
  CheckConfig parallel = serial;
  parallel.workers = 4;
  RunReport a = run_operation(*spec, serial);
  RunReport b = run_operation(*spec, parallel);
  REQUIRE(a.failures.size() == b.failures.size());
  for (size_t i = 0; i < a.failures.size(); ++i) {
    CHECK(a.failures[i].input_index == b.failures[i].input_index);
    CHECK(a.failures[i].input[0] == b.failures[i].input[0]);
  }
  // ordered by input index
  for (size_t i = 1; i < b.failures.size(); ++i)
    CHECK(b.failures[i - 1].input_index < b.failures[i].input_index);
}

TEST_CASE("fail-fast aborts at the first failure") {
  auto spec = typed_of("theorem few(m:ℤ[0,99]) ⇔ m < 10;");
  CheckConfig cfg;
  cfg.operation = "few";
  cfg.silent = true;
  cfg.fail_fast = true;
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.aborted);
  CHECK(r.failures.size() == 1);
  CHECK(r.processed == 11);
  CHECK(r.failures[0].input[0].as_int() == 10);
  std::string text = format_report(r);
  CHECK(text.find("aborted after 11 of 100 inputs") != std::string::npos);
}

TEST_CASE("exhaustiveness: total inputs is the carrier product") {
  auto spec = typed_corpus("bubblesort.spec", nm_of(4, 3));
  const OpInfo* op = spec->find_operation("cswap");
  CHECK(input_space_size(*op) == 2401ull * 9 * 9);
}

TEST_CASE("report JSON carries counts and counterexamples") {
  auto spec = typed_of("theorem bad(m:ℤ[0,4]) ⇔ m ≠ 3;");
  CheckConfig cfg;
  cfg.operation = "bad";
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  std::string json = report_to_json(r);
  CHECK(json.find("\"total_inputs\": 5") != std::string::npos);
  CHECK(json.find("\"checked\": 4") != std::string::npos);
  CHECK(json.find("\"m\": \"3\"") != std::string::npos);
}

TEST_CASE("nondet checking counts each input once despite many outcomes") {
  auto spec = typed_of(
      "fun any(x:ℤ[0,2]): ℤ[0,9] = choose y:ℤ[0,9] with y ≥ x;");
  CheckConfig cfg;
  cfg.operation = "any";
  cfg.mode = EvalMode::Nondet;
  cfg.silent = true;
  RunReport r = run_operation(*spec, cfg);
  CHECK(r.total_inputs == 3);
  CHECK(r.checked == 3);
}

#include <doctest.h>

#include <set>

#include "finicheck/errors.hpp"
#include "helpers.hpp"

using namespace finicheck;
using namespace testutil;

TEST_CASE("gcd spec at N=20 resolves nat to ℤ[0,20]") {
  auto spec = typed_corpus("gcd.spec", n_of(20));
  auto nat = spec->type_names.at("nat");
  CHECK(nat->kind == TypeDen::Kind::Int);
  CHECK(nat->lo == 0);
  CHECK(nat->hi == 20);
  CHECK(carrier_size(*nat) == 21);
}

TEST_CASE("bubble-sort spec at N=4 M=3 resolves elem and array") {
  auto spec = typed_corpus("bubblesort.spec", nm_of(4, 3));
  auto elem = spec->type_names.at("elem");
  CHECK(elem->lo == -3);
  CHECK(elem->hi == 3);
  auto arr = spec->type_names.at("array");
  REQUIRE(arr->kind == TypeDen::Kind::Array);
  CHECK(arr->len == 4);
  CHECK(carrier_size(*arr) == 2401);  // 7^4
}

TEST_CASE("unbound constant reports its name") {
  try {
    typed_of("val K: ℕ;\ntype t = ℕ[K];");
    FAIL("expected UnboundConstantError");
  } catch (const UnboundConstantError& e) {
    CHECK(e.name() == "K");
  }
}

TEST_CASE("empty intervals are rejected") {
  CHECK_THROWS_AS(typed_of("type t = ℤ[5,3];"), TypeError);
}

TEST_CASE("rebinding an in-file constant is an error") {
  CHECK_THROWS_AS(typed_of("val N = 4;", {ConstBinding{"N", 7}}), TypeError);
}

TEST_CASE("a binding for an unknown constant is rejected") {
  CHECK_THROWS_AS(typed_of("val N: ℕ;", {ConstBinding{"N", 3},
                                          ConstBinding{"X", 1}}),
                  UnboundConstantError);
}

TEST_CASE("unbounded ℕ outside val declarations is rejected") {
  CHECK_THROWS_AS(typed_of("pred p(x:ℕ) ⇔ x = x;"), TypeError);
}

TEST_CASE("carrier sizes follow the stated formulas") {
  CHECK(carrier_size(*TypeDen::boolean()) == 2);
  CHECK(carrier_size(*TypeDen::int_range(0, 20)) == 21);
  CHECK(carrier_size(*TypeDen::array(4, TypeDen::int_range(-3, 3))) == 2401);
  CHECK(carrier_size(*TypeDen::set(TypeDen::boolean())) == 4);
  CHECK(carrier_size(*TypeDen::tuple({TypeDen::int_range(0, 2),
                                      TypeDen::boolean()})) == 6);
}

TEST_CASE("carrier size overflow reports instead of wrapping") {
  // 2^(2^20) and similar blowups must raise
  auto huge = TypeDen::array(64, TypeDen::int_range(0, 255));
  CHECK_THROWS_AS(carrier_size(*huge), CarrierOverflowError);
  auto hugeset = TypeDen::set(TypeDen::int_range(0, 127));
  CHECK_THROWS_AS(carrier_size(*hugeset), CarrierOverflowError);
}

TEST_CASE("integers enumerate ascending") {
  auto den = TypeDen::int_range(-1, 1);
  std::vector<long long> got;
  enumerate(*den, [&](const Value& v) {
    got.push_back(v.as_int());
    return true;
  });
  CHECK(got == std::vector<long long>{-1, 0, 1});
}

TEST_CASE("arrays enumerate with index 0 varying fastest") {
  auto den = TypeDen::array(4, TypeDen::int_range(-3, 3));
  Value first = carrier_value_at(*den, 0);
  Value second = carrier_value_at(*den, 1);
  CHECK(first.to_string() == "[-3,-3,-3,-3]");
  CHECK(second.to_string() == "[-2,-3,-3,-3]");
}

TEST_CASE("sets enumerate by subset bitmask, element 0 lowest bit") {
  auto den = TypeDen::set(TypeDen::int_range(0, 1));
  std::vector<std::string> got;
  enumerate(*den, [&](const Value& v) {
    got.push_back(v.to_string());
    return true;
  });
  CHECK(got == std::vector<std::string>{"{}", "{0}", "{1}", "{0,1}"});
}

TEST_CASE("tuples enumerate with component 0 fastest") {
  auto den = TypeDen::tuple({TypeDen::int_range(0, 1), TypeDen::int_range(0, 1)});
  CHECK(carrier_value_at(*den, 0).to_string() == "⟨0,0⟩");
  CHECK(carrier_value_at(*den, 1).to_string() == "⟨1,0⟩");
  CHECK(carrier_value_at(*den, 2).to_string() == "⟨0,1⟩");
}

TEST_CASE("enumeration: count agreement, distinctness, determinism") {
  std::vector<DenPtr> dens = {
      TypeDen::int_range(-7, 9),
      TypeDen::array(3, TypeDen::int_range(0, 3)),
      TypeDen::set(TypeDen::int_range(0, 5)),
      TypeDen::tuple({TypeDen::boolean(), TypeDen::int_range(-2, 2),
                      TypeDen::set(TypeDen::boolean())}),
      TypeDen::array(2, TypeDen::set(TypeDen::int_range(0, 2))),
  };
  for (const auto& den : dens) {
    uint64_t n = carrier_size(*den);
    REQUIRE(n <= 100000);
    std::set<std::string> seen;
    uint64_t count = 0;
    enumerate(*den, [&](const Value& v) {
      CHECK(value_fits(*den, v));
      seen.insert(v.to_string());
      ++count;
      return true;
    });
    CHECK(count == n);            // count agreement
    CHECK(seen.size() == n);      // distinctness
    for (uint64_t i = 0; i < n; ++i)  // determinism: random access agrees
      CHECK(carrier_value_at(*den, i) == carrier_value_at(*den, i));
  }
}

TEST_CASE("lazy enumeration stops early") {
  auto den = TypeDen::int_range(0, 1000000);
  int calls = 0;
  bool completed = enumerate(*den, [&](const Value&) { return ++calls < 3; });
  CHECK(!completed);
  CHECK(calls == 3);
}

TEST_CASE("loop metadata: modified variables in first-assignment order") {
  auto spec = typed_corpus("gcd.spec", n_of(5));
  const OpInfo* op = spec->find_operation("gcdp");
  REQUIRE(op);
  const Command& body = *op->decl->body_cmd;
  const Command* loop = nullptr;
  for (const auto& c : body.commands)
    if (c->kind == CmdKind::While) loop = c.get();
  REQUIRE(loop);
  const LoopInfo& li = spec->loops.at(loop);
  CHECK(li.modified == std::vector<std::string>{"a", "b"});
}

TEST_CASE("body-local variables stay out of the modified set") {
  auto spec = typed_corpus("verified.spec", nm_of(3, 1));
  const OpInfo* op = spec->find_operation("gcdm");
  const Command* loop = nullptr;
  for (const auto& c : op->decl->body_cmd->commands)
    if (c->kind == CmdKind::While) loop = c.get();
  REQUIRE(loop);
  const LoopInfo& li = spec->loops.at(loop);
  CHECK(li.modified == std::vector<std::string>{"a", "b"});  // not t
}

TEST_CASE("old_-prefixed user declarations are rejected") {
  CHECK_THROWS_AS(typed_of("val old_x = 1;"), TypeError);
  CHECK_THROWS_AS(
      typed_of("proc p(x:ℤ[0,3]): ℤ[0,3] { var old_y:ℤ[0,3] ≔ 0; return x; }"),
      TypeError);
}

TEST_CASE("assignment to parameters is rejected") {
  CHECK_THROWS_AS(
      typed_of("proc p(x:ℤ[0,3]): ℤ[0,3] { x ≔ 1; return x; }"),
      SpanError);
}

TEST_CASE("type errors carry spans") {
  try {
    typed_of("pred p(x:ℤ[0,3]) ⇔ x + true = 1;");
    FAIL("expected TypeError");
  } catch (const TypeError& e) {
    CHECK(e.span().end > e.span().begin);
  }
}

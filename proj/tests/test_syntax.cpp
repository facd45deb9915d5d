#include <doctest.h>

#include <random>

#include "finicheck/errors.hpp"
#include "helpers.hpp"

using namespace finicheck;
using namespace testutil;

static std::vector<TokenKind> kinds_of(const std::string& text) {
  SourceFile src("t", text);
  std::vector<TokenKind> out;
  for (const auto& t : tokenize(src))
    if (t.kind != TokenKind::EndOfFile) out.push_back(t.kind);
  return out;
}

TEST_CASE("unicode operators lex to the expected kinds") {
  auto ks = kinds_of("∀x:T");
  REQUIRE(ks.size() == 4);
  CHECK(ks[0] == TokenKind::Forall);
  CHECK(ks[1] == TokenKind::Ident);
  CHECK(ks[2] == TokenKind::Colon);
  CHECK(ks[3] == TokenKind::Ident);
}

TEST_CASE("ascii aliases produce identical token-kind sequences") {
  CHECK(kinds_of("forall x:T") == kinds_of("∀x:T"));
  CHECK(kinds_of("a := b") == kinds_of("a ≔ b"));
  CHECK(kinds_of("a <= b and c >= d") == kinds_of("a ≤ b ∧ c ≥ d"));
  CHECK(kinds_of("a != b or a ~= b") == kinds_of("a ≠ b ∨ a ≠ b"));
  CHECK(kinds_of("not p implies q iff r") == kinds_of("¬p ⇒ q ⇔ r"));
  CHECK(kinds_of("m*p") == kinds_of("m⋅p"));
  CHECK(kinds_of("Nat[4]") == kinds_of("ℕ[4]"));
  CHECK(kinds_of("Int[0,3]") == kinds_of("ℤ[0,3]"));
  CHECK(kinds_of("exists y:T") == kinds_of("∃y:T"));
  CHECK(kinds_of("x isin s") == kinds_of("x ∈ s"));
}

TEST_CASE("lexemes plus skipped trivia reconstruct the source") {
  std::string text = read_file(corpus_path("gcd.spec"));
  SourceFile src("gcd.spec", text);
  auto tokens = tokenize(src);
  // every lexeme must appear at its span, and spans must be ordered
  uint32_t last_end = 0;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::EndOfFile) break;
    CHECK(t.span.begin >= last_end);
    CHECK(src.slice(t.span) == t.lexeme);
    CHECK(!t.lexeme.empty());
    last_end = t.span.end;
  }
}

TEST_CASE("characters outside the alphabet raise LexError with a span") {
  SourceFile src("t", "a § b");
  CHECK_THROWS_AS(tokenize(src), LexError);
  try {
    tokenize(src);
  } catch (const LexError& e) {
    CHECK(e.span().begin == 2);
  }
}

TEST_CASE("block comments must terminate") {
  SourceFile src("t", "val N = /* oops");
  CHECK_THROWS_AS(tokenize(src), LexError);
}

TEST_CASE("the gcd corpus parses into eight declarations") {
  auto spec = parse_source(*source_of(read_file(corpus_path("gcd.spec"))));
  REQUIRE(spec->decls.size() == 8);
  CHECK(spec->decls[0]->kind == DeclKind::Val);
  CHECK(spec->decls[1]->kind == DeclKind::Type);
  CHECK(spec->decls[2]->kind == DeclKind::Pred);
  CHECK(spec->decls[3]->kind == DeclKind::Fun);
  CHECK(spec->decls[4]->kind == DeclKind::Theorem);
  CHECK(spec->decls[5]->kind == DeclKind::Theorem);
  CHECK(spec->decls[6]->kind == DeclKind::Theorem);
  CHECK(spec->decls[7]->kind == DeclKind::Proc);
  CHECK(spec->decls[7]->name == "gcdp");
  CHECK(spec->decls[7]->ensures_.size() == 1);
}

TEST_CASE("conjunction binds tighter than disjunction") {
  ExprPtr e = expr_of("a ∧ b ∨ c");
  REQUIRE(e->kind == ExprKind::Binary);
  CHECK(e->binary_op == BinaryOp::Or);
  CHECK(e->children[0]->binary_op == BinaryOp::And);
}

TEST_CASE("implication is right-associative and weaker than disjunction") {
  ExprPtr e = expr_of("a ⇒ b ⇒ c");
  CHECK(e->binary_op == BinaryOp::Implies);
  CHECK(e->children[1]->binary_op == BinaryOp::Implies);
  ExprPtr f = expr_of("a ∨ b ⇒ c");
  CHECK(f->binary_op == BinaryOp::Implies);
}

TEST_CASE("quantifier bodies extend maximally to the right") {
  ExprPtr e = expr_of("∀x:T. p(x) ⇒ ∃y:T. q(x,y)");
  REQUIRE(e->kind == ExprKind::Forall);
  const Expr& body = *e->children[0];
  REQUIRE(body.kind == ExprKind::Binary);
  CHECK(body.binary_op == BinaryOp::Implies);
  CHECK(body.children[1]->kind == ExprKind::Exists);
}

TEST_CASE("negated quantifier swallows the full body") {
  ExprPtr e = expr_of("a ∧ ¬∃r:nat. p(r) ∧ q(r)");
  REQUIRE(e->binary_op == BinaryOp::And);
  const Expr& rhs = *e->children[1];
  REQUIRE(rhs.kind == ExprKind::Unary);
  REQUIRE(rhs.children[0]->kind == ExprKind::Exists);
  CHECK(rhs.children[0]->children[0]->binary_op == BinaryOp::And);
}

TEST_CASE("alias equivalence: ascii source yields an identical tree") {
  std::string unicode = read_file(corpus_path("gcd.spec"));
  PrintOptions ascii;
  ascii.ascii = true;
  auto tree = parse_source(*source_of(unicode));
  std::string transliterated = pretty_print(*tree, ascii);
  auto again = parse_source(*source_of(transliterated));
  CHECK(equal(*tree, *again));
}

TEST_CASE("parse errors carry the offending span and expected set") {
  SourceFile src("t", "val N: ℕ");
  try {
    parse_source(src);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.span().begin == 8);
    CHECK(!e.expected().empty());
  }
}

TEST_CASE("comparisons do not chain") {
  CHECK_THROWS_AS(expr_of("a = b = c"), ParseError);
}

TEST_CASE("span nesting: children lie within their parents") {
  ExprPtr e = expr_of("(a + b) ⋅ c ≤ d ∧ ¬p(x, y)");
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    for (const auto& ch : n.children) {
      CHECK(n.span.contains(ch->span));
      walk(*ch);
    }
    for (const auto& b : n.bindings) {
      CHECK(n.span.contains(b.value->span));
      walk(*b.value);
    }
  };
  walk(*e);
}

TEST_CASE("pretty print: spec'd output shapes") {
  std::vector<Binder> bs{
      Binder{"y",
             std::make_shared<TypeExpr>(
                 TypeExpr{TypeExprKind::Name, {}, "T", {}, {}}),
             Span{}}};
  ExprPtr q = mk_quant(ExprKind::Exists, bs,
                       mk_call("q", {mk_var("x"), mk_var("y")}));
  CHECK(pretty_print(*q) == "(∃y:T. (q(x, y)))");
  CHECK(pretty_print(*mk_int(0)) == "0");
}

TEST_CASE("print-parse round trip on every corpus file") {
  for (const char* name :
       {"gcd.spec", "bubblesort.spec", "fig5.spec", "verified.spec"}) {
    auto tree = parse_source(*source_of(read_file(corpus_path(name)), name));
    std::string printed = pretty_print(*tree);
    auto reparsed = parse_source(*source_of(printed, name));
    CHECK_MESSAGE(equal(*tree, *reparsed), name);
    // ascii transliteration round-trips to the same tree as well
    PrintOptions ascii;
    ascii.ascii = true;
    auto ascii_tree = parse_source(*source_of(pretty_print(*tree, ascii)));
    CHECK_MESSAGE(equal(*tree, *ascii_tree), name << " (ascii)");
  }
}

TEST_CASE("alpha equivalence distinguishes binding structure") {
  CHECK(alpha_equal(*expr_of("∀x:T. x = c"), *expr_of("∀y:T. y = c")));
  CHECK(!alpha_equal(*expr_of("∀x:T. x = c"), *expr_of("∀y:T. c = y")));
  CHECK(!alpha_equal(*expr_of("∀x:T. x = c"), *expr_of("∀y:T. y = d")));
  CHECK(alpha_equal(*expr_of("let a = m in a + k"),
                    *expr_of("let b = m in b + k")));
  CHECK(!alpha_equal(*expr_of("let a = m in a + k"),
                     *expr_of("let b = m in a + k")));
}

TEST_CASE("capture-avoiding substitution renames binders") {
  // substituting y for x inside ∃y must not capture
  ExprPtr e = expr_of("∃y:T. q(x, y)");
  ExprPtr out = substitute(e, {{"x", mk_var("y")}});
  REQUIRE(out->kind == ExprKind::Exists);
  CHECK(out->binders[0].name != "y");
  const Expr& call = *out->children[0];
  CHECK(call.children[0]->name == "y");             // the substituted free y
  CHECK(call.children[1]->name == out->binders[0].name);
}

TEST_CASE("mutated sources are rejected with errors, never crashes") {
  std::string base = read_file(corpus_path("verified.spec"));
  std::mt19937_64 rng(7);
  int parsed = 0;
  for (int i = 0; i < 500; ++i) {
    std::string text = base;
    switch (rng() % 3) {
      case 0:
        text = text.substr(0, rng() % text.size());
        break;
      case 1: {
        size_t a = rng() % text.size(), b = rng() % text.size();
        text = text.substr(0, a) + text.substr(b);
        break;
      }
      default:
        for (int k = 0; k < 20; ++k)
          text[rng() % text.size()] = static_cast<char>(32 + rng() % 95);
        break;
    }
    try {
      SourceFile src("fuzz", text);
      parse_source(src);
      ++parsed;
    } catch (const SpanError&) {
      // expected for most mutations
    }
  }
  CHECK(parsed >= 0);  // reaching here without a crash is the property
}

#include "finicheck/parser.hpp"

#include <functional>

#include "finicheck/errors.hpp"

namespace finicheck {

namespace {

class Parser {
public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  std::shared_ptr<const Spec> parse_spec() {
    auto spec = std::make_shared<Spec>();
    while (!at(TokenKind::EndOfFile)) spec->decls.push_back(parse_decl());
    return spec;
  }

  ExprPtr parse_single_expression() {
    ExprPtr e = parse_expr();
    expect(TokenKind::EndOfFile, "end of input after expression");
    return e;
  }

private:
  const std::vector<Token>& toks_;
  size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& prev() const { return toks_[i_ - 1]; }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_any(std::initializer_list<TokenKind> ks) const {
    for (auto k : ks)
      if (at(k)) return true;
    return false;
  }

  const Token& advance() { return toks_[i_++]; }

  bool accept(TokenKind k) {
    if (at(k)) {
      ++i_;
      return true;
    }
    return false;
  }

  const Token& expect(TokenKind k, const char* what) {
    if (!at(k)) fail(what);
    return advance();
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError("expected " + expected + ", found " +
                         std::string(token_kind_name(cur().kind)),
                     cur().span, expected);
  }

  Span span_from(uint32_t begin) const { return Span{begin, prev().span.end}; }

  // -- declarations ---------------------------------------------------------

  DeclPtr parse_decl() {
    switch (cur().kind) {
      case TokenKind::KwVal: return parse_val();
      case TokenKind::KwType: return parse_typedecl();
      case TokenKind::KwPred: return parse_pred();
      case TokenKind::KwFun: return parse_fun();
      case TokenKind::KwTheorem: return parse_theorem();
      case TokenKind::KwProc: return parse_proc();
      default:
        fail("a declaration ('val', 'type', 'pred', 'fun', 'theorem' or 'proc')");
    }
  }

  DeclPtr parse_val() {
    uint32_t begin = cur().span.begin;
    advance();
    auto d = std::make_shared<Decl>();
    d->kind = DeclKind::Val;
    d->name = expect(TokenKind::Ident, "constant name").lexeme;
    if (accept(TokenKind::Colon)) d->val_type = parse_type();
    if (accept(TokenKind::Eq)) d->val_value = parse_expr();
    expect(TokenKind::Semicolon, "';' after val declaration");
    d->span = span_from(begin);
    return d;
  }

  DeclPtr parse_typedecl() {
    uint32_t begin = cur().span.begin;
    advance();
    auto d = std::make_shared<Decl>();
    d->kind = DeclKind::Type;
    d->name = expect(TokenKind::Ident, "type name").lexeme;
    expect(TokenKind::Eq, "'=' in type declaration");
    d->type_rhs = parse_type();
    expect(TokenKind::Semicolon, "';' after type declaration");
    d->span = span_from(begin);
    return d;
  }

  std::vector<Param> parse_params() {
    std::vector<Param> params;
    expect(TokenKind::LParen, "'('");
    if (!at(TokenKind::RParen)) {
      do {
        Param p;
        uint32_t begin = cur().span.begin;
        p.name = expect(TokenKind::Ident, "parameter name").lexeme;
        expect(TokenKind::Colon, "':' after parameter name");
        p.type = parse_type();
        p.span = span_from(begin);
        params.push_back(std::move(p));
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen, "')'");
    return params;
  }

  void parse_requires_clauses(Decl& d) {
    while (at(TokenKind::KwRequires)) {
      advance();
      d.requires_.push_back(parse_expr());
      expect(TokenKind::Semicolon, "';' after requires clause");
    }
  }

  DeclPtr parse_pred() {
    uint32_t begin = cur().span.begin;
    advance();
    auto d = std::make_shared<Decl>();
    d->kind = DeclKind::Pred;
    d->name = expect(TokenKind::Ident, "predicate name").lexeme;
    d->params = parse_params();
    expect(TokenKind::Iff, "'⇔' before predicate body");
    d->body_expr = parse_expr();
    expect(TokenKind::Semicolon, "';' after predicate body");
    d->span = span_from(begin);
    return d;
  }

  DeclPtr parse_fun() {
    uint32_t begin = cur().span.begin;
    advance();
    auto d = std::make_shared<Decl>();
    d->kind = DeclKind::Fun;
    d->name = expect(TokenKind::Ident, "function name").lexeme;
    d->params = parse_params();
    expect(TokenKind::Colon, "':' before result type");
    d->result_type = parse_type();
    parse_requires_clauses(*d);
    expect(TokenKind::Eq, "'=' before function body");
    d->body_expr = parse_expr();
    expect(TokenKind::Semicolon, "';' after function body");
    d->span = span_from(begin);
    return d;
  }

  DeclPtr parse_theorem() {
    uint32_t begin = cur().span.begin;
    advance();
    auto d = std::make_shared<Decl>();
    d->kind = DeclKind::Theorem;
    d->name = expect(TokenKind::Ident, "theorem name").lexeme;
    d->params = parse_params();
    parse_requires_clauses(*d);
    expect(TokenKind::Iff, "'⇔' before theorem body");
    d->body_expr = parse_expr();
    expect(TokenKind::Semicolon, "';' after theorem body");
    d->span = span_from(begin);
    return d;
  }

  DeclPtr parse_proc() {
    uint32_t begin = cur().span.begin;
    advance();
    auto d = std::make_shared<Decl>();
    d->kind = DeclKind::Proc;
    d->name = expect(TokenKind::Ident, "procedure name").lexeme;
    d->params = parse_params();
    expect(TokenKind::Colon, "':' before result type");
    d->result_type = parse_type();
    while (at_any({TokenKind::KwRequires, TokenKind::KwEnsures})) {
      bool is_req = at(TokenKind::KwRequires);
      advance();
      (is_req ? d->requires_ : d->ensures_).push_back(parse_expr());
      expect(TokenKind::Semicolon, "';' after contract clause");
    }
    expect(TokenKind::LBrace, "'{' before procedure body");
    auto body = std::make_shared<Command>();
    body->kind = CmdKind::Seq;
    uint32_t body_begin = cur().span.begin;
    while (!at(TokenKind::RBrace) && !at(TokenKind::KwReturn))
      body->commands.push_back(parse_command());
    expect(TokenKind::KwReturn, "'return' as the final procedure command");
    d->return_expr = parse_expr();
    expect(TokenKind::Semicolon, "';' after return expression");
    body->span = Span{body_begin, prev().span.end};
    expect(TokenKind::RBrace, "'}' after procedure body");
    ensure_no_return(*body);
    d->body_cmd = body;
    d->span = span_from(begin);
    return d;
  }

  void ensure_no_return(const Command& c) const {
    if (c.kind == CmdKind::Return)
      throw ParseError(
          "'return' is only allowed as the final command of a procedure body",
          c.span);
    for (const auto& sub : {c.then_cmd, c.else_cmd, c.body, c.for_init,
                            c.for_update})
      if (sub) ensure_no_return(*sub);
    for (const auto& sub : c.commands) ensure_no_return(*sub);
  }

  // -- types ----------------------------------------------------------------

  TypeExprPtr parse_type() {
    uint32_t begin = cur().span.begin;
    auto t = std::make_shared<TypeExpr>();
    switch (cur().kind) {
      case TokenKind::KwBool:
        advance();
        t->kind = TypeExprKind::Bool;
        break;
      case TokenKind::KwNat:
        advance();
        if (accept(TokenKind::LBracket)) {
          t->kind = TypeExprKind::Nat;
          t->bounds.push_back(parse_expr());
          expect(TokenKind::RBracket, "']' after ℕ bound");
        } else {
          t->kind = TypeExprKind::NatUnbounded;
        }
        break;
      case TokenKind::KwInt:
        advance();
        expect(TokenKind::LBracket, "'[' after ℤ");
        t->kind = TypeExprKind::IntRange;
        t->bounds.push_back(parse_expr());
        expect(TokenKind::Comma, "',' between ℤ bounds");
        t->bounds.push_back(parse_expr());
        expect(TokenKind::RBracket, "']' after ℤ bounds");
        break;
      case TokenKind::KwArray:
        advance();
        expect(TokenKind::LBracket, "'[' after Array");
        t->kind = TypeExprKind::Array;
        t->bounds.push_back(parse_expr());
        expect(TokenKind::Comma, "',' between Array length and element type");
        t->args.push_back(parse_type());
        expect(TokenKind::RBracket, "']' after Array type");
        break;
      case TokenKind::KwSet:
        advance();
        expect(TokenKind::LBracket, "'[' after Set");
        t->kind = TypeExprKind::Set;
        t->args.push_back(parse_type());
        expect(TokenKind::RBracket, "']' after Set type");
        break;
      case TokenKind::KwTuple:
        advance();
        expect(TokenKind::LBracket, "'[' after Tuple");
        t->kind = TypeExprKind::Tuple;
        do {
          t->args.push_back(parse_type());
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RBracket, "']' after Tuple types");
        if (t->args.size() < 2)
          throw ParseError("a tuple type needs at least two components",
                           span_from(begin));
        break;
      case TokenKind::Ident:
        t->kind = TypeExprKind::Name;
        t->name = advance().lexeme;
        break;
      default:
        fail("a type");
    }
    t->span = span_from(begin);
    return t;
  }

  // -- commands -------------------------------------------------------------

  /// Consumes the ';' ending a simple command. It may be omitted directly
  /// before 'else' or '}' (matching the style of the source corpus).
  void terminator() {
    if (accept(TokenKind::Semicolon)) return;
    if (at(TokenKind::RBrace) || at(TokenKind::KwElse) ||
        at(TokenKind::EndOfFile))
      return;
    fail("';'");
  }

  CommandPtr parse_command() {
    switch (cur().kind) {
      case TokenKind::KwVar: return parse_var_cmd();
      case TokenKind::KwIf: return parse_if_cmd();
      case TokenKind::KwWhile: return parse_while_cmd();
      case TokenKind::KwFor: return parse_for_cmd();
      case TokenKind::KwAssert: return parse_assert_cmd();
      case TokenKind::KwReturn: return parse_return_cmd();
      case TokenKind::LBrace: return parse_block();
      case TokenKind::Ident: return parse_assign_or_call();
      default:
        fail("a command");
    }
  }

  CommandPtr parse_var_cmd() {
    uint32_t begin = cur().span.begin;
    advance();
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::VarDecl;
    c->var_name = expect(TokenKind::Ident, "variable name").lexeme;
    expect(TokenKind::Colon, "':' after variable name");
    c->var_type = parse_type();
    if (!accept(TokenKind::Assign) && !accept(TokenKind::Eq))
      fail("'≔' or '=' in variable declaration");
    c->init = parse_expr();
    terminator();
    c->span = span_from(begin);
    return c;
  }

  CommandPtr parse_assign_or_call() {
    uint32_t begin = cur().span.begin;
    std::string name = advance().lexeme;
    auto c = std::make_shared<Command>();
    if (at(TokenKind::LParen)) {
      c->kind = CmdKind::Call;
      c->callee = std::move(name);
      advance();
      if (!at(TokenKind::RParen)) {
        do {
          c->args.push_back(parse_expr());
        } while (accept(TokenKind::Comma));
      }
      expect(TokenKind::RParen, "')' after call arguments");
      terminator();
      c->span = span_from(begin);
      return c;
    }
    c->kind = CmdKind::Assign;
    c->target = std::move(name);
    while (accept(TokenKind::LBracket)) {
      c->indices.push_back(parse_expr());
      expect(TokenKind::RBracket, "']' after index");
    }
    expect(TokenKind::Assign, "'≔' in assignment");
    c->value = parse_expr();
    terminator();
    c->span = span_from(begin);
    return c;
  }

  CommandPtr parse_if_cmd() {
    uint32_t begin = cur().span.begin;
    advance();
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::If;
    c->cond = parse_expr();
    expect(TokenKind::KwThen, "'then'");
    c->then_cmd = parse_command();
    if (accept(TokenKind::KwElse)) c->else_cmd = parse_command();
    c->span = span_from(begin);
    return c;
  }

  void parse_loop_annotations(Command& c) {
    while (at(TokenKind::KwInvariant)) {
      advance();
      c.invariants.push_back(parse_expr());
      expect(TokenKind::Semicolon, "';' after invariant");
    }
    if (accept(TokenKind::KwDecreases)) {
      c.decreases = parse_expr();
      expect(TokenKind::Semicolon, "';' after decreases clause");
    }
    if (at(TokenKind::KwInvariant))
      throw ParseError("invariants must precede the decreases clause",
                       cur().span);
  }

  CommandPtr parse_while_cmd() {
    uint32_t begin = cur().span.begin;
    advance();
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::While;
    c->cond = parse_expr();
    expect(TokenKind::KwDo, "'do' after while condition");
    parse_loop_annotations(*c);
    c->body = parse_command();
    c->span = span_from(begin);
    return c;
  }

  CommandPtr parse_for_cmd() {
    uint32_t begin = cur().span.begin;
    advance();
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::For;
    // only the corpus form is supported: for var v:T ≔ e; cond; update do
    if (!at(TokenKind::KwVar)) fail("'var' in for-loop header");
    {
      uint32_t vbegin = cur().span.begin;
      advance();
      auto init = std::make_shared<Command>();
      init->kind = CmdKind::VarDecl;
      init->var_name = expect(TokenKind::Ident, "loop variable name").lexeme;
      expect(TokenKind::Colon, "':' after loop variable name");
      init->var_type = parse_type();
      if (!accept(TokenKind::Assign) && !accept(TokenKind::Eq))
        fail("'≔' in for-loop initialization");
      init->init = parse_expr();
      init->span = span_from(vbegin);
      c->for_init = init;
    }
    expect(TokenKind::Semicolon, "';' after for-loop initialization");
    c->cond = parse_expr();
    expect(TokenKind::Semicolon, "';' after for-loop condition");
    {
      uint32_t ubegin = cur().span.begin;
      auto upd = std::make_shared<Command>();
      upd->kind = CmdKind::Assign;
      upd->target = expect(TokenKind::Ident, "assignment in for-loop update").lexeme;
      while (accept(TokenKind::LBracket)) {
        upd->indices.push_back(parse_expr());
        expect(TokenKind::RBracket, "']' after index");
      }
      expect(TokenKind::Assign, "'≔' in for-loop update");
      upd->value = parse_expr();
      upd->span = span_from(ubegin);
      c->for_update = upd;
    }
    expect(TokenKind::KwDo, "'do' after for-loop header");
    parse_loop_annotations(*c);
    c->body = parse_command();
    c->span = span_from(begin);
    return c;
  }

  CommandPtr parse_assert_cmd() {
    uint32_t begin = cur().span.begin;
    advance();
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::Assert;
    c->formula = parse_expr();
    terminator();
    c->span = span_from(begin);
    return c;
  }

  CommandPtr parse_return_cmd() {
    uint32_t begin = cur().span.begin;
    advance();
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::Return;
    c->ret = parse_expr();
    terminator();
    c->span = span_from(begin);
    return c;
  }

  CommandPtr parse_block() {
    uint32_t begin = cur().span.begin;
    expect(TokenKind::LBrace, "'{'");
    auto c = std::make_shared<Command>();
    c->kind = CmdKind::Seq;
    while (!at(TokenKind::RBrace)) c->commands.push_back(parse_command());
    expect(TokenKind::RBrace, "'}'");
    c->span = span_from(begin);
    // braces around a single command are pure grouping
    if (c->commands.size() == 1) return c->commands[0];
    return c;
  }

  // -- expressions ----------------------------------------------------------

  ExprPtr parse_expr() { return parse_iff(); }

  ExprPtr parse_iff() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_implies();
    while (accept(TokenKind::Iff)) {
      ExprPtr rhs = parse_implies();
      lhs = mk_binary(BinaryOp::Iff, lhs, rhs, span_from(begin));
    }
    return lhs;
  }

  ExprPtr parse_implies() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_or();
    if (accept(TokenKind::Implies)) {
      ExprPtr rhs = parse_implies();
      return mk_binary(BinaryOp::Implies, lhs, rhs, span_from(begin));
    }
    return lhs;
  }

  ExprPtr parse_or() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_and();
    while (accept(TokenKind::Or)) {
      ExprPtr rhs = parse_and();
      lhs = mk_binary(BinaryOp::Or, lhs, rhs, span_from(begin));
    }
    return lhs;
  }

  ExprPtr parse_and() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_cmp();
    while (accept(TokenKind::And)) {
      ExprPtr rhs = parse_cmp();
      lhs = mk_binary(BinaryOp::And, lhs, rhs, span_from(begin));
    }
    return lhs;
  }

  ExprPtr parse_cmp() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_additive();
    BinaryOp op;
    switch (cur().kind) {
      case TokenKind::Eq: op = BinaryOp::Eq; break;
      case TokenKind::Neq: op = BinaryOp::Ne; break;
      case TokenKind::Lt: op = BinaryOp::Lt; break;
      case TokenKind::Le: op = BinaryOp::Le; break;
      case TokenKind::Gt: op = BinaryOp::Gt; break;
      case TokenKind::Ge: op = BinaryOp::Ge; break;
      case TokenKind::MemberOf: op = BinaryOp::MemberOf; break;
      default: return lhs;
    }
    advance();
    ExprPtr rhs = parse_additive();
    if (at_any({TokenKind::Eq, TokenKind::Neq, TokenKind::Lt, TokenKind::Le,
                TokenKind::Gt, TokenKind::Ge, TokenKind::MemberOf}))
      throw ParseError("comparison operators do not chain; add parentheses",
                       cur().span);
    return mk_binary(op, lhs, rhs, span_from(begin));
  }

  ExprPtr parse_additive() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_multiplicative();
    while (true) {
      if (accept(TokenKind::Plus)) {
        ExprPtr rhs = parse_multiplicative();
        lhs = mk_binary(BinaryOp::Add, lhs, rhs, span_from(begin));
      } else if (accept(TokenKind::Minus)) {
        ExprPtr rhs = parse_multiplicative();
        lhs = mk_binary(BinaryOp::Sub, lhs, rhs, span_from(begin));
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_multiplicative() {
    uint32_t begin = cur().span.begin;
    ExprPtr lhs = parse_unary();
    while (true) {
      if (accept(TokenKind::Times)) {
        ExprPtr rhs = parse_unary();
        lhs = mk_binary(BinaryOp::Mul, lhs, rhs, span_from(begin));
      } else if (accept(TokenKind::Quot)) {
        ExprPtr rhs = parse_unary();
        lhs = mk_binary(BinaryOp::Quot, lhs, rhs, span_from(begin));
      } else if (accept(TokenKind::Rem)) {
        ExprPtr rhs = parse_unary();
        lhs = mk_binary(BinaryOp::Rem, lhs, rhs, span_from(begin));
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    uint32_t begin = cur().span.begin;
    if (accept(TokenKind::Not)) {
      ExprPtr operand = parse_unary();
      return mk_unary(UnaryOp::Not, operand, span_from(begin));
    }
    if (accept(TokenKind::Minus)) {
      ExprPtr operand = parse_unary();
      return mk_unary(UnaryOp::Neg, operand, span_from(begin));
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    uint32_t begin = cur().span.begin;
    ExprPtr e = parse_primary();
    while (true) {
      if (accept(TokenKind::LBracket)) {
        ExprPtr idx = parse_expr();
        expect(TokenKind::RBracket, "']' after index");
        e = mk_index(e, idx, span_from(begin));
      } else if (at(TokenKind::Dot) &&
                 toks_[i_ + 1].kind == TokenKind::IntLit) {
        advance();
        const Token& num = advance();
        e = mk_proj(e, static_cast<int>(std::stoll(num.lexeme)),
                    span_from(begin));
      } else if (at(TokenKind::KwWith)) {
        advance();
        expect(TokenKind::LBracket, "'[' after 'with'");
        ExprPtr idx = parse_expr();
        expect(TokenKind::RBracket, "']' after update index");
        expect(TokenKind::Eq, "'=' in array update");
        // the update value binds additively; parenthesize comparisons
        ExprPtr val = parse_additive();
        e = mk_update(e, idx, val, span_from(begin));
      } else {
        return e;
      }
    }
  }

  Binder parse_binder() {
    Binder b;
    uint32_t begin = cur().span.begin;
    b.name = expect(TokenKind::Ident, "bound variable name").lexeme;
    expect(TokenKind::Colon, "':' after bound variable");
    b.type = parse_type();
    b.span = span_from(begin);
    return b;
  }

  ExprPtr parse_primary() {
    uint32_t begin = cur().span.begin;
    switch (cur().kind) {
      case TokenKind::IntLit: {
        const Token& t = advance();
        return mk_int(std::stoll(t.lexeme), t.span);
      }
      case TokenKind::KwTrue:
        advance();
        return mk_bool(true, span_from(begin));
      case TokenKind::KwFalse:
        advance();
        return mk_bool(false, span_from(begin));
      case TokenKind::Ident: {
        const Token& t = advance();
        if (at(TokenKind::LParen)) {
          advance();
          std::vector<ExprPtr> args;
          if (!at(TokenKind::RParen)) {
            do {
              args.push_back(parse_expr());
            } while (accept(TokenKind::Comma));
          }
          expect(TokenKind::RParen, "')' after arguments");
          return mk_call(t.lexeme, std::move(args), span_from(begin));
        }
        return mk_var(t.lexeme, t.span);
      }
      case TokenKind::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(TokenKind::RParen, "')'");
        return e;
      }
      case TokenKind::Forall:
      case TokenKind::Exists: {
        ExprKind kind =
            at(TokenKind::Forall) ? ExprKind::Forall : ExprKind::Exists;
        advance();
        std::vector<Binder> binders;
        do {
          binders.push_back(parse_binder());
        } while (accept(TokenKind::Comma));
        expect(TokenKind::Dot, "'.' after quantifier binders");
        ExprPtr body = parse_expr();
        return mk_quant(kind, std::move(binders), body, span_from(begin));
      }
      case TokenKind::KwChoose: {
        advance();
        Binder b = parse_binder();
        if (!accept(TokenKind::KwWith) && !accept(TokenKind::Dot))
          fail("'with' or '.' after choose binder");
        ExprPtr cond = parse_expr();
        return mk_choose(std::move(b), cond, span_from(begin));
      }
      case TokenKind::KwLet:
      case TokenKind::KwLetPar: {
        ExprKind kind =
            at(TokenKind::KwLet) ? ExprKind::Let : ExprKind::LetPar;
        advance();
        std::vector<LetBinding> bindings;
        do {
          LetBinding b;
          uint32_t bbegin = cur().span.begin;
          b.name = expect(TokenKind::Ident, "binding name").lexeme;
          expect(TokenKind::Eq, "'=' in let binding");
          b.value = parse_expr();
          b.span = span_from(bbegin);
          bindings.push_back(std::move(b));
        } while (accept(TokenKind::Comma));
        expect(TokenKind::KwIn, "'in' after let bindings");
        ExprPtr body = parse_expr();
        return mk_let(kind, std::move(bindings), body, span_from(begin));
      }
      case TokenKind::KwIf: {
        advance();
        ExprPtr c = parse_expr();
        expect(TokenKind::KwThen, "'then' in conditional expression");
        ExprPtr t = parse_expr();
        expect(TokenKind::KwElse, "'else' in conditional expression");
        ExprPtr f = parse_expr();
        return mk_if(c, t, f, span_from(begin));
      }
      case TokenKind::LTupleBracket: {
        advance();
        std::vector<ExprPtr> elems;
        do {
          elems.push_back(parse_expr());
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RTupleBracket, "'⟩' after tuple elements");
        if (elems.size() < 2)
          throw ParseError("a tuple literal needs at least two elements",
                           span_from(begin));
        return mk_tuple(std::move(elems), span_from(begin));
      }
      case TokenKind::LBrace: {
        advance();
        std::vector<ExprPtr> elems;
        if (!at(TokenKind::RBrace)) {
          do {
            elems.push_back(parse_expr());
          } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RBrace, "'}' after set elements");
        return mk_set(std::move(elems), span_from(begin));
      }
      default:
        fail("an expression");
    }
  }
};

}  // namespace

std::shared_ptr<const Spec> parse(const std::vector<Token>& tokens) {
  return Parser(tokens).parse_spec();
}

std::shared_ptr<const Spec> parse_source(const SourceFile& src) {
  return parse(tokenize(src));
}

ExprPtr parse_expression(const SourceFile& src) {
  auto tokens = tokenize(src);
  return Parser(tokens).parse_single_expression();
}

}  // namespace finicheck

#include "finicheck/ast.hpp"

#include <algorithm>
#include <cassert>

namespace finicheck {

namespace {

std::shared_ptr<Expr> blank(ExprKind kind, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->span = s;
  return e;
}

}  // namespace

ExprPtr mk_int(long long v, Span s) {
  auto e = blank(ExprKind::IntLit, s);
  e->int_value = v;
  return e;
}

ExprPtr mk_bool(bool v, Span s) {
  auto e = blank(ExprKind::BoolLit, s);
  e->bool_value = v;
  return e;
}

ExprPtr mk_var(std::string name, Span s) {
  auto e = blank(ExprKind::VarRef, s);
  e->name = std::move(name);
  return e;
}

ExprPtr mk_unary(UnaryOp op, ExprPtr operand, Span s) {
  auto e = blank(ExprKind::Unary, s);
  e->unary_op = op;
  e->children = {std::move(operand)};
  return e;
}

ExprPtr mk_binary(BinaryOp op, ExprPtr l, ExprPtr r, Span s) {
  auto e = blank(ExprKind::Binary, s);
  e->binary_op = op;
  e->children = {std::move(l), std::move(r)};
  return e;
}

ExprPtr mk_quant(ExprKind kind, std::vector<Binder> bs, ExprPtr body, Span s) {
  assert(kind == ExprKind::Forall || kind == ExprKind::Exists);
  auto e = blank(kind, s);
  e->binders = std::move(bs);
  e->children = {std::move(body)};
  return e;
}

ExprPtr mk_choose(Binder b, ExprPtr cond, Span s) {
  auto e = blank(ExprKind::Choose, s);
  e->binders = {std::move(b)};
  e->children = {std::move(cond)};
  return e;
}

ExprPtr mk_let(ExprKind kind, std::vector<LetBinding> bs, ExprPtr body, Span s) {
  assert(kind == ExprKind::Let || kind == ExprKind::LetPar);
  auto e = blank(kind, s);
  e->bindings = std::move(bs);
  e->children = {std::move(body)};
  return e;
}

ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr f, Span s) {
  auto e = blank(ExprKind::IfElse, s);
  e->children = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr mk_call(std::string name, std::vector<ExprPtr> args, Span s) {
  auto e = blank(ExprKind::Call, s);
  e->name = std::move(name);
  e->children = std::move(args);
  return e;
}

ExprPtr mk_index(ExprPtr base, ExprPtr idx, Span s) {
  auto e = blank(ExprKind::ArrayIndex, s);
  e->children = {std::move(base), std::move(idx)};
  return e;
}

ExprPtr mk_update(ExprPtr base, ExprPtr idx, ExprPtr val, Span s) {
  auto e = blank(ExprKind::ArrayUpdate, s);
  e->children = {std::move(base), std::move(idx), std::move(val)};
  return e;
}

ExprPtr mk_proj(ExprPtr base, int index, Span s) {
  auto e = blank(ExprKind::TupleProj, s);
  e->children = {std::move(base)};
  e->proj_index = index;
  return e;
}

ExprPtr mk_tuple(std::vector<ExprPtr> elems, Span s) {
  auto e = blank(ExprKind::TupleLit, s);
  e->children = std::move(elems);
  return e;
}

ExprPtr mk_set(std::vector<ExprPtr> elems, Span s) {
  auto e = blank(ExprKind::SetLit, s);
  e->children = std::move(elems);
  return e;
}

ExprPtr mk_conj(const std::vector<ExprPtr>& fs, Span s) {
  if (fs.empty()) return mk_bool(true, s);
  ExprPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i)
    acc = mk_binary(BinaryOp::And, acc, fs[i], s);
  return acc;
}

// ---------------------------------------------------------------------------
// Structural equality (spans ignored)

bool equal(const TypeExpr& a, const TypeExpr& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (a.bounds.size() != b.bounds.size() || a.args.size() != b.args.size())
    return false;
  for (size_t i = 0; i < a.bounds.size(); ++i)
    if (!equal(*a.bounds[i], *b.bounds[i])) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case ExprKind::BoolLit:
      if (a.bool_value != b.bool_value) return false;
      break;
    case ExprKind::VarRef:
    case ExprKind::Call:
      if (a.name != b.name) return false;
      break;
    case ExprKind::Unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case ExprKind::Binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case ExprKind::TupleProj:
      if (a.proj_index != b.proj_index) return false;
      break;
    default:
      break;
  }
  if (a.binders.size() != b.binders.size()) return false;
  for (size_t i = 0; i < a.binders.size(); ++i) {
    if (a.binders[i].name != b.binders[i].name) return false;
    if (!equal(*a.binders[i].type, *b.binders[i].type)) return false;
  }
  if (a.bindings.size() != b.bindings.size()) return false;
  for (size_t i = 0; i < a.bindings.size(); ++i) {
    if (a.bindings[i].name != b.bindings[i].name) return false;
    if (!equal(*a.bindings[i].value, *b.bindings[i].value)) return false;
  }
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!equal(*a.children[i], *b.children[i])) return false;
  return true;
}

namespace {

bool equal_opt_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool equal_opt_cmd(const CommandPtr& a, const CommandPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool equal_opt_type(const TypeExprPtr& a, const TypeExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool equal_exprs(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(*a[i], *b[i])) return false;
  return true;
}

}  // namespace

bool equal(const Command& a, const Command& b) {
  if (a.kind != b.kind) return false;
  if (a.var_name != b.var_name || a.target != b.target ||
      a.callee != b.callee)
    return false;
  if (!equal_opt_type(a.var_type, b.var_type)) return false;
  if (!equal_opt_expr(a.init, b.init) || !equal_opt_expr(a.value, b.value) ||
      !equal_opt_expr(a.cond, b.cond) ||
      !equal_opt_expr(a.decreases, b.decreases) ||
      !equal_opt_expr(a.formula, b.formula) || !equal_opt_expr(a.ret, b.ret))
    return false;
  if (!equal_exprs(a.indices, b.indices) || !equal_exprs(a.invariants, b.invariants) ||
      !equal_exprs(a.args, b.args))
    return false;
  if (!equal_opt_cmd(a.then_cmd, b.then_cmd) ||
      !equal_opt_cmd(a.else_cmd, b.else_cmd) ||
      !equal_opt_cmd(a.body, b.body) ||
      !equal_opt_cmd(a.for_init, b.for_init) ||
      !equal_opt_cmd(a.for_update, b.for_update))
    return false;
  if (a.commands.size() != b.commands.size()) return false;
  for (size_t i = 0; i < a.commands.size(); ++i)
    if (!equal(*a.commands[i], *b.commands[i])) return false;
  return true;
}

bool equal(const Decl& a, const Decl& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (!equal_opt_type(a.val_type, b.val_type) ||
      !equal_opt_type(a.type_rhs, b.type_rhs) ||
      !equal_opt_type(a.result_type, b.result_type))
    return false;
  if (!equal_opt_expr(a.val_value, b.val_value) ||
      !equal_opt_expr(a.body_expr, b.body_expr) ||
      !equal_opt_expr(a.return_expr, b.return_expr))
    return false;
  if (!equal_exprs(a.requires_, b.requires_) ||
      !equal_exprs(a.ensures_, b.ensures_))
    return false;
  if (a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name) return false;
    if (!equal(*a.params[i].type, *b.params[i].type)) return false;
  }
  return equal_opt_cmd(a.body_cmd, b.body_cmd);
}

bool equal(const Spec& a, const Spec& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (size_t i = 0; i < a.decls.size(); ++i)
    if (!equal(*a.decls[i], *b.decls[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

struct AlphaEnv {
  std::map<std::string, int> levels;  // bound name -> binding level
};

bool alpha_eq(const Expr& a, const Expr& b, AlphaEnv ea, AlphaEnv eb, int level);

bool alpha_var(const std::string& na, const std::string& nb, const AlphaEnv& ea,
               const AlphaEnv& eb) {
  auto ia = ea.levels.find(na);
  auto ib = eb.levels.find(nb);
  if (ia != ea.levels.end() || ib != eb.levels.end()) {
    // bound on at least one side: both must be bound at the same level
    return ia != ea.levels.end() && ib != eb.levels.end() &&
           ia->second == ib->second;
  }
  return na == nb;  // both free
}

bool alpha_eq(const Expr& a, const Expr& b, AlphaEnv ea, AlphaEnv eb,
              int level) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      return a.int_value == b.int_value;
    case ExprKind::BoolLit:
      return a.bool_value == b.bool_value;
    case ExprKind::VarRef:
      return alpha_var(a.name, b.name, ea, eb);
    case ExprKind::Call:
      if (a.name != b.name || a.children.size() != b.children.size())
        return false;
      for (size_t i = 0; i < a.children.size(); ++i)
        if (!alpha_eq(*a.children[i], *b.children[i], ea, eb, level))
          return false;
      return true;
    case ExprKind::Unary:
      return a.unary_op == b.unary_op &&
             alpha_eq(*a.children[0], *b.children[0], ea, eb, level);
    case ExprKind::Binary:
      return a.binary_op == b.binary_op &&
             alpha_eq(*a.children[0], *b.children[0], ea, eb, level) &&
             alpha_eq(*a.children[1], *b.children[1], ea, eb, level);
    case ExprKind::Forall:
    case ExprKind::Exists:
    case ExprKind::Choose: {
      if (a.binders.size() != b.binders.size()) return false;
      for (size_t i = 0; i < a.binders.size(); ++i) {
        if (!equal(*a.binders[i].type, *b.binders[i].type)) return false;
        ea.levels[a.binders[i].name] = level + static_cast<int>(i);
        eb.levels[b.binders[i].name] = level + static_cast<int>(i);
      }
      int next = level + static_cast<int>(a.binders.size());
      return alpha_eq(*a.children[0], *b.children[0], ea, eb, next);
    }
    case ExprKind::Let:
    case ExprKind::LetPar: {
      if (a.bindings.size() != b.bindings.size()) return false;
      bool sequential = a.kind == ExprKind::Let;
      AlphaEnv la = ea, lb = eb;
      for (size_t i = 0; i < a.bindings.size(); ++i) {
        const AlphaEnv& va = sequential ? la : ea;
        const AlphaEnv& vb = sequential ? lb : eb;
        if (!alpha_eq(*a.bindings[i].value, *b.bindings[i].value, va, vb,
                      level + static_cast<int>(i)))
          return false;
        la.levels[a.bindings[i].name] = level + static_cast<int>(i);
        lb.levels[b.bindings[i].name] = level + static_cast<int>(i);
      }
      int next = level + static_cast<int>(a.bindings.size());
      return alpha_eq(*a.children[0], *b.children[0], la, lb, next);
    }
    case ExprKind::TupleProj:
      if (a.proj_index != b.proj_index) return false;
      [[fallthrough]];
    default: {
      if (a.children.size() != b.children.size()) return false;
      for (size_t i = 0; i < a.children.size(); ++i)
        if (!alpha_eq(*a.children[i], *b.children[i], ea, eb, level))
          return false;
      return true;
    }
  }
}

}  // namespace

bool alpha_equal(const Expr& a, const Expr& b) {
  return alpha_eq(a, b, {}, {}, 0);
}

// ---------------------------------------------------------------------------
// Free variables, name collection, substitution

namespace {

void free_vars_rec(const Expr& e, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::VarRef:
      if (!bound.count(e.name)) out.insert(e.name);
      return;
    case ExprKind::Forall:
    case ExprKind::Exists:
    case ExprKind::Choose: {
      std::set<std::string> inner = bound;
      for (const auto& b : e.binders) inner.insert(b.name);
      free_vars_rec(*e.children[0], inner, out);
      return;
    }
    case ExprKind::Let: {
      std::set<std::string> inner = bound;
      for (const auto& b : e.bindings) {
        free_vars_rec(*b.value, inner, out);
        inner.insert(b.name);
      }
      free_vars_rec(*e.children[0], inner, out);
      return;
    }
    case ExprKind::LetPar: {
      for (const auto& b : e.bindings) free_vars_rec(*b.value, bound, out);
      std::set<std::string> inner = bound;
      for (const auto& b : e.bindings) inner.insert(b.name);
      free_vars_rec(*e.children[0], inner, out);
      return;
    }
    default:
      for (const auto& c : e.children) free_vars_rec(*c, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> bound, out;
  free_vars_rec(e, bound, out);
  return out;
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::VarRef || e.kind == ExprKind::Call)
    out.insert(e.name);
  for (const auto& b : e.binders) out.insert(b.name);
  for (const auto& b : e.bindings) {
    out.insert(b.name);
    collect_names(*b.value, out);
  }
  for (const auto& c : e.children) collect_names(*c, out);
}

namespace {

using Subst = std::map<std::string, ExprPtr>;

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 0;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

ExprPtr subst_rec(const ExprPtr& e, const Subst& s);

/// Renames bound names that would capture a free variable of a substituted
/// value, then applies the narrowed substitution to the scope body.
template <typename Names>
Subst narrow_for_binders(const Subst& s, Names& binder_names,
                         const ExprPtr& body, std::vector<std::string>& renames) {
  Subst inner;
  std::set<std::string> incoming_free;
  for (const auto& [name, value] : s) {
    bool shadowed = false;
    for (const auto& bn : binder_names)
      if (bn == name) shadowed = true;
    if (shadowed) continue;
    inner[name] = value;
    auto fv = free_vars(*value);
    incoming_free.insert(fv.begin(), fv.end());
  }
  std::set<std::string> avoid = incoming_free;
  collect_names(*body, avoid);
  for (auto& bn : binder_names) {
    if (incoming_free.count(bn)) {
      std::string nn = fresh_name(bn, avoid);
      avoid.insert(nn);
      inner[bn] = mk_var(nn);
      renames.push_back(nn);
      bn = nn;
    } else {
      renames.push_back(bn);
      // keep name; ensure no inner mapping remains for it
      inner.erase(bn);
    }
  }
  return inner;
}

ExprPtr subst_rec(const ExprPtr& e, const Subst& s) {
  if (s.empty()) return e;
  switch (e->kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
      return e;
    case ExprKind::VarRef: {
      auto it = s.find(e->name);
      return it != s.end() ? it->second : e;
    }
    case ExprKind::Forall:
    case ExprKind::Exists:
    case ExprKind::Choose: {
      std::vector<std::string> names;
      for (const auto& b : e->binders) names.push_back(b.name);
      std::vector<std::string> renamed;
      Subst inner = narrow_for_binders(s, names, e, renamed);
      auto out = std::make_shared<Expr>(*e);
      for (size_t i = 0; i < out->binders.size(); ++i)
        out->binders[i].name = names[i];
      out->children[0] = subst_rec(e->children[0], inner);
      return out;
    }
    case ExprKind::Let: {
      // sequential: each value sees earlier bindings
      auto out = std::make_shared<Expr>(*e);
      Subst current = s;
      for (size_t i = 0; i < out->bindings.size(); ++i) {
        out->bindings[i].value = subst_rec(out->bindings[i].value, current);
        std::vector<std::string> one{out->bindings[i].name};
        std::vector<std::string> renamed;
        // narrow against the remaining scope (body plus later bindings)
        current = narrow_for_binders(current, one, e, renamed);
        out->bindings[i].name = one[0];
      }
      out->children[0] = subst_rec(e->children[0], current);
      return out;
    }
    case ExprKind::LetPar: {
      auto out = std::make_shared<Expr>(*e);
      for (auto& b : out->bindings) b.value = subst_rec(b.value, s);
      std::vector<std::string> names;
      for (const auto& b : e->bindings) names.push_back(b.name);
      std::vector<std::string> renamed;
      Subst inner = narrow_for_binders(s, names, e, renamed);
      for (size_t i = 0; i < out->bindings.size(); ++i)
        out->bindings[i].name = names[i];
      out->children[0] = subst_rec(e->children[0], inner);
      return out;
    }
    default: {
      auto out = std::make_shared<Expr>(*e);
      for (auto& c : out->children) c = subst_rec(c, s);
      return out;
    }
  }
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& s) {
  return subst_rec(e, s);
}

}  // namespace finicheck

#include "finicheck/resolve.hpp"

#include <functional>
#include <set>

#include "finicheck/errors.hpp"

namespace finicheck {

namespace {

bool has_old_prefix(const std::string& name) {
  return name.rfind("old_", 0) == 0;
}

/// Widens two compatible denotations into one covering both; integer ranges
/// are joined, everything else must agree structurally.
DenPtr join_den(const DenPtr& a, const DenPtr& b) {
  if (same_den(*a, *b)) return a;
  switch (a->kind) {
    case TypeDen::Kind::Int: {
      if (!a->has_range || !b->has_range) return TypeDen::integer();
      return TypeDen::int_range(std::min(a->lo, b->lo), std::max(a->hi, b->hi));
    }
    case TypeDen::Kind::Array:
      return TypeDen::array(a->len, join_den(a->elem, b->elem));
    case TypeDen::Kind::Set:
      return TypeDen::set(join_den(a->elem, b->elem));
    case TypeDen::Kind::Tuple: {
      std::vector<DenPtr> comps;
      for (size_t i = 0; i < a->comps.size(); ++i)
        comps.push_back(join_den(a->comps[i], b->comps[i]));
      return TypeDen::tuple(std::move(comps));
    }
    default:
      return a;
  }
}

struct ScopeEntry {
  DenPtr den;
  bool assignable = false;
  TypeExprPtr type_expr;  // syntactic origin when declared with one
};

class Resolver {
public:
  Resolver(std::shared_ptr<const Spec> spec,
           const std::vector<ConstBinding>& bindings,
           std::shared_ptr<const SourceFile> source)
      : bindings_(bindings) {
    result_ = std::make_shared<TypedSpec>();
    result_->spec = std::move(spec);
    result_->source = std::move(source);
  }

  std::shared_ptr<const TypedSpec> run() {
    result_->bindings = bindings_;
    for (const auto& b : bindings_) cli_consts_[b.name] = b.value;
    int op_index = 0;
    for (const auto& d : result_->spec->decls) {
      switch (d->kind) {
        case DeclKind::Val: resolve_val(*d); break;
        case DeclKind::Type: resolve_typedecl(*d); break;
        default: resolve_operation(*d, op_index++); break;
      }
    }
    for (const auto& [name, value] : cli_consts_) {
      if (!used_cli_consts_.count(name))
        throw UnboundConstantError("no constant named '" + name +
                                   "' accepts a binding");
    }
    return result_;
  }

private:
  const std::vector<ConstBinding>& bindings_;
  std::map<std::string, long long> cli_consts_;
  std::set<std::string> used_cli_consts_;
  std::shared_ptr<TypedSpec> result_;
  std::vector<std::map<std::string, ScopeEntry>> scopes_;

  [[noreturn]] void error(const Span& span, const std::string& msg) const {
    throw TypeError(msg, span);
  }

  // -- constant expressions -------------------------------------------------

  long long const_int(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        return e.int_value;
      case ExprKind::VarRef: {
        auto it = result_->consts.find(e.name);
        if (it == result_->consts.end())
          error(e.span, "'" + e.name + "' is not a declared constant");
        return it->second;
      }
      case ExprKind::Unary:
        if (e.unary_op == UnaryOp::Neg) return -const_int(*e.children[0]);
        error(e.span, "constant expressions are arithmetic only");
      case ExprKind::Binary: {
        long long l = const_int(*e.children[0]);
        long long r = const_int(*e.children[1]);
        switch (e.binary_op) {
          case BinaryOp::Add: return l + r;
          case BinaryOp::Sub: return l - r;
          case BinaryOp::Mul: return l * r;
          case BinaryOp::Quot:
            if (r == 0) error(e.span, "division by zero in constant expression");
            return l / r;
          case BinaryOp::Rem:
            if (r == 0) error(e.span, "remainder by zero in constant expression");
            return l % r;
          default:
            error(e.span, "constant expressions are arithmetic only");
        }
      }
      default:
        error(e.span, "constant expressions are arithmetic only");
    }
  }

  // -- declarations ---------------------------------------------------------

  void check_fresh_name(const Decl& d) {
    if (has_old_prefix(d.name))
      error(d.span, "names starting with 'old_' are reserved for snapshots");
  }

  void resolve_val(const Decl& d) {
    check_fresh_name(d);
    if (result_->consts.count(d.name))
      error(d.span, "constant '" + d.name + "' is already declared");
    if (d.val_type && d.val_type->kind != TypeExprKind::NatUnbounded &&
        d.val_type->kind != TypeExprKind::Nat &&
        d.val_type->kind != TypeExprKind::IntRange)
      error(d.val_type->span, "constants must have an integer type");
    long long value;
    if (d.val_value) {
      if (cli_consts_.count(d.name))
        error(d.span, "constant '" + d.name +
                          "' already has a value and cannot be rebound");
      value = const_int(*d.val_value);
    } else {
      auto it = cli_consts_.find(d.name);
      if (it == cli_consts_.end()) throw UnboundConstantError(d.name);
      used_cli_consts_.insert(d.name);
      value = it->second;
    }
    if (d.val_type) {
      bool fits = true;
      switch (d.val_type->kind) {
        case TypeExprKind::NatUnbounded:
          fits = value >= 0;
          break;
        case TypeExprKind::Nat:
          fits = value >= 0 && value <= const_int(*d.val_type->bounds[0]);
          break;
        case TypeExprKind::IntRange:
          fits = value >= const_int(*d.val_type->bounds[0]) &&
                 value <= const_int(*d.val_type->bounds[1]);
          break;
        default:
          break;
      }
      if (!fits)
        error(d.span, "value of constant '" + d.name +
                          "' lies outside its declared type");
    }
    result_->consts[d.name] = value;
  }

  void resolve_typedecl(const Decl& d) {
    check_fresh_name(d);
    if (result_->type_names.count(d.name))
      error(d.span, "type '" + d.name + "' is already declared");
    result_->type_names[d.name] = resolve_type(*d.type_rhs);
  }

  DenPtr resolve_type(const TypeExpr& t) {
    switch (t.kind) {
      case TypeExprKind::Bool:
        return TypeDen::boolean();
      case TypeExprKind::NatUnbounded:
        error(t.span, "unbounded ℕ is only legal in val declarations");
      case TypeExprKind::Nat: {
        long long hi = const_int(*t.bounds[0]);
        if (hi < 0) error(t.span, "empty interval: ℕ[" + std::to_string(hi) + "]");
        return TypeDen::int_range(0, hi);
      }
      case TypeExprKind::IntRange: {
        long long lo = const_int(*t.bounds[0]);
        long long hi = const_int(*t.bounds[1]);
        if (lo > hi)
          error(t.span, "empty interval: ℤ[" + std::to_string(lo) + "," +
                            std::to_string(hi) + "]");
        return TypeDen::int_range(lo, hi);
      }
      case TypeExprKind::Array: {
        long long len = const_int(*t.bounds[0]);
        if (len < 0) error(t.span, "array length must be non-negative");
        return TypeDen::array(len, resolve_type(*t.args[0]));
      }
      case TypeExprKind::Set:
        return TypeDen::set(resolve_type(*t.args[0]));
      case TypeExprKind::Tuple: {
        std::vector<DenPtr> comps;
        for (const auto& a : t.args) comps.push_back(resolve_type(*a));
        return TypeDen::tuple(std::move(comps));
      }
      case TypeExprKind::Name: {
        auto it = result_->type_names.find(t.name);
        if (it == result_->type_names.end())
          error(t.span, "unknown type '" + t.name + "'");
        return it->second;
      }
    }
    error(t.span, "unresolvable type");
  }

  void resolve_operation(const Decl& d, int op_index) {
    check_fresh_name(d);
    if (result_->operations.count(d.name))
      error(d.span, "operation '" + d.name + "' is already declared");

    OpInfo info;
    info.decl = &d;
    info.op_index = op_index;

    scopes_.clear();
    push_scope();
    std::set<std::string> seen;
    for (const auto& p : d.params) {
      if (has_old_prefix(p.name))
        error(p.span, "names starting with 'old_' are reserved for snapshots");
      if (!seen.insert(p.name).second)
        error(p.span, "duplicate parameter '" + p.name + "'");
      DenPtr den = resolve_type(*p.type);
      if (!is_enumerable(*den))
        error(p.span, "parameter types must be finite");
      info.param_dens.push_back(den);
      declare(p.name, den, /*assignable=*/false, p.type);
    }

    switch (d.kind) {
      case DeclKind::Pred:
      case DeclKind::Theorem: {
        for (const auto& r : d.requires_) check_bool(*r);
        check_bool(*d.body_expr);
        info.result_den = TypeDen::boolean();
        break;
      }
      case DeclKind::Fun: {
        info.result_den = resolve_type(*d.result_type);
        for (const auto& r : d.requires_) check_bool(*r);
        DenPtr body = check_expr(*d.body_expr);
        if (!compatible_den(*body, *info.result_den))
          error(d.body_expr->span, "function body does not match result type");
        break;
      }
      case DeclKind::Proc: {
        info.result_den = resolve_type(*d.result_type);
        for (const auto& r : d.requires_) check_bool(*r);
        {
          push_scope();
          declare("result", info.result_den, false);
          for (const auto& e : d.ensures_) check_bool(*e);
          pop_scope();
        }
        // the top-level body frame stays open so the return expression can
        // reference body variables
        push_scope();
        for (const auto& item : d.body_cmd->commands) check_command(*item);
        DenPtr ret = check_expr(*d.return_expr);
        if (!compatible_den(*ret, *info.result_den))
          error(d.return_expr->span,
                "return expression does not match result type");
        pop_scope();
        break;
      }
      default:
        break;
    }
    pop_scope();
    result_->operations[d.name] = info;
    result_->operation_order.push_back(d.name);
  }

  // -- scopes ---------------------------------------------------------------

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }

  void declare(const std::string& name, DenPtr den, bool assignable,
               TypeExprPtr type_expr = nullptr) {
    scopes_.back()[name] = ScopeEntry{std::move(den), assignable,
                                      std::move(type_expr)};
  }

  const ScopeEntry* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  // -- commands -------------------------------------------------------------

  void check_command(const Command& c) {
    switch (c.kind) {
      case CmdKind::VarDecl: {
        if (has_old_prefix(c.var_name))
          error(c.span, "names starting with 'old_' are reserved for snapshots");
        if (scopes_.back().count(c.var_name))
          error(c.span, "variable '" + c.var_name +
                            "' is already declared in this scope");
        DenPtr den = resolve_type(*c.var_type);
        DenPtr init = check_expr(*c.init);
        if (!compatible_den(*init, *den))
          error(c.init->span, "initializer does not match variable type");
        result_->var_dens[&c] = den;
        declare(c.var_name, den, true, c.var_type);
        return;
      }
      case CmdKind::Assign: {
        const ScopeEntry* entry = lookup(c.target);
        if (!entry)
          error(c.span, "unknown variable '" + c.target + "'");
        if (!entry->assignable)
          error(c.span, "'" + c.target + "' is not an assignable variable");
        DenPtr slot = entry->den;
        for (const auto& idx : c.indices) {
          if (slot->kind != TypeDen::Kind::Array)
            error(idx->span, "indexed assignment into a non-array");
          check_int(*idx);
          slot = slot->elem;
        }
        DenPtr value = check_expr(*c.value);
        if (!compatible_den(*value, *slot))
          error(c.value->span, "assigned value does not match target type");
        return;
      }
      case CmdKind::If: {
        check_bool(*c.cond);
        push_scope();
        check_command(*c.then_cmd);
        pop_scope();
        if (c.else_cmd) {
          push_scope();
          check_command(*c.else_cmd);
          pop_scope();
        }
        return;
      }
      case CmdKind::While: {
        check_bool(*c.cond);
        check_loop(c, /*with_for_var=*/false);
        return;
      }
      case CmdKind::For: {
        push_scope();
        check_command(*c.for_init);
        check_bool(*c.cond);
        check_command(*c.for_update);
        check_loop(c, /*with_for_var=*/true);
        pop_scope();
        return;
      }
      case CmdKind::Seq: {
        push_scope();
        for (const auto& item : c.commands) check_command(*item);
        pop_scope();
        return;
      }
      case CmdKind::Assert:
        check_bool(*c.formula);
        return;
      case CmdKind::Call: {
        auto it = result_->operations.find(c.callee);
        if (it == result_->operations.end())
          error(c.span, "unknown operation '" + c.callee + "'");
        check_call_args(c.span, it->second, c.args);
        return;
      }
      case CmdKind::Return:
        error(c.span, "'return' may only end a procedure body");
    }
  }

  /// Computes the modified-variable set of a loop (syntactic
  /// over-approximation: every in-scope variable assigned anywhere in the
  /// body, in order of first assignment), registers it, and checks the
  /// annotations with the old_ snapshots in scope.
  void check_loop(const Command& c, bool with_for_var) {
    LoopInfo info;
    std::set<std::string> recorded;
    // locals are tracked per lexical block so that a body-local declaration
    // does not hide assignments to an equally named outer variable
    std::function<void(const Command&, std::set<std::string>&)> walk =
        [&](const Command& cmd, std::set<std::string>& locals) {
          switch (cmd.kind) {
            case CmdKind::VarDecl:
              locals.insert(cmd.var_name);
              break;
            case CmdKind::Assign:
              if (!locals.count(cmd.target) && lookup(cmd.target) &&
                  lookup(cmd.target)->assignable &&
                  !recorded.count(cmd.target)) {
                recorded.insert(cmd.target);
                info.modified.push_back(cmd.target);
              }
              break;
            case CmdKind::If: {
              std::set<std::string> t = locals;
              walk(*cmd.then_cmd, t);
              if (cmd.else_cmd) {
                std::set<std::string> f = locals;
                walk(*cmd.else_cmd, f);
              }
              break;
            }
            case CmdKind::While: {
              std::set<std::string> b = locals;
              walk(*cmd.body, b);
              break;
            }
            case CmdKind::For: {
              std::set<std::string> b = locals;
              walk(*cmd.for_init, b);
              walk(*cmd.for_update, b);
              walk(*cmd.body, b);
              break;
            }
            case CmdKind::Seq: {
              std::set<std::string> b = locals;
              for (const auto& item : cmd.commands) walk(*item, b);
              break;
            }
            default:
              break;
          }
        };
    std::set<std::string> top;
    walk(*c.body, top);
    if (with_for_var) walk(*c.for_update, top);

    for (const auto& name : info.modified) {
      const ScopeEntry* entry = lookup(name);
      info.modified_dens.push_back(entry->den);
      info.modified_types.push_back(find_var_type(name));
    }
    result_->loops[&c] = info;

    // invariants see the old_ snapshots
    push_scope();
    for (size_t i = 0; i < info.modified.size(); ++i)
      declare("old_" + info.modified[i], info.modified_dens[i], false);
    for (const auto& inv : c.invariants) check_bool(*inv);
    pop_scope();
    if (c.decreases) check_int(*c.decreases);

    push_scope();
    check_command(*c.body);
    pop_scope();
  }

  /// The syntactic type of a variable, for re-quantification in generated
  /// theorems.
  TypeExprPtr find_var_type(const std::string& name) {
    const ScopeEntry* entry = lookup(name);
    return entry ? entry->type_expr : nullptr;
  }

  // -- expressions ----------------------------------------------------------

  void check_bool(const Expr& e) {
    DenPtr den = check_expr(e);
    if (den->kind != TypeDen::Kind::Bool)
      error(e.span, "expected a boolean expression");
  }

  void check_int(const Expr& e) {
    DenPtr den = check_expr(e);
    if (den->kind != TypeDen::Kind::Int)
      error(e.span, "expected an integer expression");
  }

  void check_call_args(const Span& span, const OpInfo& op,
                       const std::vector<ExprPtr>& args) {
    if (args.size() != op.param_dens.size())
      error(span, "operation '" + op.decl->name + "' expects " +
                      std::to_string(op.param_dens.size()) + " argument(s)");
    for (size_t i = 0; i < args.size(); ++i) {
      DenPtr den = check_expr(*args[i]);
      if (!compatible_den(*den, *op.param_dens[i]))
        error(args[i]->span, "argument " + std::to_string(i + 1) +
                                 " does not match the parameter type");
    }
  }

  DenPtr remember(const Expr& e, DenPtr den) {
    result_->expr_dens[&e] = den;
    return den;
  }

  DenPtr check_expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        return remember(e, TypeDen::int_range(e.int_value, e.int_value));
      case ExprKind::BoolLit:
        return remember(e, TypeDen::boolean());
      case ExprKind::VarRef: {
        if (const ScopeEntry* entry = lookup(e.name))
          return remember(e, entry->den);
        auto it = result_->consts.find(e.name);
        if (it != result_->consts.end())
          return remember(e, TypeDen::int_range(it->second, it->second));
        error(e.span, "unknown variable '" + e.name + "'");
      }
      case ExprKind::Unary: {
        if (e.unary_op == UnaryOp::Neg) {
          check_int(*e.children[0]);
          return remember(e, TypeDen::integer());
        }
        check_bool(*e.children[0]);
        return remember(e, TypeDen::boolean());
      }
      case ExprKind::Binary: {
        switch (e.binary_op) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul:
          case BinaryOp::Quot:
          case BinaryOp::Rem:
            check_int(*e.children[0]);
            check_int(*e.children[1]);
            return remember(e, TypeDen::integer());
          case BinaryOp::Lt:
          case BinaryOp::Le:
          case BinaryOp::Gt:
          case BinaryOp::Ge:
            check_int(*e.children[0]);
            check_int(*e.children[1]);
            return remember(e, TypeDen::boolean());
          case BinaryOp::Eq:
          case BinaryOp::Ne: {
            DenPtr l = check_expr(*e.children[0]);
            DenPtr r = check_expr(*e.children[1]);
            if (!compatible_den(*l, *r))
              error(e.span, "equality between incompatible types");
            return remember(e, TypeDen::boolean());
          }
          case BinaryOp::And:
          case BinaryOp::Or:
          case BinaryOp::Implies:
          case BinaryOp::Iff:
            check_bool(*e.children[0]);
            check_bool(*e.children[1]);
            return remember(e, TypeDen::boolean());
          case BinaryOp::MemberOf: {
            DenPtr l = check_expr(*e.children[0]);
            DenPtr r = check_expr(*e.children[1]);
            if (r->kind != TypeDen::Kind::Set)
              error(e.children[1]->span, "∈ expects a set on the right");
            if (!compatible_den(*l, *r->elem))
              error(e.span, "element type does not match the set");
            return remember(e, TypeDen::boolean());
          }
        }
        error(e.span, "unsupported binary operation");
      }
      case ExprKind::Forall:
      case ExprKind::Exists: {
        push_scope();
        for (const auto& b : e.binders) {
          DenPtr den = resolve_type(*b.type);
          if (!is_enumerable(*den))
            error(b.span, "quantified variables need a finite type");
          result_->binder_dens[&b] = den;
          declare(b.name, den, false);
        }
        check_bool(*e.children[0]);
        pop_scope();
        return remember(e, TypeDen::boolean());
      }
      case ExprKind::Choose: {
        push_scope();
        DenPtr den = resolve_type(*e.binders[0].type);
        if (!is_enumerable(*den))
          error(e.binders[0].span, "choose needs a finite type");
        result_->binder_dens[&e.binders[0]] = den;
        declare(e.binders[0].name, den, false);
        check_bool(*e.children[0]);
        pop_scope();
        return remember(e, den);
      }
      case ExprKind::Let: {
        push_scope();
        for (const auto& b : e.bindings)
          declare(b.name, check_expr(*b.value), false);
        DenPtr den = check_expr(*e.children[0]);
        pop_scope();
        return remember(e, den);
      }
      case ExprKind::LetPar: {
        std::vector<DenPtr> dens;
        for (const auto& b : e.bindings) dens.push_back(check_expr(*b.value));
        push_scope();
        for (size_t i = 0; i < e.bindings.size(); ++i)
          declare(e.bindings[i].name, dens[i], false);
        DenPtr den = check_expr(*e.children[0]);
        pop_scope();
        return remember(e, den);
      }
      case ExprKind::IfElse: {
        check_bool(*e.children[0]);
        DenPtr t = check_expr(*e.children[1]);
        DenPtr f = check_expr(*e.children[2]);
        if (!compatible_den(*t, *f))
          error(e.span, "conditional branches have incompatible types");
        return remember(e, join_den(t, f));
      }
      case ExprKind::Call: {
        auto it = result_->operations.find(e.name);
        if (it == result_->operations.end())
          error(e.span, "unknown operation '" + e.name + "'");
        check_call_args(e.span, it->second, e.children);
        return remember(e, it->second.result_den);
      }
      case ExprKind::ArrayIndex: {
        DenPtr base = check_expr(*e.children[0]);
        if (base->kind != TypeDen::Kind::Array)
          error(e.children[0]->span, "indexing into a non-array");
        check_int(*e.children[1]);
        return remember(e, base->elem);
      }
      case ExprKind::ArrayUpdate: {
        DenPtr base = check_expr(*e.children[0]);
        if (base->kind != TypeDen::Kind::Array)
          error(e.children[0]->span, "updating a non-array");
        check_int(*e.children[1]);
        DenPtr value = check_expr(*e.children[2]);
        if (!compatible_den(*value, *base->elem))
          error(e.children[2]->span, "update value does not match element type");
        return remember(e, base);
      }
      case ExprKind::TupleProj: {
        DenPtr base = check_expr(*e.children[0]);
        if (base->kind != TypeDen::Kind::Tuple)
          error(e.children[0]->span, "projection from a non-tuple");
        if (e.proj_index < 1 ||
            e.proj_index > static_cast<int>(base->comps.size()))
          error(e.span, "projection index out of range");
        return remember(e, base->comps[e.proj_index - 1]);
      }
      case ExprKind::TupleLit: {
        std::vector<DenPtr> comps;
        for (const auto& c : e.children) comps.push_back(check_expr(*c));
        return remember(e, TypeDen::tuple(std::move(comps)));
      }
      case ExprKind::SetLit: {
        if (e.children.empty())
          error(e.span, "empty set literals have no inferable element type");
        DenPtr den = check_expr(*e.children[0]);
        for (size_t i = 1; i < e.children.size(); ++i) {
          DenPtr other = check_expr(*e.children[i]);
          if (!compatible_den(*den, *other))
            error(e.children[i]->span, "set elements have incompatible types");
          den = join_den(den, other);
        }
        return remember(e, TypeDen::set(den));
      }
    }
    error(e.span, "unsupported expression");
  }
};

}  // namespace

std::shared_ptr<const TypedSpec> resolve(
    std::shared_ptr<const Spec> spec, const std::vector<ConstBinding>& bindings,
    std::shared_ptr<const SourceFile> source) {
  return Resolver(std::move(spec), bindings, std::move(source)).run();
}

}  // namespace finicheck

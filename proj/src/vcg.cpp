#include "finicheck/vcg.hpp"

#include <functional>

#include <json.hpp>

#include "finicheck/printer.hpp"

namespace finicheck {

const char* vc_category_tag(VcCategory c) {
  switch (c) {
    case VcCategory::ResultCorrect: return "CorrOp";
    case VcCategory::InvariantInit: return "InvInit";
    case VcCategory::MeasureNonNegative: return "MeasNN";
    case VcCategory::InvariantPreserved: return "InvPres";
    case VcCategory::MeasureDecreased: return "MeasDec";
    case VcCategory::OpPrecondition: return "PreOp";
  }
  return "?";
}

const char* vc_category_name(VcCategory c) {
  switch (c) {
    case VcCategory::ResultCorrect: return "ResultCorrect";
    case VcCategory::InvariantInit: return "InvariantInit";
    case VcCategory::MeasureNonNegative: return "MeasureNonNegative";
    case VcCategory::InvariantPreserved: return "InvariantPreserved";
    case VcCategory::MeasureDecreased: return "MeasureDecreased";
    case VcCategory::OpPrecondition: return "OpPrecondition";
  }
  return "?";
}

std::string vc_category_question(VcCategory c, const std::string& callee) {
  switch (c) {
    case VcCategory::ResultCorrect:
      return "Is the result correct?";
    case VcCategory::InvariantInit:
      return "Does the loop invariant initially hold?";
    case VcCategory::MeasureNonNegative:
      return "Is the loop measure non-negative?";
    case VcCategory::InvariantPreserved:
      return "Is the loop invariant preserved?";
    case VcCategory::MeasureDecreased:
      return "Is the loop measure decreased?";
    case VcCategory::OpPrecondition:
      return "Does the precondition of '" + callee + "' hold?";
  }
  return "?";
}

namespace {

using Wrap = std::function<ExprPtr(ExprPtr)>;

Wrap identity_wrap() {
  return [](ExprPtr e) { return e; };
}

struct Ctx {
  Wrap wrap;
  std::vector<Span> spans;
};

class VcGen {
public:
  VcGen(const TypedSpec& spec, const Decl& proc) : spec_(spec), proc_(proc) {
    collect_used_names();
    seq_ = spec_.operations.at(proc_.name).op_index;
  }

  std::vector<VerificationCondition> run() {
    // the main correctness theorem per the wp scheme
    std::vector<Span> corr_spans;
    ExprPtr corr = wp_formula(*proc_.body_cmd, result_post(), &corr_spans);
    Span goal = proc_.ensures_.empty() ? proc_.return_expr->span
                                       : ensures_goal_span();
    emit_main(VcCategory::ResultCorrect, corr, goal, std::move(corr_spans));

    // obligations inside the requires clauses are evaluated for every input
    // during the admissibility test, so their theorems carry no precondition
    {
      Wrap guard = identity_wrap();
      for (const auto& r : proc_.requires_) {
        scan_obligations(*r, Ctx{identity_wrap(), {r->span}}, guard,
                         /*with_requires=*/false);
        ExprPtr clause = r;
        Wrap prev = guard;
        guard = [prev, clause](ExprPtr e) {
          return prev(mk_binary(BinaryOp::Implies, clause, std::move(e),
                                clause->span));
        };
      }
    }

    // loop conditions and call obligations from the body
    gen_command(*proc_.body_cmd, Ctx{identity_wrap(), {}});

    // obligations in the return expression and the postconditions hold in
    // the post-state, i.e. under the wp of the whole body
    {
      Wrap at_return = [this](ExprPtr e) {
        return wp_formula(*proc_.body_cmd, std::move(e), nullptr);
      };
      scan_obligations(*proc_.return_expr,
                       Ctx{at_return, {proc_.return_expr->span}},
                       identity_wrap(), true);
      Wrap guard = identity_wrap();
      for (const auto& en : proc_.ensures_) {
        ExprPtr ret = proc_.return_expr;
        VcGen* self = this;
        Wrap at_post = [self, ret](ExprPtr e) {
          std::vector<LetBinding> bind{LetBinding{"result", ret, ret->span}};
          return self->wp_formula(
              *self->proc_.body_cmd,
              mk_let(ExprKind::Let, std::move(bind), std::move(e), ret->span),
              nullptr);
        };
        scan_obligations(*en, Ctx{at_post, {en->span}}, guard, true);
        ExprPtr clause = en;
        Wrap prev = guard;
        guard = [prev, clause](ExprPtr e) {
          return prev(mk_binary(BinaryOp::Implies, clause, std::move(e),
                                clause->span));
        };
      }
    }

    std::vector<VerificationCondition> all = std::move(main_);
    for (auto& vc : preops_) all.push_back(std::move(vc));
    return all;
  }

  WpResult wp_of(const Command& c, ExprPtr post) {
    WpResult out;
    out.formula = wp_formula(c, std::move(post), &out.contributing_spans);
    gen_command(c, Ctx{identity_wrap(), {}});
    out.side_conditions = std::move(main_);
    for (auto& vc : preops_) out.side_conditions.push_back(std::move(vc));
    return out;
  }

private:
  const TypedSpec& spec_;
  const Decl& proc_;
  int seq_ = 0;
  int counters_[6] = {0, 0, 0, 0, 0, 0};
  std::vector<VerificationCondition> main_;
  std::vector<VerificationCondition> preops_;
  std::set<std::string> used_names_;

  void collect_used_names() {
    for (const auto& p : proc_.params) used_names_.insert(p.name);
    for (const auto& r : proc_.requires_) collect_names(*r, used_names_);
    for (const auto& e : proc_.ensures_) collect_names(*e, used_names_);
    collect_names(*proc_.return_expr, used_names_);
    std::function<void(const Command&)> walk = [&](const Command& c) {
      if (!c.var_name.empty()) used_names_.insert(c.var_name);
      if (!c.target.empty()) used_names_.insert(c.target);
      for (const auto& e :
           {c.init, c.value, c.cond, c.decreases, c.formula, c.ret})
        if (e) collect_names(*e, used_names_);
      for (const auto& e : c.indices) collect_names(*e, used_names_);
      for (const auto& e : c.invariants) collect_names(*e, used_names_);
      for (const auto& e : c.args) collect_names(*e, used_names_);
      for (const auto& sub :
           {c.then_cmd, c.else_cmd, c.body, c.for_init, c.for_update})
        if (sub) walk(*sub);
      for (const auto& sub : c.commands) walk(*sub);
    };
    walk(*proc_.body_cmd);
    for (const auto& [name, info] : spec_.operations) used_names_.insert(name);
    for (const auto& [name, value] : spec_.consts) used_names_.insert(name);
  }

  std::string fresh(const std::string& base) {
    if (!used_names_.count(base)) {
      used_names_.insert(base);
      return base;
    }
    for (int i = 0;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!used_names_.count(cand)) {
        used_names_.insert(cand);
        return cand;
      }
    }
  }

  std::string next_id(VcCategory cat) {
    int idx = counters_[static_cast<int>(cat)]++;
    return "_" + proc_.name + "_" + std::to_string(seq_) + "_" +
           vc_category_tag(cat) + std::to_string(idx);
  }

  ExprPtr result_post() const {
    std::vector<LetBinding> bind{
        LetBinding{"result", proc_.return_expr, proc_.return_expr->span}};
    return mk_let(ExprKind::Let, std::move(bind),
                  mk_conj(proc_.ensures_, proc_.return_expr->span),
                  proc_.return_expr->span);
  }

  Span ensures_goal_span() const {
    Span s = proc_.ensures_.front()->span;
    for (const auto& e : proc_.ensures_) s = join(s, e->span);
    return s;
  }

  DeclPtr make_theorem(const std::string& id, ExprPtr body,
                       bool with_requires) const {
    auto thm = std::make_shared<Decl>();
    thm->kind = DeclKind::Theorem;
    thm->name = id;
    thm->span = proc_.span;
    thm->params = proc_.params;
    if (with_requires) thm->requires_ = proc_.requires_;
    thm->body_expr = std::move(body);
    return thm;
  }

  void emit_main(VcCategory cat, ExprPtr formula, Span goal,
                 std::vector<Span> contributing) {
    VerificationCondition vc;
    vc.id = next_id(cat);
    vc.category = cat;
    vc.theorem = make_theorem(vc.id, std::move(formula), true);
    vc.goal_span = goal;
    vc.contributing_spans = std::move(contributing);
    main_.push_back(std::move(vc));
  }

  void emit_preop(const std::string& callee, ExprPtr formula, Span goal,
                  std::vector<Span> contributing, bool with_requires) {
    VerificationCondition vc;
    vc.id = next_id(VcCategory::OpPrecondition);
    vc.category = VcCategory::OpPrecondition;
    vc.callee = callee;
    vc.theorem = make_theorem(vc.id, std::move(formula), with_requires);
    vc.goal_span = goal;
    vc.contributing_spans = std::move(contributing);
    preops_.push_back(std::move(vc));
  }

  const Decl* callee_decl(const std::string& name) const {
    const OpInfo* op = spec_.find_operation(name);
    return op ? op->decl : nullptr;
  }

  static bool is_proc(const Decl* d) { return d && d->kind == DeclKind::Proc; }

  /// Simultaneous substitution of callee parameters by argument expressions.
  ExprPtr instantiate(const Decl& callee, const std::vector<ExprPtr>& args,
                      const ExprPtr& formula,
                      const ExprPtr& result_value = nullptr) const {
    std::map<std::string, ExprPtr> subst;
    for (size_t i = 0; i < callee.params.size(); ++i)
      subst[callee.params[i].name] = args[i];
    if (result_value) subst["result"] = result_value;
    return substitute(formula, subst);
  }

  // -- the weakest-precondition formula --------------------------------------

  static void add_span(std::vector<Span>* spans, Span s) {
    if (spans) spans->push_back(s);
  }

  /// Direct procedure call as the right-hand side of a binding: the callee's
  /// postcondition relates a universally quantified result to the arguments.
  ExprPtr wp_proc_call_binding(const Command& c, const std::string& bound_name,
                               const Expr& call, ExprPtr post) {
    const Decl* callee = callee_decl(call.name);
    std::string res = fresh(call.name + "_res");
    std::vector<LetBinding> bind{
        LetBinding{bound_name, mk_var(res, c.span), c.span}};
    ExprPtr inner = mk_let(ExprKind::Let, std::move(bind), std::move(post),
                           c.span);
    if (!callee->ensures_.empty()) {
      ExprPtr ens =
          instantiate(*callee, call.children, mk_conj(callee->ensures_, c.span),
                      mk_var(res, c.span));
      inner = mk_binary(BinaryOp::Implies, ens, std::move(inner), c.span);
    }
    std::vector<Binder> binder{Binder{res, callee->result_type, c.span}};
    return mk_quant(ExprKind::Forall, std::move(binder), std::move(inner),
                    c.span);
  }

  void forbid_nested_proc_calls(const Expr& e) const {
    if (e.kind == ExprKind::Call && is_proc(callee_decl(e.name)))
      throw UnsupportedConstructError(
          "a procedure call is only supported as the direct right-hand side "
          "of an assignment or declaration",
          e.span);
    for (const auto& b : e.bindings) forbid_nested_proc_calls(*b.value);
    for (const auto& ch : e.children) forbid_nested_proc_calls(*ch);
  }

  ExprPtr binding_wp(const Command& c, const std::string& name,
                     const ExprPtr& rhs, ExprPtr post,
                     std::vector<Span>* spans) {
    add_span(spans, c.span);
    if (rhs->kind == ExprKind::Call && is_proc(callee_decl(rhs->name))) {
      for (const auto& arg : rhs->children) forbid_nested_proc_calls(*arg);
      return wp_proc_call_binding(c, name, *rhs, std::move(post));
    }
    forbid_nested_proc_calls(*rhs);
    std::vector<LetBinding> bind{LetBinding{name, rhs, c.span}};
    return mk_let(ExprKind::Let, std::move(bind), std::move(post), c.span);
  }

  ExprPtr update_chain(const ExprPtr& base, const std::vector<ExprPtr>& idx,
                       size_t at, const ExprPtr& rhs, Span span) const {
    if (at == idx.size()) return rhs;
    ExprPtr inner =
        update_chain(mk_index(base, idx[at], span), idx, at + 1, rhs, span);
    return mk_update(base, idx[at], std::move(inner), span);
  }

  ExprPtr wp_formula(const Command& c, ExprPtr post, std::vector<Span>* spans) {
    switch (c.kind) {
      case CmdKind::VarDecl:
        return binding_wp(c, c.var_name, c.init, std::move(post), spans);
      case CmdKind::Assign: {
        if (c.indices.empty())
          return binding_wp(c, c.target, c.value, std::move(post), spans);
        add_span(spans, c.span);
        forbid_nested_proc_calls(*c.value);
        for (const auto& i : c.indices) forbid_nested_proc_calls(*i);
        ExprPtr updated = update_chain(mk_var(c.target, c.span), c.indices, 0,
                                       c.value, c.span);
        std::vector<LetBinding> bind{
            LetBinding{c.target, std::move(updated), c.span}};
        return mk_let(ExprKind::Let, std::move(bind), std::move(post), c.span);
      }
      case CmdKind::If: {
        add_span(spans, c.cond->span);
        forbid_nested_proc_calls(*c.cond);
        ExprPtr then_wp = wp_formula(*c.then_cmd, post, spans);
        ExprPtr else_wp =
            c.else_cmd ? wp_formula(*c.else_cmd, post, spans) : post;
        ExprPtr pos =
            mk_binary(BinaryOp::Implies, c.cond, std::move(then_wp), c.span);
        ExprPtr neg = mk_binary(BinaryOp::Implies,
                                mk_unary(UnaryOp::Not, c.cond, c.cond->span),
                                std::move(else_wp), c.span);
        return mk_binary(BinaryOp::And, std::move(pos), std::move(neg),
                         c.span);
      }
      case CmdKind::While:
        return loop_wp(c, std::move(post), spans);
      case CmdKind::For: {
        ExprPtr loop = loop_wp(c, std::move(post), spans);
        return binding_wp(*c.for_init, c.for_init->var_name, c.for_init->init,
                          std::move(loop), spans);
      }
      case CmdKind::Seq: {
        ExprPtr acc = std::move(post);
        for (size_t i = c.commands.size(); i-- > 0;)
          acc = wp_formula(*c.commands[i], std::move(acc), spans);
        return acc;
      }
      case CmdKind::Assert:
        add_span(spans, c.formula->span);
        forbid_nested_proc_calls(*c.formula);
        return mk_binary(BinaryOp::And, c.formula, std::move(post), c.span);
      case CmdKind::Call:
        // the callee's own conditions cover its termination; the caller
        // state is unchanged since the result is discarded
        add_span(spans, c.span);
        return post;
      case CmdKind::Return:
        throw UnsupportedConstructError("unexpected return command", c.span);
    }
    throw UnsupportedConstructError("unsupported command", c.span);
  }

  /// Invariant-based loop abstraction:
  /// letpar old_v = v, … in (∀V. ((I ∧ ¬b) ⇒ post)); the body plays no role
  /// in this formula.
  ExprPtr loop_wp(const Command& c, ExprPtr post, std::vector<Span>* spans) {
    add_span(spans, c.cond->span);
    for (const auto& inv : c.invariants) add_span(spans, inv->span);
    ExprPtr not_cond = mk_unary(UnaryOp::Not, c.cond, c.cond->span);
    ExprPtr ante = c.invariants.empty()
                       ? not_cond
                       : mk_binary(BinaryOp::And, mk_conj(c.invariants, c.span),
                                   std::move(not_cond), c.span);
    ExprPtr inner =
        mk_binary(BinaryOp::Implies, std::move(ante), std::move(post), c.span);
    return close_over_boundary(c, std::move(inner));
  }

  ExprPtr quantify_modified(const Command& loop, ExprPtr e) const {
    const LoopInfo& li = spec_.loops.at(&loop);
    if (li.modified.empty()) return e;
    std::vector<Binder> binders;
    for (size_t i = 0; i < li.modified.size(); ++i)
      binders.push_back(
          Binder{li.modified[i], li.modified_types[i], loop.span});
    return mk_quant(ExprKind::Forall, std::move(binders), std::move(e),
                    loop.span);
  }

  ExprPtr snapshot_olds(const Command& loop, ExprPtr e) const {
    const LoopInfo& li = spec_.loops.at(&loop);
    if (li.modified.empty()) return e;
    std::vector<LetBinding> olds;
    for (const auto& name : li.modified)
      olds.push_back(
          LetBinding{"old_" + name, mk_var(name, loop.span), loop.span});
    return mk_let(ExprKind::LetPar, std::move(olds), std::move(e), loop.span);
  }

  ExprPtr close_over_boundary(const Command& loop, ExprPtr e) const {
    return snapshot_olds(loop, quantify_modified(loop, std::move(e)));
  }

  // -- side conditions --------------------------------------------------------

  static Ctx extend(const Ctx& ctx, Wrap inner, std::vector<Span> more = {}) {
    Ctx out;
    Wrap outer = ctx.wrap;
    out.wrap = [outer, inner](ExprPtr e) { return outer(inner(std::move(e))); };
    out.spans = ctx.spans;
    for (auto& s : more) out.spans.push_back(s);
    return out;
  }

  void gen_command(const Command& c, const Ctx& ctx) {
    switch (c.kind) {
      case CmdKind::VarDecl:
        gen_binding_rhs(c, *c.init, ctx);
        return;
      case CmdKind::Assign:
        for (const auto& i : c.indices)
          scan_obligations(*i, ctx, identity_wrap(), true);
        gen_binding_rhs(c, *c.value, ctx);
        return;
      case CmdKind::If: {
        scan_obligations(*c.cond, ctx, identity_wrap(), true);
        ExprPtr cond = c.cond;
        gen_command(*c.then_cmd, extend(ctx,
                                        [cond](ExprPtr e) {
                                          return mk_binary(BinaryOp::Implies,
                                                           cond, std::move(e),
                                                           cond->span);
                                        },
                                        {c.cond->span}));
        if (c.else_cmd) {
          gen_command(*c.else_cmd,
                      extend(ctx,
                             [cond](ExprPtr e) {
                               return mk_binary(
                                   BinaryOp::Implies,
                                   mk_unary(UnaryOp::Not, cond, cond->span),
                                   std::move(e), cond->span);
                             },
                             {c.cond->span}));
        }
        return;
      }
      case CmdKind::While:
        gen_loop(c, nullptr, ctx);
        return;
      case CmdKind::For: {
        gen_binding_rhs(*c.for_init, *c.for_init->init, ctx);
        const Command* init = c.for_init.get();
        VcGen* self = this;
        Ctx after_init =
            extend(ctx,
                   [self, init](ExprPtr e) {
                     return self->binding_wp(*init, init->var_name, init->init,
                                             std::move(e), nullptr);
                   },
                   {c.for_init->span});
        gen_loop(c, c.for_update, after_init);
        return;
      }
      case CmdKind::Seq: {
        std::vector<CommandPtr> prefix;
        for (const auto& item : c.commands) {
          VcGen* self = this;
          std::vector<CommandPtr> pref = prefix;
          std::vector<Span> pref_spans;
          for (const auto& p : pref) pref_spans.push_back(p->span);
          Ctx here = extend(ctx,
                            [self, pref](ExprPtr e) {
                              ExprPtr acc = std::move(e);
                              for (size_t i = pref.size(); i-- > 0;)
                                acc = self->wp_formula(*pref[i], std::move(acc),
                                                       nullptr);
                              return acc;
                            },
                            std::move(pref_spans));
          gen_command(*item, here);
          prefix.push_back(item);
        }
        return;
      }
      case CmdKind::Assert:
        scan_obligations(*c.formula, ctx, identity_wrap(), true);
        return;
      case CmdKind::Call: {
        for (const auto& a : c.args)
          scan_obligations(*a, ctx, identity_wrap(), true);
        const Decl* callee = callee_decl(c.callee);
        if (callee && !callee->requires_.empty()) {
          ExprPtr obligation =
              instantiate(*callee, c.args, mk_conj(callee->requires_, c.span));
          emit_preop(c.callee, ctx.wrap(obligation), c.span, ctx.spans, true);
        }
        return;
      }
      case CmdKind::Return:
        return;
    }
  }

  void gen_binding_rhs(const Command&, const Expr& rhs, const Ctx& ctx) {
    if (rhs.kind == ExprKind::Call && is_proc(callee_decl(rhs.name))) {
      for (const auto& a : rhs.children)
        scan_obligations(*a, ctx, identity_wrap(), true);
      const Decl* callee = callee_decl(rhs.name);
      if (!callee->requires_.empty()) {
        ExprPtr obligation = instantiate(*callee, rhs.children,
                                         mk_conj(callee->requires_, rhs.span));
        emit_preop(rhs.name, ctx.wrap(obligation), rhs.span, ctx.spans, true);
      }
      return;
    }
    scan_obligations(rhs, ctx, identity_wrap(), true);
  }

  void gen_loop(const Command& c, const CommandPtr& update, const Ctx& ctx) {
    VcGen* self = this;
    const Command* loop = &c;

    auto bound = [self, loop](ExprPtr e) {
      return self->snapshot_olds(*loop, std::move(e));
    };
    auto boundary = [self, loop](ExprPtr e) {
      return self->snapshot_olds(*loop,
                                 self->quantify_modified(*loop, std::move(e)));
    };

    ExprPtr all_inv =
        c.invariants.empty() ? nullptr : mk_conj(c.invariants, c.span);
    ExprPtr cond = c.cond;

    // preservation runs the body followed by the for-loop update
    CommandPtr effective_body = c.body;
    if (update) {
      auto seq = std::make_shared<Command>();
      seq->kind = CmdKind::Seq;
      seq->span = c.span;
      seq->commands = {c.body, update};
      effective_body = seq;
    }

    // InvariantInit: each invariant holds on entry under the preceding code
    for (const auto& inv : c.invariants) {
      VerificationCondition vc;
      vc.id = next_id(VcCategory::InvariantInit);
      vc.category = VcCategory::InvariantInit;
      vc.theorem = make_theorem(vc.id, ctx.wrap(bound(inv)), true);
      vc.goal_span = inv->span;
      vc.contributing_spans = ctx.spans;
      main_.push_back(std::move(vc));
    }
    // MeasureNonNegative: I ⇒ D ≥ 0 at an arbitrary boundary
    if (c.decreases) {
      ExprPtr ge0 = mk_binary(BinaryOp::Ge, c.decreases, mk_int(0, c.span),
                              c.decreases->span);
      ExprPtr f = all_inv ? mk_binary(BinaryOp::Implies, all_inv,
                                      std::move(ge0), c.span)
                          : std::move(ge0);
      VerificationCondition vc;
      vc.id = next_id(VcCategory::MeasureNonNegative);
      vc.category = VcCategory::MeasureNonNegative;
      vc.theorem = make_theorem(vc.id, ctx.wrap(boundary(std::move(f))), true);
      vc.goal_span = c.decreases->span;
      vc.contributing_spans = ctx.spans;
      for (const auto& inv : c.invariants)
        vc.contributing_spans.push_back(inv->span);
      main_.push_back(std::move(vc));
    }
    // InvariantPreserved: ∀V. (I ∧ b) ⇒ wp(body, I_k)
    ExprPtr inv_and_cond =
        all_inv ? mk_binary(BinaryOp::And, all_inv, cond, c.span) : cond;
    for (const auto& inv : c.invariants) {
      std::vector<Span> spans = ctx.spans;
      spans.push_back(c.cond->span);
      for (const auto& other : c.invariants) spans.push_back(other->span);
      ExprPtr pres = wp_formula(*effective_body, inv, &spans);
      ExprPtr f =
          mk_binary(BinaryOp::Implies, inv_and_cond, std::move(pres), c.span);
      VerificationCondition vc;
      vc.id = next_id(VcCategory::InvariantPreserved);
      vc.category = VcCategory::InvariantPreserved;
      vc.theorem = make_theorem(vc.id, ctx.wrap(boundary(std::move(f))), true);
      vc.goal_span = inv->span;
      vc.contributing_spans = std::move(spans);
      main_.push_back(std::move(vc));
    }
    // MeasureDecreased: ∀V. (I ∧ b) ⇒ let d0 = D in wp(body, D < d0)
    if (c.decreases) {
      std::string d0 = fresh("d0");
      std::vector<Span> spans = ctx.spans;
      spans.push_back(c.cond->span);
      spans.push_back(c.decreases->span);
      ExprPtr less =
          mk_binary(BinaryOp::Lt, c.decreases, mk_var(d0, c.decreases->span),
                    c.decreases->span);
      ExprPtr pres = wp_formula(*effective_body, std::move(less), &spans);
      std::vector<LetBinding> bind{
          LetBinding{d0, c.decreases, c.decreases->span}};
      ExprPtr snap = mk_let(ExprKind::Let, std::move(bind), std::move(pres),
                            c.decreases->span);
      ExprPtr f =
          mk_binary(BinaryOp::Implies, inv_and_cond, std::move(snap), c.span);
      VerificationCondition vc;
      vc.id = next_id(VcCategory::MeasureDecreased);
      vc.category = VcCategory::MeasureDecreased;
      vc.theorem = make_theorem(vc.id, ctx.wrap(boundary(std::move(f))), true);
      vc.goal_span = c.decreases->span;
      vc.contributing_spans = std::move(spans);
      main_.push_back(std::move(vc));
    }

    // obligations inside the annotations: invariant k may assume those
    // checked before it
    for (size_t k = 0; k < c.invariants.size(); ++k) {
      ExprPtr assume;
      for (size_t j = 0; j < k; ++j)
        assume = assume ? mk_binary(BinaryOp::And, assume, c.invariants[j],
                                    c.span)
                        : c.invariants[j];
      Ctx inv_ctx = extend(ctx, [boundary, assume](ExprPtr e) {
        if (assume)
          e = mk_binary(BinaryOp::Implies, assume, std::move(e), Span{});
        return boundary(std::move(e));
      });
      scan_obligations(*c.invariants[k], inv_ctx, identity_wrap(), true);
    }
    Ctx at_boundary = extend(ctx, [boundary, all_inv](ExprPtr e) {
      if (all_inv)
        e = mk_binary(BinaryOp::Implies, all_inv, std::move(e), Span{});
      return boundary(std::move(e));
    });
    scan_obligations(*c.cond, at_boundary, identity_wrap(), true);
    if (c.decreases)
      scan_obligations(*c.decreases, at_boundary, identity_wrap(), true);

    // obligations in the body, under the boundary assumptions and the wp
    // path inside the body
    Ctx in_body = extend(ctx,
                         [boundary, inv_and_cond](ExprPtr e) {
                           return boundary(mk_binary(BinaryOp::Implies,
                                                     inv_and_cond,
                                                     std::move(e), Span{}));
                         },
                         {c.cond->span});
    gen_command(*effective_body, in_body);
  }

  /// Walks an expression; every call to an operation with a nontrivial
  /// requires clause yields an OpPrecondition theorem asserting the
  /// instantiated requires at that site, guarded by the short-circuit
  /// structure dominating the call.
  void scan_obligations(const Expr& e, const Ctx& ctx, Wrap guard,
                        bool with_requires) {
    switch (e.kind) {
      case ExprKind::Call: {
        const Decl* callee = callee_decl(e.name);
        if (is_proc(callee))
          throw UnsupportedConstructError(
              "procedure calls cannot appear inside formulas", e.span);
        for (const auto& a : e.children)
          scan_obligations(*a, ctx, guard, with_requires);
        if (callee && !callee->requires_.empty()) {
          ExprPtr obligation = instantiate(
              *callee, e.children, mk_conj(callee->requires_, e.span));
          std::vector<Span> spans = ctx.spans;
          spans.push_back(e.span);
          emit_preop(e.name, ctx.wrap(guard(std::move(obligation))), e.span,
                     std::move(spans), with_requires);
        }
        return;
      }
      case ExprKind::Binary: {
        const ExprPtr& l = e.children[0];
        const ExprPtr& r = e.children[1];
        scan_obligations(*l, ctx, guard, with_requires);
        Wrap rhs_guard = guard;
        switch (e.binary_op) {
          case BinaryOp::And:
          case BinaryOp::Implies:
            rhs_guard = [guard, l](ExprPtr f) {
              return guard(
                  mk_binary(BinaryOp::Implies, l, std::move(f), l->span));
            };
            break;
          case BinaryOp::Or:
            rhs_guard = [guard, l](ExprPtr f) {
              return guard(mk_binary(BinaryOp::Implies,
                                     mk_unary(UnaryOp::Not, l, l->span),
                                     std::move(f), l->span));
            };
            break;
          default:
            break;
        }
        scan_obligations(*r, ctx, rhs_guard, with_requires);
        return;
      }
      case ExprKind::IfElse: {
        const ExprPtr& cond = e.children[0];
        scan_obligations(*cond, ctx, guard, with_requires);
        Wrap then_guard = [guard, cond](ExprPtr f) {
          return guard(
              mk_binary(BinaryOp::Implies, cond, std::move(f), cond->span));
        };
        Wrap else_guard = [guard, cond](ExprPtr f) {
          return guard(mk_binary(BinaryOp::Implies,
                                 mk_unary(UnaryOp::Not, cond, cond->span),
                                 std::move(f), cond->span));
        };
        scan_obligations(*e.children[1], ctx, then_guard, with_requires);
        scan_obligations(*e.children[2], ctx, else_guard, with_requires);
        return;
      }
      case ExprKind::Forall:
      case ExprKind::Exists:
      case ExprKind::Choose: {
        // obligations inside a quantified body must hold for every
        // instantiation that evaluation may visit
        std::vector<Binder> binders = e.binders;
        Wrap inner = [guard, binders](ExprPtr f) {
          return guard(
              mk_quant(ExprKind::Forall, binders, std::move(f), Span{}));
        };
        scan_obligations(*e.children[0], ctx, inner, with_requires);
        return;
      }
      case ExprKind::Let:
      case ExprKind::LetPar: {
        for (size_t i = 0; i < e.bindings.size(); ++i) {
          Wrap value_guard = guard;
          if (e.kind == ExprKind::Let && i > 0) {
            std::vector<LetBinding> prefix(e.bindings.begin(),
                                           e.bindings.begin() + i);
            value_guard = [guard, prefix](ExprPtr f) {
              return guard(mk_let(ExprKind::Let, prefix, std::move(f), Span{}));
            };
          }
          scan_obligations(*e.bindings[i].value, ctx, value_guard,
                           with_requires);
        }
        std::vector<LetBinding> bindings = e.bindings;
        ExprKind kind = e.kind;
        Wrap body_guard = [guard, bindings, kind](ExprPtr f) {
          return guard(mk_let(kind, bindings, std::move(f), Span{}));
        };
        scan_obligations(*e.children[0], ctx, body_guard, with_requires);
        return;
      }
      case ExprKind::Unary:
      case ExprKind::ArrayIndex:
      case ExprKind::ArrayUpdate:
      case ExprKind::TupleProj:
      case ExprKind::TupleLit:
      case ExprKind::SetLit:
        for (const auto& ch : e.children)
          scan_obligations(*ch, ctx, guard, with_requires);
        return;
      default:
        return;
    }
  }
};

}  // namespace

WpResult wp(const TypedSpec& spec, const Decl& proc, const Command& c,
            const ExprPtr& post) {
  return VcGen(spec, proc).wp_of(c, post);
}

std::vector<VerificationCondition> generate_vcs(const TypedSpec& spec,
                                                const Decl& proc) {
  return VcGen(spec, proc).run();
}

std::vector<VerificationCondition> generate_all_vcs(
    const TypedSpec& spec, const std::string& only_proc) {
  std::vector<VerificationCondition> out;
  for (const auto& name : spec.operation_order) {
    const OpInfo& info = spec.operations.at(name);
    if (info.decl->kind != DeclKind::Proc) continue;
    if (!only_proc.empty() && name != only_proc) continue;
    auto vcs = generate_vcs(spec, *info.decl);
    for (auto& vc : vcs) out.push_back(std::move(vc));
  }
  return out;
}

std::vector<VcCheckOutcome> check_vcs(std::vector<VerificationCondition>& vcs,
                                      const TypedSpec& spec,
                                      const CheckConfig& base) {
  auto extended = std::make_shared<Spec>();
  extended->decls = spec.spec->decls;
  for (const auto& vc : vcs) extended->decls.push_back(vc.theorem);
  auto typed = resolve(extended, spec.bindings, spec.source);

  std::vector<VcCheckOutcome> outcomes;
  for (auto& vc : vcs) {
    CheckConfig cfg = base;
    cfg.operation = vc.id;
    cfg.silent = true;
    VcCheckOutcome out;
    out.id = vc.id;
    out.report = run_operation(*typed, cfg);
    out.status = out.report.ok() ? VcStatus::Valid : VcStatus::Invalid;
    vc.status = out.status;
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

std::string vc_to_text(const VerificationCondition& vc, bool ascii) {
  PrintOptions opts;
  opts.ascii = ascii;
  return pretty_print(*vc.theorem, opts);
}

std::string vcs_to_json(const std::vector<VerificationCondition>& vcs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& vc : vcs) {
    nlohmann::json j;
    j["id"] = vc.id;
    j["category"] = vc_category_name(vc.category);
    j["question"] = vc_category_question(vc.category, vc.callee);
    j["formula"] = pretty_print(*vc.theorem->body_expr);
    j["theorem"] = pretty_print(*vc.theorem);
    j["goal_span"] = {{"begin", vc.goal_span.begin}, {"end", vc.goal_span.end}};
    nlohmann::json spans = nlohmann::json::array();
    for (const auto& s : vc.contributing_spans)
      spans.push_back({{"begin", s.begin}, {"end", s.end}});
    j["contributing_spans"] = std::move(spans);
    switch (vc.status) {
      case VcStatus::Unchecked: j["status"] = "unchecked"; break;
      case VcStatus::Valid: j["status"] = "valid"; break;
      case VcStatus::Invalid: j["status"] = "invalid"; break;
    }
    if (!vc.callee.empty()) j["callee"] = vc.callee;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace finicheck

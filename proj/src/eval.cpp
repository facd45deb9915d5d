#include "finicheck/eval.hpp"

#include <algorithm>

#include "finicheck/errors.hpp"
#include "finicheck/printer.hpp"

namespace finicheck {

const char* runtime_error_kind_name(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::ChooseFailure: return "choose failure";
    case RuntimeErrorKind::PreconditionViolation: return "precondition violation";
    case RuntimeErrorKind::PostconditionViolation: return "postcondition violation";
    case RuntimeErrorKind::InvariantViolation: return "invariant violation";
    case RuntimeErrorKind::MeasureNegative: return "negative termination measure";
    case RuntimeErrorKind::MeasureNotDecreased: return "termination measure not decreased";
    case RuntimeErrorKind::RangeViolation: return "range violation";
    case RuntimeErrorKind::AssertionViolation: return "assertion violation";
    case RuntimeErrorKind::Overflow: return "arithmetic overflow";
    case RuntimeErrorKind::Timeout: return "timeout";
    case RuntimeErrorKind::LimitExceeded: return "evaluation limit exceeded";
  }
  return "runtime error";
}

std::vector<std::pair<std::string, Value>> Frame::snapshot() const {
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& slot : slots_) {
    bool replaced = false;
    for (auto& entry : out) {
      if (entry.first == slot.name) {
        entry.second = slot.value;  // inner binding wins
        replaced = true;
        break;
      }
    }
    if (!replaced) out.emplace_back(slot.name, slot.value);
  }
  return out;
}

Value OutcomeStream::first() const {
  Value result;
  bool got = false;
  producer_([&](const Value& v) {
    result = v;
    got = true;
    return false;
  });
  if (!got)
    throw RuntimeException(RuntimeError{RuntimeErrorKind::ChooseFailure,
                                        Span{},
                                        "expression has no outcome",
                                        {}});
  return result;
}

std::vector<Value> OutcomeStream::collect() const {
  std::vector<Value> out;
  producer_([&](const Value& v) {
    out.push_back(v);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

long long checked_add(long long a, long long b, const char** err) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) *err = "integer addition overflow";
  return r;
}
long long checked_sub(long long a, long long b, const char** err) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) *err = "integer subtraction overflow";
  return r;
}
long long checked_mul(long long a, long long b, const char** err) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) *err = "integer multiplication overflow";
  return r;
}

size_t value_hash(const Value& v) {
  size_t h = static_cast<size_t>(v.kind()) * 0x9e3779b97f4a7c15ull;
  switch (v.kind()) {
    case Value::Kind::Int:
    case Value::Kind::Bool:
      h ^= std::hash<long long>()(v.as_int()) + 0x9e3779b9 + (h << 6);
      break;
    default:
      for (const auto& item : v.items())
        h ^= value_hash(item) + 0x9e3779b9 + (h << 6) + (h >> 2);
      break;
  }
  return h;
}

bool is_tree_formula_shape(const Expr& e) {
  switch (e.kind) {
    case ExprKind::BoolLit:
      return true;
    case ExprKind::Unary:
      return e.unary_op == UnaryOp::Not;
    case ExprKind::Binary:
      switch (e.binary_op) {
        case BinaryOp::And:
        case BinaryOp::Or:
        case BinaryOp::Implies:
        case BinaryOp::Iff:
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
        case BinaryOp::MemberOf:
          return true;
        default:
          return false;
      }
    case ExprKind::Forall:
    case ExprKind::Exists:
      return true;
    default:
      return false;
  }
}

// boolean variable references also appear as atomic evidence
bool records_formula(const TypedSpec& spec, const Expr& e) {
  if (is_tree_formula_shape(e)) return true;
  if (e.kind == ExprKind::VarRef) {
    DenPtr den = spec.den_of(e);
    return den && den->kind == TypeDen::Kind::Bool;
  }
  return false;
}

std::string format_call(const std::string& name,
                        const std::vector<Value>& args) {
  std::string text = name + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) text += ",";
    text += args[i].to_string();
  }
  return text + ")";
}

struct DepthGuard {
  int& depth;
  explicit DepthGuard(int& d) : depth(d) { ++depth; }
  ~DepthGuard() { --depth; }
};

struct SuppressGuard {
  int& counter;
  bool active;
  SuppressGuard(int& c, bool a) : counter(c), active(a) {
    if (active) ++counter;
  }
  ~SuppressGuard() {
    if (active) --counter;
  }
};

}  // namespace

bool Interp::MemoKey::operator==(const MemoKey& other) const {
  if (decl != other.decl || args.size() != other.args.size()) return false;
  for (size_t i = 0; i < args.size(); ++i)
    if (args[i] != other.args[i]) return false;
  return true;
}

size_t Interp::MemoKeyHash::operator()(const MemoKey& k) const {
  size_t h = std::hash<const void*>()(k.decl);
  for (const auto& a : k.args)
    h ^= value_hash(a) + 0x9e3779b9 + (h << 6) + (h >> 2);
  return h;
}

Interp::Interp(const TypedSpec& spec, EvalMode mode, Recorder* recorder,
               EvalLimits limits)
    : spec_(spec), mode_(mode), recorder_(recorder), limits_(limits) {
  if (limits_.timeout.count() > 0) {
    deadline_ = std::chrono::steady_clock::now() + limits_.timeout;
    has_deadline_ = true;
  }
  // memoization of operation applications is sound only when a single
  // outcome is computed and no recorder needs to observe inner events
  memo_enabled_ = mode_ == EvalMode::Det && recorder_ == nullptr;
}

void Interp::reset_deadline(std::chrono::milliseconds timeout) {
  if (timeout.count() > 0) {
    deadline_ = std::chrono::steady_clock::now() + timeout;
    has_deadline_ = true;
  } else {
    has_deadline_ = false;
  }
}

void Interp::tick(const Span& span) {
  if ((++steps_ & 0x1fff) != 0) return;
  if (has_deadline_ && std::chrono::steady_clock::now() > deadline_) {
    Frame empty;
    raise(RuntimeErrorKind::Timeout, span, "per-input timeout exceeded", empty);
  }
}

void Interp::raise(RuntimeErrorKind kind, Span span, std::string msg,
                   const Frame& frame, int invariant_index,
                   long long iteration) {
  RuntimeError err;
  err.kind = kind;
  err.span = span;
  err.message = std::move(msg);
  err.environment = frame.snapshot();
  err.invariant_index = invariant_index;
  err.iteration = iteration;
  throw RuntimeException(std::move(err));
}

const std::vector<Value>* Interp::cached_carrier(const DenPtr& den) {
  constexpr uint64_t kCacheLimit = 1u << 16;
  auto it = carrier_cache_.find(den.get());
  if (it != carrier_cache_.end()) return it->second.get();
  uint64_t n = carrier_size(*den);
  if (n > kCacheLimit) {
    carrier_cache_[den.get()] = nullptr;
    return nullptr;
  }
  auto values = std::make_shared<std::vector<Value>>();
  values->reserve(static_cast<size_t>(n));
  for (uint64_t i = 0; i < n; ++i)
    values->push_back(carrier_value_at(*den, i));
  auto shared = std::shared_ptr<const std::vector<Value>>(std::move(values));
  carrier_cache_[den.get()] = shared;
  return shared.get();
}

// ---------------------------------------------------------------------------
// deterministic evaluation

Value Interp::eval_det(const Expr& e, Frame& frame) {
  return eval_det_rec(e, frame);
}

Value Interp::eval_det_rec(const Expr& e, Frame& frame) {
  tick(e.span);
  // boolean if/let/letpar/choose appear as opaque atomic evidence in
  // evaluation trees: a node with a truth value but no recorded interior
  bool opaque = false;
  if (recorder_ && tree_suppress_ == 0) {
    switch (e.kind) {
      case ExprKind::IfElse:
      case ExprKind::Let:
      case ExprKind::LetPar:
      case ExprKind::Choose: {
        DenPtr den = spec_.den_of(e);
        opaque = den && den->kind == TypeDen::Kind::Bool;
        break;
      }
      default:
        break;
    }
  }
  const bool record = recorder_ && tree_suppress_ == 0 &&
                      (opaque || records_formula(spec_, e));
  if (record) recorder_->on_formula_begin(e, frame);
  SuppressGuard suppress(tree_suppress_, opaque);
  Value result;
  switch (e.kind) {
    case ExprKind::IntLit:
      result = Value::of_int(e.int_value);
      break;
    case ExprKind::BoolLit:
      result = Value::of_bool(e.bool_value);
      break;
    case ExprKind::VarRef: {
      if (const Frame::Slot* slot = frame.find(e.name)) {
        result = slot->value;
        break;
      }
      auto it = spec_.consts.find(e.name);
      if (it != spec_.consts.end()) {
        result = Value::of_int(it->second);
        break;
      }
      raise(RuntimeErrorKind::RangeViolation, e.span,
            "unbound variable '" + e.name + "'", frame);
    }
    case ExprKind::Unary: {
      Value v = eval_det_rec(*e.children[0], frame);
      if (e.unary_op == UnaryOp::Not) {
        result = Value::of_bool(!v.as_bool());
      } else {
        const char* err = nullptr;
        long long r = checked_sub(0, v.as_int(), &err);
        if (err) raise(RuntimeErrorKind::Overflow, e.span, err, frame);
        result = Value::of_int(r);
      }
      break;
    }
    case ExprKind::Binary: {
      switch (e.binary_op) {
        case BinaryOp::And: {
          Value l = eval_det_rec(*e.children[0], frame);
          result = !l.as_bool() ? Value::of_bool(false)
                                : eval_det_rec(*e.children[1], frame);
          break;
        }
        case BinaryOp::Or: {
          Value l = eval_det_rec(*e.children[0], frame);
          result = l.as_bool() ? Value::of_bool(true)
                               : eval_det_rec(*e.children[1], frame);
          break;
        }
        case BinaryOp::Implies: {
          Value l = eval_det_rec(*e.children[0], frame);
          result = !l.as_bool() ? Value::of_bool(true)
                                : eval_det_rec(*e.children[1], frame);
          break;
        }
        case BinaryOp::Iff: {
          Value l = eval_det_rec(*e.children[0], frame);
          Value r = eval_det_rec(*e.children[1], frame);
          result = Value::of_bool(l.as_bool() == r.as_bool());
          break;
        }
        default: {
          Value l = eval_det_rec(*e.children[0], frame);
          Value r = eval_det_rec(*e.children[1], frame);
          const char* err = nullptr;
          switch (e.binary_op) {
            case BinaryOp::Add:
              result = Value::of_int(checked_add(l.as_int(), r.as_int(), &err));
              break;
            case BinaryOp::Sub:
              result = Value::of_int(checked_sub(l.as_int(), r.as_int(), &err));
              break;
            case BinaryOp::Mul:
              result = Value::of_int(checked_mul(l.as_int(), r.as_int(), &err));
              break;
            case BinaryOp::Quot:
            case BinaryOp::Rem: {
              if (r.as_int() == 0)
                raise(RuntimeErrorKind::RangeViolation, e.span,
                      e.binary_op == BinaryOp::Quot ? "division by zero"
                                                    : "remainder by zero",
                      frame);
              // quotient and remainder truncate toward zero
              result = Value::of_int(e.binary_op == BinaryOp::Quot
                                         ? l.as_int() / r.as_int()
                                         : l.as_int() % r.as_int());
              break;
            }
            case BinaryOp::Eq:
              result = Value::of_bool(l == r);
              break;
            case BinaryOp::Ne:
              result = Value::of_bool(l != r);
              break;
            case BinaryOp::Lt:
              result = Value::of_bool(l.as_int() < r.as_int());
              break;
            case BinaryOp::Le:
              result = Value::of_bool(l.as_int() <= r.as_int());
              break;
            case BinaryOp::Gt:
              result = Value::of_bool(l.as_int() > r.as_int());
              break;
            case BinaryOp::Ge:
              result = Value::of_bool(l.as_int() >= r.as_int());
              break;
            case BinaryOp::MemberOf:
              result = Value::of_bool(r.contains(l));
              break;
            default:
              break;
          }
          if (err) raise(RuntimeErrorKind::Overflow, e.span, err, frame);
          break;
        }
      }
      break;
    }
    case ExprKind::Forall:
    case ExprKind::Exists: {
      const bool is_forall = e.kind == ExprKind::Forall;
      const size_t nb = e.binders.size();
      std::vector<DenPtr> dens(nb);
      std::vector<const std::vector<Value>*> carriers(nb);
      std::vector<uint64_t> sizes(nb);
      for (size_t j = 0; j < nb; ++j) {
        dens[j] = spec_.den_of_binder(e.binders[j]);
        carriers[j] = cached_carrier(dens[j]);
        sizes[j] = carrier_size(*dens[j]);
      }
      size_t base = frame.mark();
      for (size_t j = 0; j < nb; ++j)
        frame.push(e.binders[j].name,
                   carriers[j] ? (*carriers[j])[0] : carrier_value_at(*dens[j], 0),
                   dens[j]);
      std::vector<uint64_t> idx(nb, 0);
      bool verdict = is_forall;
      while (true) {
        tick(e.span);
        bool b = eval_det_rec(*e.children[0], frame).as_bool();
        if (b != is_forall) {  // first counterexample / first witness
          verdict = !is_forall;
          break;
        }
        size_t j = 0;
        while (j < nb) {
          if (++idx[j] < sizes[j]) {
            frame.slots()[base + j].value =
                carriers[j] ? (*carriers[j])[idx[j]]
                            : carrier_value_at(*dens[j], idx[j]);
            break;
          }
          idx[j] = 0;
          frame.slots()[base + j].value =
              carriers[j] ? (*carriers[j])[0] : carrier_value_at(*dens[j], 0);
          ++j;
        }
        if (j == nb) break;
      }
      frame.reset(base);
      result = Value::of_bool(verdict);
      break;
    }
    case ExprKind::Choose: {
      DenPtr den = spec_.den_of_binder(e.binders[0]);
      const std::vector<Value>* carrier = cached_carrier(den);
      uint64_t n = carrier_size(*den);
      size_t base = frame.mark();
      frame.push(e.binders[0].name, Value(), den);
      bool found = false;
      for (uint64_t i = 0; i < n; ++i) {
        tick(e.span);
        frame.slots()[base].value =
            carrier ? (*carrier)[i] : carrier_value_at(*den, i);
        if (eval_det_rec(*e.children[0], frame).as_bool()) {
          result = frame.slots()[base].value;
          found = true;
          break;
        }
      }
      frame.reset(base);
      if (!found)
        raise(RuntimeErrorKind::ChooseFailure, e.span,
              "no value of the type satisfies the choose condition", frame);
      break;
    }
    case ExprKind::Let: {
      size_t base = frame.mark();
      for (const auto& b : e.bindings)
        frame.push(b.name, eval_det_rec(*b.value, frame));
      result = eval_det_rec(*e.children[0], frame);
      frame.reset(base);
      break;
    }
    case ExprKind::LetPar: {
      std::vector<Value> values;
      values.reserve(e.bindings.size());
      for (const auto& b : e.bindings)
        values.push_back(eval_det_rec(*b.value, frame));
      size_t base = frame.mark();
      for (size_t i = 0; i < e.bindings.size(); ++i)
        frame.push(e.bindings[i].name, std::move(values[i]));
      result = eval_det_rec(*e.children[0], frame);
      frame.reset(base);
      break;
    }
    case ExprKind::IfElse: {
      Value c = eval_det_rec(*e.children[0], frame);
      result = eval_det_rec(*e.children[c.as_bool() ? 1 : 2], frame);
      break;
    }
    case ExprKind::Call: {
      std::vector<Value> args;
      args.reserve(e.children.size());
      for (const auto& a : e.children) args.push_back(eval_det_rec(*a, frame));
      const OpInfo* op = spec_.find_operation(e.name);
      if (!op)
        raise(RuntimeErrorKind::RangeViolation, e.span,
              "unknown operation '" + e.name + "'", frame);
      result = call_det_impl(*op, args, e.span);
      break;
    }
    case ExprKind::ArrayIndex: {
      Value base = eval_det_rec(*e.children[0], frame);
      Value idx = eval_det_rec(*e.children[1], frame);
      long long i = idx.as_int();
      if (i < 0 || i >= static_cast<long long>(base.size()))
        raise(RuntimeErrorKind::RangeViolation, e.span,
              "array index " + std::to_string(i) + " out of range [0," +
                  std::to_string(base.size()) + ")",
              frame);
      result = base.items()[static_cast<size_t>(i)];
      break;
    }
    case ExprKind::ArrayUpdate: {
      Value base = eval_det_rec(*e.children[0], frame);
      Value idx = eval_det_rec(*e.children[1], frame);
      Value val = eval_det_rec(*e.children[2], frame);
      long long i = idx.as_int();
      if (i < 0 || i >= static_cast<long long>(base.size()))
        raise(RuntimeErrorKind::RangeViolation, e.span,
              "array index " + std::to_string(i) + " out of range [0," +
                  std::to_string(base.size()) + ")",
              frame);
      // a pure array update constructs a new value; ranges are enforced
      // only at variable bindings and assignments
      result = base.with_item(static_cast<size_t>(i), val);
      break;
    }
    case ExprKind::TupleProj: {
      Value base = eval_det_rec(*e.children[0], frame);
      result = base.items()[static_cast<size_t>(e.proj_index - 1)];
      break;
    }
    case ExprKind::TupleLit: {
      std::vector<Value> items;
      items.reserve(e.children.size());
      for (const auto& c : e.children) items.push_back(eval_det_rec(*c, frame));
      result = Value::tuple(std::move(items));
      break;
    }
    case ExprKind::SetLit: {
      std::vector<Value> items;
      items.reserve(e.children.size());
      for (const auto& c : e.children) items.push_back(eval_det_rec(*c, frame));
      result = Value::set(std::move(items));
      break;
    }
  }
  if (record) recorder_->on_formula_end(e, result.as_bool());
  return result;
}

Frame Interp::param_frame(const OpInfo& op, const std::vector<Value>& args) {
  Frame frame;
  for (size_t i = 0; i < args.size(); ++i)
    frame.push(op.decl->params[i].name, args[i], op.param_dens[i]);
  return frame;
}

bool Interp::requires_holds(const OpInfo& op, const std::vector<Value>& args) {
  if (op.decl->requires_.empty()) return true;
  Frame frame = param_frame(op, args);
  for (const auto& r : op.decl->requires_)
    if (!eval_det_rec(*r, frame).as_bool()) return false;
  return true;
}

Value Interp::call_det(const std::string& name, const std::vector<Value>& args,
                       Span call_span) {
  const OpInfo* op = spec_.find_operation(name);
  if (!op) {
    Frame empty;
    raise(RuntimeErrorKind::RangeViolation, call_span,
          "unknown operation '" + name + "'", empty);
  }
  return call_det_impl(*op, args, call_span);
}

Value Interp::call_det_impl(const OpInfo& op, const std::vector<Value>& args,
                            Span call_span) {
  if (depth_ >= limits_.max_call_depth) {
    Frame empty;
    raise(RuntimeErrorKind::LimitExceeded, call_span,
          "call depth limit exceeded", empty);
  }
  DepthGuard guard(depth_);
  const Decl& d = *op.decl;

  if (memo_enabled_) {
    auto it = memo_.find(MemoKey{&d, args});
    if (it != memo_.end()) return it->second;
  }

  Frame frame = param_frame(op, args);
  for (size_t i = 0; i < args.size(); ++i) {
    if (!value_fits(*op.param_dens[i], args[i]))
      raise(RuntimeErrorKind::RangeViolation, call_span,
            "argument " + std::to_string(i + 1) + " = " + args[i].to_string() +
                " outside parameter type " + den_to_string(*op.param_dens[i]),
            frame);
  }
  for (const auto& r : d.requires_) {
    if (!eval_det_rec(*r, frame).as_bool())
      raise(RuntimeErrorKind::PreconditionViolation, call_span,
            "precondition of '" + d.name + "' violated", frame);
  }

  const bool record_pred =
      recorder_ && d.kind == DeclKind::Pred && tree_suppress_ == 0;
  if (recorder_) {
    recorder_->on_call_begin(format_call(d.name, args));
    if (record_pred) recorder_->on_pred_call_begin(d.name, args, frame);
  }

  Value result;
  if (d.kind == DeclKind::Proc) {
    for (const auto& item : d.body_cmd->commands) exec_det_rec(*item, frame);
    result = eval_det_rec(*d.return_expr, frame);
    if (!value_fits(*op.result_den, result))
      raise(RuntimeErrorKind::RangeViolation, d.return_expr->span,
            "result " + result.to_string() + " outside result type " +
                den_to_string(*op.result_den),
            frame);
    size_t base = frame.mark();
    frame.push("result", result, op.result_den);
    for (const auto& en : d.ensures_) {
      if (!eval_det_rec(*en, frame).as_bool())
        raise(RuntimeErrorKind::PostconditionViolation, en->span,
              "postcondition of '" + d.name + "' violated", frame);
    }
    frame.reset(base);
  } else {
    result = eval_det_rec(*d.body_expr, frame);
    if (!value_fits(*op.result_den, result))
      raise(RuntimeErrorKind::RangeViolation, d.body_expr->span,
            "result " + result.to_string() + " outside result type " +
                den_to_string(*op.result_den),
            frame);
  }

  if (recorder_) {
    if (record_pred) recorder_->on_pred_call_end(result.as_bool());
    recorder_->on_call_end(result);
  }
  if (memo_enabled_) memo_[MemoKey{&d, args}] = result;
  return result;
}

// ---------------------------------------------------------------------------
// deterministic command execution

void Interp::exec_det(const Command& c, Frame& frame) {
  exec_det_rec(c, frame);
}

/// Performs "target[indices] := rhs" with all bounds and range checks and
/// returns the target's previous value (for nondeterministic backtracking).
/// Index expressions are evaluated before the slot is located, because
/// their evaluation may reallocate the frame's slot storage.
Value Interp::store_assign(const Command& c, Frame& frame, Value rhs) {
  std::vector<long long> path;
  path.reserve(c.indices.size());
  for (const auto& idx_expr : c.indices)
    path.push_back(eval_det_rec(*idx_expr, frame).as_int());

  Frame::Slot* slot = frame.find(c.target);
  Value cur = slot->value;
  DenPtr den = slot->den;
  std::vector<Value> levels;
  for (size_t n = 0; n < path.size(); ++n) {
    long long i = path[n];
    if (i < 0 || i >= static_cast<long long>(cur.size()))
      raise(RuntimeErrorKind::RangeViolation, c.indices[n]->span,
            "array index " + std::to_string(i) + " out of range [0," +
                std::to_string(cur.size()) + ")",
            frame);
    levels.push_back(cur);
    cur = cur.items()[static_cast<size_t>(i)];
    if (den) den = den->elem;
  }
  if (den && !value_fits(*den, rhs))
    raise(RuntimeErrorKind::RangeViolation, c.value->span,
          "value " + rhs.to_string() + " outside type " + den_to_string(*den),
          frame);
  Value updated = std::move(rhs);
  for (size_t k = path.size(); k-- > 0;)
    updated = levels[k].with_item(static_cast<size_t>(path[k]), updated);
  slot = frame.find(c.target);
  Value previous = std::move(slot->value);
  slot->value = std::move(updated);
  return previous;
}

void Interp::exec_det_rec(const Command& c, Frame& frame) {
  tick(c.span);
  switch (c.kind) {
    case CmdKind::VarDecl: {
      Value v = eval_det_rec(*c.init, frame);
      DenPtr den = spec_.var_dens.at(&c);
      if (!value_fits(*den, v))
        raise(RuntimeErrorKind::RangeViolation, c.init->span,
              "value " + v.to_string() + " outside type " + den_to_string(*den),
              frame);
      frame.push(c.var_name, std::move(v), den);
      if (recorder_) recorder_->on_assign(c.var_name, frame, c.span);
      return;
    }
    case CmdKind::Assign: {
      Value rhs = eval_det_rec(*c.value, frame);
      store_assign(c, frame, std::move(rhs));
      if (recorder_) recorder_->on_assign(c.target, frame, c.span);
      return;
    }
    case CmdKind::If: {
      size_t base = frame.mark();
      if (eval_det_rec(*c.cond, frame).as_bool()) {
        exec_det_rec(*c.then_cmd, frame);
      } else if (c.else_cmd) {
        exec_det_rec(*c.else_cmd, frame);
      }
      frame.reset(base);
      return;
    }
    case CmdKind::While:
      run_while_det(c, frame, c.cond, c.body, nullptr);
      return;
    case CmdKind::For: {
      size_t base = frame.mark();
      exec_det_rec(*c.for_init, frame);
      run_while_det(c, frame, c.cond, c.body, c.for_update);
      frame.reset(base);
      return;
    }
    case CmdKind::Seq: {
      size_t base = frame.mark();
      for (const auto& item : c.commands) exec_det_rec(*item, frame);
      frame.reset(base);
      return;
    }
    case CmdKind::Assert:
      if (!eval_det_rec(*c.formula, frame).as_bool())
        raise(RuntimeErrorKind::AssertionViolation, c.span, "assertion violated",
              frame);
      return;
    case CmdKind::Call: {
      std::vector<Value> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) args.push_back(eval_det_rec(*a, frame));
      call_det(c.callee, args, c.span);
      return;
    }
    case CmdKind::Return: {
      Frame empty;
      raise(RuntimeErrorKind::LimitExceeded, c.span,
            "unexpected return command", empty);
    }
  }
}

void Interp::run_while_det(const Command& c, Frame& frame, const ExprPtr& cond,
                           const CommandPtr& body, const CommandPtr& update) {
  const LoopInfo& li = spec_.loops.at(&c);
  size_t entry = frame.mark();
  // snapshot the loop-modified variables; visible in invariant expressions
  for (const auto& name : li.modified) {
    const Frame::Slot* slot = frame.find(name);
    frame.push("old_" + name, slot->value);
  }
  long long iteration = 0;
  while (true) {
    // (1) every invariant must hold at the iteration boundary
    for (size_t k = 0; k < c.invariants.size(); ++k) {
      if (!eval_det_rec(*c.invariants[k], frame).as_bool())
        raise(RuntimeErrorKind::InvariantViolation, c.invariants[k]->span,
              "loop invariant " + std::to_string(k + 1) + " violated", frame,
              static_cast<int>(k), iteration);
    }
    // (2) the termination measure must be non-negative
    long long measure = 0;
    if (c.decreases) {
      measure = eval_det_rec(*c.decreases, frame).as_int();
      if (measure < 0)
        raise(RuntimeErrorKind::MeasureNegative, c.decreases->span,
              "termination measure is negative (" + std::to_string(measure) +
                  ")",
              frame, -1, iteration);
    }
    // (3) exit when the condition is false; invariants are not re-checked
    if (!eval_det_rec(*cond, frame).as_bool()) break;
    // (4) run the body
    size_t base = frame.mark();
    exec_det_rec(*body, frame);
    frame.reset(base);
    if (update) exec_det_rec(*update, frame);
    // (5) the measure must have strictly decreased
    if (c.decreases) {
      long long after = eval_det_rec(*c.decreases, frame).as_int();
      if (after >= measure)
        raise(RuntimeErrorKind::MeasureNotDecreased, c.decreases->span,
              "termination measure did not decrease (" +
                  std::to_string(measure) + " to " + std::to_string(after) +
                  ")",
              frame, -1, iteration);
    }
    ++iteration;
  }
  frame.reset(entry);
}

// ---------------------------------------------------------------------------
// nondeterministic evaluation (all outcomes, lazily)

bool Interp::eval_stream(const Expr& e, Frame& frame,
                         const std::function<bool(const Value&)>& fn) {
  if (mode_ == EvalMode::Det) return fn(eval_det_rec(e, frame));
  return eval_nd(e, frame, fn);
}

OutcomeStream Interp::outcomes(const ExprPtr& e, const Frame& frame) {
  Frame copy = frame;
  return OutcomeStream([this, e, copy](
                           const std::function<bool(const Value&)>& fn) mutable {
    Frame local = copy;
    return eval_stream(*e, local, fn);
  });
}

bool Interp::eval_choose_stream(const Binder& binder, const Expr& cond,
                                Frame& frame,
                                const std::function<bool(const Value&)>& fn) {
  DenPtr den = spec_.den_of_binder(binder);
  uint64_t n = carrier_size(*den);
  const std::vector<Value>* carrier = cached_carrier(den);
  Frame local = frame;  // candidate bindings stay invisible to the caller
  size_t base = local.mark();
  local.push(binder.name, Value(), den);
  bool any = false;
  for (uint64_t i = 0; i < n; ++i) {
    tick(cond.span);
    local.slots()[base].value =
        carrier ? (*carrier)[i] : carrier_value_at(*den, i);
    // the choose condition itself is judged deterministically
    if (eval_det_rec(cond, local).as_bool()) {
      any = true;
      if (!fn(local.slots()[base].value)) return false;
      if (mode_ == EvalMode::Det) return true;
    }
  }
  if (!any)
    raise(RuntimeErrorKind::ChooseFailure, cond.span,
          "no value of the type satisfies the choose condition", frame);
  return true;
}

bool Interp::eval_nd(const Expr& e, Frame& frame,
                     const std::function<bool(const Value&)>& k) {
  tick(e.span);
  switch (e.kind) {
    case ExprKind::IntLit:
      return k(Value::of_int(e.int_value));
    case ExprKind::BoolLit:
      return k(Value::of_bool(e.bool_value));
    case ExprKind::VarRef: {
      // yield a copy: the continuation may grow the frame vector, which
      // would invalidate a reference into slot storage
      if (const Frame::Slot* slot = frame.find(e.name))
        return k(Value(slot->value));
      auto it = spec_.consts.find(e.name);
      if (it != spec_.consts.end()) return k(Value::of_int(it->second));
      raise(RuntimeErrorKind::RangeViolation, e.span,
            "unbound variable '" + e.name + "'", frame);
    }
    case ExprKind::Unary:
      return eval_nd(*e.children[0], frame, [&](const Value& v) {
        if (e.unary_op == UnaryOp::Not) return k(Value::of_bool(!v.as_bool()));
        const char* err = nullptr;
        long long r = checked_sub(0, v.as_int(), &err);
        if (err) raise(RuntimeErrorKind::Overflow, e.span, err, frame);
        return k(Value::of_int(r));
      });
    case ExprKind::Binary: {
      switch (e.binary_op) {
        case BinaryOp::And:
          return eval_nd(*e.children[0], frame, [&](const Value& l) {
            if (!l.as_bool()) return k(Value::of_bool(false));
            return eval_nd(*e.children[1], frame, k);
          });
        case BinaryOp::Or:
          return eval_nd(*e.children[0], frame, [&](const Value& l) {
            if (l.as_bool()) return k(Value::of_bool(true));
            return eval_nd(*e.children[1], frame, k);
          });
        case BinaryOp::Implies:
          return eval_nd(*e.children[0], frame, [&](const Value& l) {
            if (!l.as_bool()) return k(Value::of_bool(true));
            return eval_nd(*e.children[1], frame, k);
          });
        default:
          return eval_nd(*e.children[0], frame, [&](const Value& l) {
            return eval_nd(*e.children[1], frame, [&](const Value& r) {
              const char* err = nullptr;
              Value out;
              switch (e.binary_op) {
                case BinaryOp::Iff:
                  out = Value::of_bool(l.as_bool() == r.as_bool());
                  break;
                case BinaryOp::Add:
                  out = Value::of_int(checked_add(l.as_int(), r.as_int(), &err));
                  break;
                case BinaryOp::Sub:
                  out = Value::of_int(checked_sub(l.as_int(), r.as_int(), &err));
                  break;
                case BinaryOp::Mul:
                  out = Value::of_int(checked_mul(l.as_int(), r.as_int(), &err));
                  break;
                case BinaryOp::Quot:
                case BinaryOp::Rem:
                  if (r.as_int() == 0)
                    raise(RuntimeErrorKind::RangeViolation, e.span,
                          "division or remainder by zero", frame);
                  out = Value::of_int(e.binary_op == BinaryOp::Quot
                                          ? l.as_int() / r.as_int()
                                          : l.as_int() % r.as_int());
                  break;
                case BinaryOp::Eq:
                  out = Value::of_bool(l == r);
                  break;
                case BinaryOp::Ne:
                  out = Value::of_bool(l != r);
                  break;
                case BinaryOp::Lt:
                  out = Value::of_bool(l.as_int() < r.as_int());
                  break;
                case BinaryOp::Le:
                  out = Value::of_bool(l.as_int() <= r.as_int());
                  break;
                case BinaryOp::Gt:
                  out = Value::of_bool(l.as_int() > r.as_int());
                  break;
                case BinaryOp::Ge:
                  out = Value::of_bool(l.as_int() >= r.as_int());
                  break;
                case BinaryOp::MemberOf:
                  out = Value::of_bool(r.contains(l));
                  break;
                default:
                  break;
              }
              if (err) raise(RuntimeErrorKind::Overflow, e.span, err, frame);
              return k(out);
            });
          });
      }
    }
    case ExprKind::Forall:
    case ExprKind::Exists: {
      const bool is_forall = e.kind == ExprKind::Forall;
      const size_t nb = e.binders.size();
      std::vector<DenPtr> dens(nb);
      std::vector<uint64_t> sizes(nb);
      uint64_t total = 1;
      for (size_t j = 0; j < nb; ++j) {
        dens[j] = spec_.den_of_binder(e.binders[j]);
        sizes[j] = carrier_size(*dens[j]);
        total *= sizes[j];
      }
      // instances are evaluated in a scratch frame so that outcome
      // continuations never observe the quantified bindings
      auto scratch = std::make_shared<Frame>(frame);
      size_t base = scratch->mark();
      for (size_t j = 0; j < nb; ++j)
        scratch->push(e.binders[j].name, Value(), dens[j]);
      auto bind_instance = [&](uint64_t i) {
        for (size_t j = 0; j < nb; ++j) {
          scratch->slots()[base + j].value =
              carrier_value_at(*dens[j], i % sizes[j]);
          i /= sizes[j];
        }
      };
      // single-outcome instances are handled iteratively; only genuinely
      // multi-valued instances branch recursively
      std::function<bool(uint64_t)> instance = [&](uint64_t i) -> bool {
        for (; i < total; ++i) {
          tick(e.span);
          bind_instance(i);
          Value first;
          int outcomes = 0;
          eval_nd(*e.children[0], *scratch, [&](const Value& b) {
            if (outcomes++ == 0) {
              first = b;
              return true;
            }
            return false;  // a second outcome exists; re-branch below
          });
          if (outcomes > 1) {
            if (depth_ >= limits_.max_call_depth)
              raise(RuntimeErrorKind::LimitExceeded, e.span,
                    "quantifier branching limit exceeded", frame);
            DepthGuard guard(depth_);
            bind_instance(i);
            uint64_t next = i + 1;
            return eval_nd(*e.children[0], *scratch, [&](const Value& b) {
              if (b.as_bool() == is_forall) return instance(next);
              return k(Value::of_bool(!is_forall));
            });
          }
          if (first.as_bool() != is_forall)
            return k(Value::of_bool(!is_forall));
        }
        return k(Value::of_bool(is_forall));
      };
      return instance(0);
    }
    case ExprKind::Choose:
      return eval_choose_stream(e.binders[0], *e.children[0], frame, k);
    case ExprKind::Let: {
      auto scratch = std::make_shared<Frame>(frame);
      std::function<bool(size_t)> bind = [&](size_t i) -> bool {
        if (i == e.bindings.size()) return eval_nd(*e.children[0], *scratch, k);
        return eval_nd(*e.bindings[i].value, *scratch, [&](const Value& v) {
          size_t m = scratch->mark();
          scratch->push(e.bindings[i].name, v);
          bool r = bind(i + 1);
          scratch->reset(m);
          return r;
        });
      };
      return bind(0);
    }
    case ExprKind::LetPar: {
      auto values = std::make_shared<std::vector<Value>>(e.bindings.size());
      std::function<bool(size_t)> bind = [&](size_t i) -> bool {
        if (i == e.bindings.size()) {
          Frame scratch = frame;
          for (size_t j = 0; j < e.bindings.size(); ++j)
            scratch.push(e.bindings[j].name, (*values)[j]);
          return eval_nd(*e.children[0], scratch, k);
        }
        // parallel bindings: every value is evaluated in the outer frame
        return eval_nd(*e.bindings[i].value, frame, [&](const Value& v) {
          (*values)[i] = v;
          return bind(i + 1);
        });
      };
      return bind(0);
    }
    case ExprKind::IfElse:
      return eval_nd(*e.children[0], frame, [&](const Value& c) {
        return eval_nd(*e.children[c.as_bool() ? 1 : 2], frame, k);
      });
    case ExprKind::Call: {
      auto args = std::make_shared<std::vector<Value>>(e.children.size());
      std::function<bool(size_t)> collect = [&](size_t i) -> bool {
        if (i == e.children.size()) {
          const OpInfo* op = spec_.find_operation(e.name);
          if (!op)
            raise(RuntimeErrorKind::RangeViolation, e.span,
                  "unknown operation '" + e.name + "'", frame);
          return call_nd(*op, *args, k, e.span);
        }
        return eval_nd(*e.children[i], frame, [&](const Value& v) {
          (*args)[i] = v;
          return collect(i + 1);
        });
      };
      return collect(0);
    }
    case ExprKind::ArrayIndex:
      return eval_nd(*e.children[0], frame, [&](const Value& base) {
        return eval_nd(*e.children[1], frame, [&](const Value& idx) {
          long long i = idx.as_int();
          if (i < 0 || i >= static_cast<long long>(base.size()))
            raise(RuntimeErrorKind::RangeViolation, e.span,
                  "array index " + std::to_string(i) + " out of range [0," +
                      std::to_string(base.size()) + ")",
                  frame);
          return k(Value(base.items()[static_cast<size_t>(i)]));
        });
      });
    case ExprKind::ArrayUpdate:
      return eval_nd(*e.children[0], frame, [&](const Value& base) {
        return eval_nd(*e.children[1], frame, [&](const Value& idx) {
          return eval_nd(*e.children[2], frame, [&](const Value& val) {
            long long i = idx.as_int();
            if (i < 0 || i >= static_cast<long long>(base.size()))
              raise(RuntimeErrorKind::RangeViolation, e.span,
                    "array index " + std::to_string(i) + " out of range [0," +
                        std::to_string(base.size()) + ")",
                    frame);
            return k(base.with_item(static_cast<size_t>(i), val));
          });
        });
      });
    case ExprKind::TupleProj:
      return eval_nd(*e.children[0], frame, [&](const Value& base) {
        return k(Value(base.items()[static_cast<size_t>(e.proj_index - 1)]));
      });
    case ExprKind::TupleLit:
    case ExprKind::SetLit: {
      auto items = std::make_shared<std::vector<Value>>(e.children.size());
      std::function<bool(size_t)> collect = [&](size_t i) -> bool {
        if (i == e.children.size()) {
          return k(e.kind == ExprKind::TupleLit ? Value::tuple(*items)
                                                : Value::set(*items));
        }
        return eval_nd(*e.children[i], frame, [&](const Value& v) {
          (*items)[i] = v;
          return collect(i + 1);
        });
      };
      return collect(0);
    }
  }
  return true;
}

bool Interp::call_stream(const std::string& name,
                         const std::vector<Value>& args,
                         const std::function<bool(const Value&)>& fn,
                         Span call_span) {
  const OpInfo* op = spec_.find_operation(name);
  if (!op) {
    Frame empty;
    raise(RuntimeErrorKind::RangeViolation, call_span,
          "unknown operation '" + name + "'", empty);
  }
  if (mode_ == EvalMode::Det) return fn(call_det_impl(*op, args, call_span));
  return call_nd(*op, args, fn, call_span);
}

bool Interp::call_nd(const OpInfo& op, const std::vector<Value>& args,
                     const std::function<bool(const Value&)>& k,
                     Span call_span) {
  if (depth_ >= limits_.max_call_depth) {
    Frame empty;
    raise(RuntimeErrorKind::LimitExceeded, call_span,
          "call depth limit exceeded", empty);
  }
  DepthGuard guard(depth_);
  const Decl& d = *op.decl;
  Frame frame = param_frame(op, args);
  for (size_t i = 0; i < args.size(); ++i) {
    if (!value_fits(*op.param_dens[i], args[i]))
      raise(RuntimeErrorKind::RangeViolation, call_span,
            "argument " + std::to_string(i + 1) + " = " + args[i].to_string() +
                " outside parameter type " + den_to_string(*op.param_dens[i]),
            frame);
  }
  // admissibility is judged deterministically
  for (const auto& r : d.requires_) {
    if (!eval_det_rec(*r, frame).as_bool())
      raise(RuntimeErrorKind::PreconditionViolation, call_span,
            "precondition of '" + d.name + "' violated", frame);
  }

  auto yield_checked = [&](const Value& result, Frame& env) -> bool {
    if (!value_fits(*op.result_den, result))
      raise(RuntimeErrorKind::RangeViolation, d.span,
            "result " + result.to_string() + " outside result type " +
                den_to_string(*op.result_den),
            env);
    return k(result);
  };

  if (d.kind == DeclKind::Proc) {
    // every outcome path must satisfy the postconditions
    auto body = std::make_shared<Frame>(std::move(frame));
    std::function<bool(size_t)> run = [&](size_t i) -> bool {
      if (i < d.body_cmd->commands.size()) {
        return exec_nd(*d.body_cmd->commands[i], *body,
                       [&]() { return run(i + 1); });
      }
      return eval_nd(*d.return_expr, *body, [&](const Value& result_ref) {
        Value result = result_ref;  // detach before the frame grows
        size_t m = body->mark();
        body->push("result", result, op.result_den);
        for (const auto& en : d.ensures_) {
          if (!eval_det_rec(*en, *body).as_bool())
            raise(RuntimeErrorKind::PostconditionViolation, en->span,
                  "postcondition of '" + d.name + "' violated", *body);
        }
        body->reset(m);
        return yield_checked(result, *body);
      });
    };
    return run(0);
  }
  return eval_nd(*d.body_expr, frame,
                 [&](const Value& v) { return yield_checked(v, frame); });
}

// ---------------------------------------------------------------------------
// nondeterministic command execution

namespace {

/// Temporarily removes the slots above a mark while a continuation runs, so
/// scope-local bindings stay invisible to the code after the scope.
class ScopeTrim {
public:
  ScopeTrim(Frame& frame, size_t mark) : frame_(frame), mark_(mark) {
    auto& slots = frame_.slots();
    saved_.assign(std::make_move_iterator(slots.begin() + mark),
                  std::make_move_iterator(slots.end()));
    slots.resize(mark);
  }
  ~ScopeTrim() {
    auto& slots = frame_.slots();
    for (auto& s : saved_) slots.push_back(std::move(s));
  }

private:
  Frame& frame_;
  size_t mark_;
  std::vector<Frame::Slot> saved_;
};

}  // namespace

bool Interp::exec_stream(const Command& c, Frame& frame,
                         const std::function<bool()>& k) {
  if (mode_ == EvalMode::Det) {
    exec_det_rec(c, frame);
    return k();
  }
  return exec_nd(c, frame, k);
}

bool Interp::exec_nd(const Command& c, Frame& frame,
                     const std::function<bool()>& k) {
  tick(c.span);
  switch (c.kind) {
    case CmdKind::VarDecl:
      return eval_nd(*c.init, frame, [&](const Value& v) {
        DenPtr den = spec_.var_dens.at(&c);
        if (!value_fits(*den, v))
          raise(RuntimeErrorKind::RangeViolation, c.init->span,
                "value " + v.to_string() + " outside type " +
                    den_to_string(*den),
                frame);
        size_t m = frame.mark();
        frame.push(c.var_name, v, den);
        bool r = k();
        frame.reset(m);
        return r;
      });
    case CmdKind::Assign:
      return eval_nd(*c.value, frame, [&](const Value& rhs) {
        Value saved = store_assign(c, frame, Value(rhs));
        bool r = k();
        frame.find(c.target)->value = std::move(saved);
        return r;
      });
    case CmdKind::If:
      return eval_nd(*c.cond, frame, [&](const Value& v) {
        if (v.as_bool()) {
          size_t m = frame.mark();
          return exec_nd(*c.then_cmd, frame, [&]() {
            ScopeTrim trim(frame, m);
            return k();
          });
        }
        if (c.else_cmd) {
          size_t m = frame.mark();
          return exec_nd(*c.else_cmd, frame, [&]() {
            ScopeTrim trim(frame, m);
            return k();
          });
        }
        return k();
      });
    case CmdKind::While:
      return run_while_nd(c, frame, c.cond, c.body, nullptr, k);
    case CmdKind::For: {
      size_t m = frame.mark();
      return exec_nd(*c.for_init, frame, [&]() {
        return run_while_nd(c, frame, c.cond, c.body, c.for_update, [&]() {
          ScopeTrim trim(frame, m);
          return k();
        });
      });
    }
    case CmdKind::Seq: {
      size_t m = frame.mark();
      std::function<bool(size_t)> run = [&](size_t i) -> bool {
        if (i == c.commands.size()) {
          ScopeTrim trim(frame, m);
          return k();
        }
        return exec_nd(*c.commands[i], frame, [&]() { return run(i + 1); });
      };
      return run(0);
    }
    case CmdKind::Assert:
      return eval_nd(*c.formula, frame, [&](const Value& v) {
        if (!v.as_bool())
          raise(RuntimeErrorKind::AssertionViolation, c.span,
                "assertion violated", frame);
        return k();
      });
    case CmdKind::Call: {
      auto args = std::make_shared<std::vector<Value>>(c.args.size());
      std::function<bool(size_t)> collect = [&](size_t i) -> bool {
        if (i == c.args.size()) {
          const OpInfo* op = spec_.find_operation(c.callee);
          return call_nd(*op, *args, [&](const Value&) { return k(); },
                         c.span);
        }
        return eval_nd(*c.args[i], frame, [&](const Value& v) {
          (*args)[i] = v;
          return collect(i + 1);
        });
      };
      return collect(0);
    }
    case CmdKind::Return: {
      Frame empty;
      raise(RuntimeErrorKind::LimitExceeded, c.span,
            "unexpected return command", empty);
    }
  }
  return true;
}

bool Interp::run_while_nd(const Command& c, Frame& frame, const ExprPtr& cond,
                          const CommandPtr& body, const CommandPtr& update,
                          const std::function<bool()>& k) {
  const LoopInfo& li = spec_.loops.at(&c);
  size_t entry = frame.mark();
  for (const auto& name : li.modified) {
    const Frame::Slot* slot = frame.find(name);
    frame.push("old_" + name, slot->value);
  }
  // annotations are judged deterministically; the boundary state of each
  // explored path is checked
  auto check_boundary = [&](long long iteration, long long* prev_measure,
                            bool has_prev) {
    for (size_t kk = 0; kk < c.invariants.size(); ++kk) {
      if (!eval_det_rec(*c.invariants[kk], frame).as_bool())
        raise(RuntimeErrorKind::InvariantViolation, c.invariants[kk]->span,
              "loop invariant " + std::to_string(kk + 1) + " violated", frame,
              static_cast<int>(kk), iteration);
    }
    if (c.decreases) {
      long long m = eval_det_rec(*c.decreases, frame).as_int();
      if (m < 0)
        raise(RuntimeErrorKind::MeasureNegative, c.decreases->span,
              "termination measure is negative (" + std::to_string(m) + ")",
              frame, -1, iteration);
      if (has_prev && m >= *prev_measure)
        raise(RuntimeErrorKind::MeasureNotDecreased, c.decreases->span,
              "termination measure did not decrease (" +
                  std::to_string(*prev_measure) + " to " + std::to_string(m) +
                  ")",
              frame, -1, iteration);
      *prev_measure = m;
    }
  };
  std::function<bool(long long, long long, bool)> iterate =
      [&](long long iteration, long long prev, bool has_prev) -> bool {
    if (depth_ >= limits_.max_call_depth)
      raise(RuntimeErrorKind::LimitExceeded, c.span,
            "loop iteration limit exceeded in nondeterministic mode", frame);
    DepthGuard guard(depth_);
    long long measure = prev;
    check_boundary(iteration, &measure, has_prev);
    return eval_nd(*cond, frame, [&](const Value& cv) {
      if (!cv.as_bool()) {
        ScopeTrim trim(frame, entry);  // hide the old_ snapshots
        return k();
      }
      size_t m = frame.mark();
      return exec_nd(*body, frame, [&]() {
        ScopeTrim trim(frame, m);
        if (update)
          return exec_nd(*update, frame,
                         [&]() { return iterate(iteration + 1, measure, true); });
        return iterate(iteration + 1, measure, true);
      });
    });
  };
  bool r = iterate(0, 0, false);
  frame.reset(entry);
  return r;
}

}  // namespace finicheck

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "finicheck/resolve.hpp"
#include "finicheck/runtime.hpp"

namespace finicheck {

/// Selects between single-outcome evaluation and lazy enumeration of all
/// possible outcomes of multi-valued (choose) expressions.
enum class EvalMode { Det, Nondet };

/// Variable bindings as a stack of slots; lookup resolves the innermost
/// binding. Snapshots flatten the stack with inner bindings winning.
class Frame {
public:
  struct Slot {
    std::string name;
    Value value;
    DenPtr den;  // null for bindings without range enforcement (let, letpar)
  };

  void push(std::string name, Value value, DenPtr den = nullptr) {
    slots_.push_back(Slot{std::move(name), std::move(value), std::move(den)});
  }
  size_t mark() const { return slots_.size(); }
  void reset(size_t mark) { slots_.resize(mark); }

  Slot* find(const std::string& name) {
    for (auto it = slots_.rbegin(); it != slots_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }
  const Slot* find(const std::string& name) const {
    return const_cast<Frame*>(this)->find(name);
  }

  /// Visible bindings, innermost occurrence of each name, in declaration
  /// order.
  std::vector<std::pair<std::string, Value>> snapshot() const;

  const std::vector<Slot>& slots() const { return slots_; }
  std::vector<Slot>& slots() { return slots_; }

private:
  std::vector<Slot> slots_;
};

/// Hooks for the visualization builders. All methods default to no-ops; the
/// evaluator invokes them only in deterministic mode.
class Recorder {
public:
  virtual ~Recorder() = default;

  // execution-trace events
  virtual void on_assign(const std::string& /*name*/, const Frame& /*frame*/,
                         Span /*span*/) {}
  virtual void on_call_begin(const std::string& /*call_text*/) {}
  virtual void on_call_end(const Value& /*result*/) {}

  // evaluation-tree events (boolean-valued formula nodes)
  virtual void on_formula_begin(const Expr& /*e*/, const Frame& /*frame*/) {}
  virtual void on_formula_end(const Expr& /*e*/, bool /*truth*/) {}
  virtual void on_pred_call_begin(const std::string& /*name*/,
                                  const std::vector<Value>& /*args*/,
                                  const Frame& /*frame*/) {}
  virtual void on_pred_call_end(bool /*truth*/) {}
};

/// Lazy sequence of evaluation outcomes. In deterministic mode it holds
/// exactly one element; in nondeterministic mode enumeration is demand
/// driven — stopping the callback abandons the remaining outcomes.
class OutcomeStream {
public:
  using Producer =
      std::function<bool(const std::function<bool(const Value&)>&)>;

  explicit OutcomeStream(Producer producer) : producer_(std::move(producer)) {}

  /// Calls fn for each outcome until fn returns false. Returns false when
  /// enumeration was stopped early.
  bool for_each(const std::function<bool(const Value&)>& fn) const {
    return producer_(fn);
  }

  /// First outcome; the deterministic result.
  Value first() const;

  /// All outcomes (use only when finite and small).
  std::vector<Value> collect() const;

private:
  Producer producer_;
};

struct EvalLimits {
  std::chrono::milliseconds timeout{0};  // zero means none
  int max_call_depth = 4096;
};

/// Expression evaluator and command executor over a resolved specification.
/// One Interp instance runs single-threaded; distinct instances over the
/// same TypedSpec may run concurrently.
class Interp {
public:
  Interp(const TypedSpec& spec, EvalMode mode, Recorder* recorder = nullptr,
         EvalLimits limits = {});

  const TypedSpec& spec() const { return spec_; }
  EvalMode mode() const { return mode_; }

  /// Deterministic evaluation: the first outcome.
  Value eval_det(const Expr& e, Frame& frame);

  /// Lazy enumeration of all outcomes in the configured mode.
  bool eval_stream(const Expr& e, Frame& frame,
                   const std::function<bool(const Value&)>& fn);

  /// Outcome stream over a copy of the frame.
  OutcomeStream outcomes(const ExprPtr& e, const Frame& frame);

  /// Multi-valued choose per the module contract; exposed for tests.
  bool eval_choose_stream(const Binder& binder, const Expr& cond, Frame& frame,
                          const std::function<bool(const Value&)>& fn);

  /// Invokes an operation on argument values, checking its contract.
  Value call_det(const std::string& name, const std::vector<Value>& args,
                 Span call_span = {});
  bool call_stream(const std::string& name, const std::vector<Value>& args,
                   const std::function<bool(const Value&)>& fn,
                   Span call_span = {});

  /// Executes a command deterministically, mutating the frame.
  void exec_det(const Command& c, Frame& frame);

  /// Executes a command in the configured mode; the continuation runs once
  /// per outcome path with the frame holding that path's state.
  bool exec_stream(const Command& c, Frame& frame,
                   const std::function<bool()>& k);

  /// Evaluates an operation's requires clauses on bound parameters.
  /// Admissibility is always judged deterministically.
  bool requires_holds(const OpInfo& op, const std::vector<Value>& args);

  /// Builds the parameter frame for an operation invocation.
  Frame param_frame(const OpInfo& op, const std::vector<Value>& args);

  uint64_t steps() const { return steps_; }

  /// Restarts the per-input timeout window; zero disables it.
  void reset_deadline(std::chrono::milliseconds timeout);

private:
  const TypedSpec& spec_;
  EvalMode mode_;
  Recorder* recorder_;
  EvalLimits limits_;
  std::chrono::steady_clock::time_point deadline_{};
  bool has_deadline_ = false;
  uint64_t steps_ = 0;
  int depth_ = 0;
  int tree_suppress_ = 0;  // hides recorder events inside opaque atoms

  struct MemoKey {
    const Decl* decl;
    std::vector<Value> args;
    bool operator==(const MemoKey& other) const;
  };
  struct MemoKeyHash {
    size_t operator()(const MemoKey& k) const;
  };
  std::unordered_map<MemoKey, Value, MemoKeyHash> memo_;
  bool memo_enabled_;

  // carriers materialized once per denotation for cheap re-binding
  std::unordered_map<const TypeDen*, std::shared_ptr<const std::vector<Value>>>
      carrier_cache_;

  const std::vector<Value>* cached_carrier(const DenPtr& den);

  void tick(const Span& span);
  [[noreturn]] void raise(RuntimeErrorKind kind, Span span, std::string msg,
                          const Frame& frame, int invariant_index = -1,
                          long long iteration = -1);

  Value eval_det_rec(const Expr& e, Frame& frame);
  Value call_det_impl(const OpInfo& op, const std::vector<Value>& args,
                      Span call_span);
  void exec_det_rec(const Command& c, Frame& frame);
  void run_while_det(const Command& c, Frame& frame, const ExprPtr& cond,
                     const CommandPtr& body, const CommandPtr& update);

  bool eval_nd(const Expr& e, Frame& frame,
               const std::function<bool(const Value&)>& k);
  bool exec_nd(const Command& c, Frame& frame, const std::function<bool()>& k);
  bool call_nd(const OpInfo& op, const std::vector<Value>& args,
               const std::function<bool(const Value&)>& k, Span call_span);
  bool run_while_nd(const Command& c, Frame& frame, const ExprPtr& cond,
                    const CommandPtr& body, const CommandPtr& update,
                    const std::function<bool()>& k);

  Value store_assign(const Command& c, Frame& frame, Value rhs);
  void check_invariants_and_measure(const Command& c, Frame& frame,
                                    long long iteration, bool& has_measure,
                                    long long& measure);

  friend class NdScope;
};

}  // namespace finicheck

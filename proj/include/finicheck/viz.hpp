#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "finicheck/eval.hpp"
#include "finicheck/resolve.hpp"

namespace finicheck {

// ---------------------------------------------------------------------------
// execution traces

struct TraceGraph;

/// One step of a procedure run: either a numbered variable-state snapshot
/// produced by an assignment, or the call of another operation holding the
/// callee's trace as a nested subgraph.
struct TraceNode {
  enum class Kind { State, Call };
  Kind kind = Kind::State;
  long long number = 0;  // State: execution step, strictly increasing
  std::vector<std::pair<std::string, Value>> snapshot;  // State
  std::string call_text;                                // Call
  std::shared_ptr<TraceGraph> subgraph;                 // Call
};

struct TraceGraph {
  std::string title;   // the call this graph belongs to
  std::string result;  // rendered result value
  std::vector<TraceNode> nodes;
  std::vector<std::pair<int, int>> edges;  // linear execution order
};

bool equal(const TraceGraph& a, const TraceGraph& b);

/// Recorder that accumulates the execution trace of one operation call.
class TraceBuilder : public Recorder {
public:
  void on_assign(const std::string& name, const Frame& frame,
                 Span span) override;
  void on_call_begin(const std::string& call_text) override;
  void on_call_end(const Value& result) override;

  /// The completed trace of the outermost recorded call.
  TraceGraph take();

private:
  std::vector<std::unique_ptr<TraceGraph>> open_;
  TraceGraph root_;
  bool done_ = false;
  long long next_number_ = 1;

  void append_node(TraceNode node);
};

/// Runs one input of a procedure with trace recording and returns the graph.
/// Recording uses deterministic evaluation.
TraceGraph build_trace(const TypedSpec& spec, const std::string& operation,
                       const std::vector<Value>& args);

// ---------------------------------------------------------------------------
// evaluation trees

struct EvalNode {
  enum class Kind { Root, Instance, Connective, PredCall, Truncated };
  Kind kind = Kind::Connective;
  std::string label;    // outermost symbol, or the predicate name
  std::string formula;  // pretty-printed formula or call text
  std::vector<std::pair<std::string, Value>> bindings;  // visible variables
  bool has_truth = false;
  bool truth = false;
  long long number = -1;  // Instance: input index
  uint64_t omitted = 0;   // Truncated: dropped sibling count
  std::vector<std::shared_ptr<EvalNode>> children;
};

struct EvalTree {
  std::shared_ptr<EvalNode> root;
  uint64_t layer_cap = 500;
};

bool equal(const EvalTree& a, const EvalTree& b);

/// Recorder that accumulates the full (unpruned) evaluation tree of an
/// operation across the instances fed to it. Predicate applications carry
/// their defining-body subtree one level deep.
class TreeBuilder : public Recorder {
public:
  explicit TreeBuilder(std::string operation);

  void begin_instance(long long number);
  void end_instance();

  void on_formula_begin(const Expr& e, const Frame& frame) override;
  void on_formula_end(const Expr& e, bool truth) override;
  void on_pred_call_begin(const std::string& name,
                          const std::vector<Value>& args,
                          const Frame& frame) override;
  void on_pred_call_end(bool truth) override;

  const std::shared_ptr<EvalNode>& root() const { return root_; }

private:
  std::shared_ptr<EvalNode> root_;
  std::vector<std::shared_ptr<EvalNode>> stack_;
  std::shared_ptr<EvalNode> leaf_;
  int pred_depth_ = 0;
  int suppress_ = 0;

  void push_child(std::shared_ptr<EvalNode> node, bool descend);
};

/// Applies the pruning rules (first false conjunct, first witness, …) and
/// the per-layer cap to a recorded evaluation tree. With prune = false all
/// evaluated children are kept; the cap still applies.
EvalTree build_eval_tree(const TreeBuilder& record, bool prune,
                         uint64_t layer_cap = 500);

/// Evaluates an operation over all admissible inputs with tree recording.
EvalTree record_eval_tree(const TypedSpec& spec, const std::string& operation,
                          bool prune, uint64_t layer_cap = 500);

// ---------------------------------------------------------------------------
// exports

std::string emit_dot(const TraceGraph& g);
std::string emit_dot(const EvalTree& t);
std::string emit_json(const TraceGraph& g);
std::string emit_json(const EvalTree& t);

/// Readers for the JSON exports; used by the round-trip checks.
TraceGraph trace_from_json(const std::string& text);
EvalTree tree_from_json(const std::string& text);

}  // namespace finicheck

#include "finicheck/viz.hpp"

#include <functional>
#include <sstream>

#include <json.hpp>

#include "finicheck/check.hpp"
#include "finicheck/printer.hpp"

namespace finicheck {

// ---------------------------------------------------------------------------
// trace recording

void TraceBuilder::append_node(TraceNode node) {
  TraceGraph* g =
      (open_.empty() || !open_.back()) ? &root_ : open_.back().get();
  g->nodes.push_back(std::move(node));
  int idx = static_cast<int>(g->nodes.size()) - 1;
  if (idx > 0) g->edges.emplace_back(idx - 1, idx);
}

void TraceBuilder::on_assign(const std::string&, const Frame& frame, Span) {
  TraceNode node;
  node.kind = TraceNode::Kind::State;
  node.number = next_number_++;
  node.snapshot = frame.snapshot();
  append_node(std::move(node));
}

void TraceBuilder::on_call_begin(const std::string& call_text) {
  if (open_.empty() && root_.title.empty() && !done_) {
    root_.title = call_text;
    open_.push_back(nullptr);  // sentinel for the root call
    return;
  }
  auto g = std::make_unique<TraceGraph>();
  g->title = call_text;
  open_.push_back(std::move(g));
}

void TraceBuilder::on_call_end(const Value& result) {
  std::unique_ptr<TraceGraph> finished = std::move(open_.back());
  open_.pop_back();
  if (!finished) {  // the root call completed
    root_.result = result.to_string();
    done_ = true;
    return;
  }
  finished->result = result.to_string();
  TraceNode node;
  node.kind = TraceNode::Kind::Call;
  node.call_text = finished->title;
  node.subgraph = std::shared_ptr<TraceGraph>(std::move(finished));
  append_node(std::move(node));
}

TraceGraph TraceBuilder::take() { return std::move(root_); }

TraceGraph build_trace(const TypedSpec& spec, const std::string& operation,
                       const std::vector<Value>& args) {
  TraceBuilder builder;
  Interp interp(spec, EvalMode::Det, &builder);
  interp.call_det(operation, args);
  return builder.take();
}

bool equal(const TraceGraph& a, const TraceGraph& b) {
  if (a.title != b.title || a.result != b.result ||
      a.nodes.size() != b.nodes.size() || a.edges != b.edges)
    return false;
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const TraceNode& x = a.nodes[i];
    const TraceNode& y = b.nodes[i];
    if (x.kind != y.kind || x.number != y.number ||
        x.call_text != y.call_text)
      return false;
    if (x.snapshot.size() != y.snapshot.size()) return false;
    for (size_t j = 0; j < x.snapshot.size(); ++j)
      if (x.snapshot[j].first != y.snapshot[j].first ||
          x.snapshot[j].second != y.snapshot[j].second)
        return false;
    if (!x.subgraph != !y.subgraph) return false;
    if (x.subgraph && !equal(*x.subgraph, *y.subgraph)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// evaluation-tree recording

namespace {

std::string connective_label(const Expr& e) {
  switch (e.kind) {
    case ExprKind::BoolLit: return e.bool_value ? "true" : "false";
    case ExprKind::VarRef: return e.name;
    case ExprKind::IfElse: return "if";
    case ExprKind::Let: return "let";
    case ExprKind::LetPar: return "letpar";
    case ExprKind::Choose: return "choose";
    case ExprKind::Forall: return "∀";
    case ExprKind::Exists: return "∃";
    case ExprKind::Unary: return "¬";
    case ExprKind::Binary:
      switch (e.binary_op) {
        case BinaryOp::And: return "∧";
        case BinaryOp::Or: return "∨";
        case BinaryOp::Implies: return "⇒";
        case BinaryOp::Iff: return "⇔";
        case BinaryOp::Eq: return "=";
        case BinaryOp::Ne: return "≠";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "≤";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return "≥";
        case BinaryOp::MemberOf: return "∈";
        default: return "?";
      }
    default: return "?";
  }
}

}  // namespace

TreeBuilder::TreeBuilder(std::string operation) {
  root_ = std::make_shared<EvalNode>();
  root_->kind = EvalNode::Kind::Root;
  root_->label = std::move(operation);
  root_->formula = root_->label;
}

void TreeBuilder::begin_instance(long long number) {
  auto node = std::make_shared<EvalNode>();
  node->kind = EvalNode::Kind::Instance;
  node->number = number;
  node->label = std::to_string(number);
  root_->children.push_back(node);
  stack_.assign(1, node);
}

void TreeBuilder::end_instance() { stack_.clear(); }

void TreeBuilder::push_child(std::shared_ptr<EvalNode> node, bool descend) {
  if (stack_.empty()) return;  // events outside an instance are dropped
  stack_.back()->children.push_back(node);
  if (descend) stack_.push_back(std::move(node));
}

void TreeBuilder::on_formula_begin(const Expr& e, const Frame& frame) {
  if (stack_.empty()) return;
  if (suppress_ > 0) {  // inside a leaf predicate application
    ++suppress_;
    return;
  }
  auto node = std::make_shared<EvalNode>();
  node->kind = EvalNode::Kind::Connective;
  node->label = connective_label(e);
  node->formula = pretty_print(e);
  node->bindings = frame.snapshot();
  push_child(std::move(node), true);
}

void TreeBuilder::on_formula_end(const Expr&, bool truth) {
  if (stack_.empty()) return;
  if (suppress_ > 0) {
    --suppress_;
    return;
  }
  stack_.back()->has_truth = true;
  stack_.back()->truth = truth;
  stack_.pop_back();
}

void TreeBuilder::on_pred_call_begin(const std::string& name,
                                     const std::vector<Value>& args,
                                     const Frame& frame) {
  if (stack_.empty()) return;
  if (suppress_ > 0) {
    ++suppress_;
    return;
  }
  auto node = std::make_shared<EvalNode>();
  node->kind = EvalNode::Kind::PredCall;
  node->label = name;
  std::string text = name + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) text += ",";
    text += args[i].to_string();
  }
  node->formula = text + ")";
  node->bindings = frame.snapshot();
  ++pred_depth_;
  if (pred_depth_ == 1) {
    // the defining body is recorded one level deep
    push_child(std::move(node), true);
  } else {
    // deeper applications stay leaves; their interiors are not recorded
    leaf_ = node;
    push_child(std::move(node), false);
    suppress_ = 1;
  }
}

void TreeBuilder::on_pred_call_end(bool truth) {
  if (stack_.empty()) return;
  if (suppress_ > 1) {
    --suppress_;
    return;
  }
  if (suppress_ == 1) {  // the leaf application itself completes
    leaf_->has_truth = true;
    leaf_->truth = truth;
    leaf_ = nullptr;
    suppress_ = 0;
    --pred_depth_;
    return;
  }
  stack_.back()->has_truth = true;
  stack_.back()->truth = truth;
  stack_.pop_back();
  --pred_depth_;
}

// ---------------------------------------------------------------------------
// pruning and capping

namespace {

std::shared_ptr<EvalNode> clone_node(const EvalNode& n) {
  auto out = std::make_shared<EvalNode>(n);
  return out;
}

/// Keeps only the children justifying the node's truth value:
/// false ∧ keeps the first false conjunct, true ∨ the first true disjunct,
/// true ∃ the first witness, false ∀ the first counterexample, and a true ⇒
/// with false antecedent only the antecedent. All other cases keep every
/// evaluated child.
std::vector<std::shared_ptr<EvalNode>> pruned_children(const EvalNode& n) {
  const auto& kids = n.children;
  auto first_with = [&](bool wanted) -> std::shared_ptr<EvalNode> {
    for (const auto& ch : kids)
      if (ch->has_truth && ch->truth == wanted) return ch;
    return nullptr;
  };
  if (n.kind == EvalNode::Kind::Connective && n.has_truth) {
    if (n.label == "∧" && !n.truth) {
      if (auto ch = first_with(false)) return {ch};
    } else if (n.label == "∨" && n.truth) {
      if (auto ch = first_with(true)) return {ch};
    } else if (n.label == "∃" && n.truth) {
      if (auto ch = first_with(true)) return {ch};
    } else if (n.label == "∀" && !n.truth) {
      if (auto ch = first_with(false)) return {ch};
    } else if (n.label == "⇒" && n.truth && !kids.empty() &&
               kids.front()->has_truth && !kids.front()->truth) {
      return {kids.front()};
    }
  }
  return kids;
}

std::shared_ptr<EvalNode> transform(const EvalNode& n, bool prune,
                                    uint64_t cap) {
  auto out = clone_node(n);
  std::vector<std::shared_ptr<EvalNode>> kept =
      prune ? pruned_children(n) : n.children;
  uint64_t omitted = 0;
  if (kept.size() > cap) {
    omitted = kept.size() - cap;
    kept.resize(cap);
  }
  out->children.clear();
  for (const auto& ch : kept) out->children.push_back(transform(*ch, prune, cap));
  if (omitted > 0) {
    auto marker = std::make_shared<EvalNode>();
    marker->kind = EvalNode::Kind::Truncated;
    marker->label = "...";
    marker->omitted = omitted;
    out->children.push_back(std::move(marker));
  }
  return out;
}

}  // namespace

EvalTree build_eval_tree(const TreeBuilder& record, bool prune,
                         uint64_t layer_cap) {
  EvalTree tree;
  tree.layer_cap = layer_cap;
  tree.root = transform(*record.root(), prune, layer_cap);
  return tree;
}

EvalTree record_eval_tree(const TypedSpec& spec, const std::string& operation,
                          bool prune, uint64_t layer_cap) {
  const OpInfo* op = spec.find_operation(operation);
  if (!op)
    throw std::invalid_argument("unknown operation '" + operation + "'");
  if (!op->decl->body_expr)
    throw std::invalid_argument(
        "evaluation trees cover predicates, theorems and functions");
  TreeBuilder builder(operation);
  Interp probe(spec, EvalMode::Det);
  Interp recording(spec, EvalMode::Det, &builder);
  uint64_t total = input_space_size(*op);
  for (uint64_t k = 0; k < total; ++k) {
    std::vector<Value> args = input_tuple(*op, k);
    if (!probe.requires_holds(*op, args)) continue;
    builder.begin_instance(static_cast<long long>(k));
    Frame frame = recording.param_frame(*op, args);
    recording.eval_det(*op->decl->body_expr, frame);
    builder.end_instance();
  }
  return build_eval_tree(builder, prune, layer_cap);
}

bool equal(const EvalTree& a, const EvalTree& b) {
  if (a.layer_cap != b.layer_cap) return false;
  std::function<bool(const EvalNode&, const EvalNode&)> eq =
      [&](const EvalNode& x, const EvalNode& y) {
        if (x.kind != y.kind || x.label != y.label || x.formula != y.formula ||
            x.has_truth != y.has_truth || x.truth != y.truth ||
            x.number != y.number || x.omitted != y.omitted)
          return false;
        if (x.bindings.size() != y.bindings.size()) return false;
        for (size_t i = 0; i < x.bindings.size(); ++i)
          if (x.bindings[i].first != y.bindings[i].first ||
              x.bindings[i].second != y.bindings[i].second)
            return false;
        if (x.children.size() != y.children.size()) return false;
        for (size_t i = 0; i < x.children.size(); ++i)
          if (!eq(*x.children[i], *y.children[i])) return false;
        return true;
      };
  return eq(*a.root, *b.root);
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

class TraceDot {
public:
  std::string run(const TraceGraph& g) {
    out_ << "digraph trace {\n";
    out_ << "  graph [rankdir=LR];\n";
    out_ << "  labelloc=\"t\";\n";
    out_ << "  label=\"" << dot_escape(g.title) << "\";\n";
    emit_graph(g, "");
    out_ << "}\n";
    return out_.str();
  }

private:
  std::ostringstream out_;
  int next_ = 0;
  int cluster_ = 0;

  /// Emits one level; returns the DOT ids of the level's nodes in order.
  std::vector<std::string> emit_graph(const TraceGraph& g,
                                      const std::string& indent) {
    std::vector<std::string> ids;
    for (const auto& node : g.nodes) {
      std::string id = "n" + std::to_string(next_++);
      ids.push_back(id);
      if (node.kind == TraceNode::Kind::State) {
        std::string tip;
        for (const auto& [name, value] : node.snapshot) {
          if (!tip.empty()) tip += "\\n";
          tip += name + " = " + value.to_string();
        }
        out_ << indent << "  " << id << " [shape=circle, label=\""
             << node.number << "\", tooltip=\"" << dot_escape(tip) << "\"];\n";
      } else {
        out_ << indent << "  " << id << " [shape=folder, label=\""
             << dot_escape(node.call_text) << "\"];\n";
        out_ << indent << "  subgraph cluster_" << cluster_++ << " {\n";
        out_ << indent << "    label=\"" << dot_escape(node.call_text)
             << "\";\n";
        std::vector<std::string> inner = emit_graph(*node.subgraph,
                                                    indent + "  ");
        out_ << indent << "  }\n";
        if (!inner.empty())
          out_ << indent << "  " << id << " -> " << inner.front()
               << " [style=dashed];\n";
      }
    }
    for (const auto& [from, to] : g.edges)
      out_ << indent << "  " << ids[from] << " -> " << ids[to] << ";\n";
    return ids;
  }
};

class TreeDot {
public:
  std::string run(const EvalTree& t) {
    out_ << "digraph evaltree {\n";
    emit(*t.root, "");
    out_ << "}\n";
    return out_.str();
  }

private:
  std::ostringstream out_;
  int next_ = 0;

  std::string emit(const EvalNode& n, const std::string& parent) {
    std::string id = "n" + std::to_string(next_++);
    std::string shape = "ellipse";
    std::string label = n.label;
    switch (n.kind) {
      case EvalNode::Kind::Root: shape = "box"; break;
      case EvalNode::Kind::Instance: shape = "circle"; break;
      case EvalNode::Kind::PredCall: shape = "folder"; break;
      case EvalNode::Kind::Truncated:
        shape = "plaintext";
        label = "… +" + std::to_string(n.omitted);
        break;
      default: break;
    }
    std::string tip = n.formula;
    for (const auto& [name, value] : n.bindings)
      tip += "\\n" + name + " = " + value.to_string();
    if (n.has_truth) tip += std::string("\\nvalue: ") + (n.truth ? "true" : "false");
    out_ << "  " << id << " [shape=" << shape << ", label=\""
         << dot_escape(label) << "\", tooltip=\"" << dot_escape(tip) << "\"";
    if (n.has_truth)
      out_ << ", color=" << (n.truth ? "darkgreen" : "red");
    out_ << "];\n";
    if (!parent.empty()) out_ << "  " << parent << " -> " << id << ";\n";
    for (const auto& ch : n.children) emit(*ch, id);
    return id;
  }
};

}  // namespace

std::string emit_dot(const TraceGraph& g) { return TraceDot().run(g); }
std::string emit_dot(const EvalTree& t) { return TreeDot().run(t); }

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Int:
      return v.as_int();
    case Value::Kind::Bool:
      return v.as_bool();
    case Value::Kind::Array:
    case Value::Kind::Set:
    case Value::Kind::Tuple: {
      nlohmann::json items = nlohmann::json::array();
      for (const auto& item : v.items()) items.push_back(value_to_json(item));
      const char* key = v.kind() == Value::Kind::Array ? "array"
                        : v.kind() == Value::Kind::Set ? "set"
                                                       : "tuple";
      return nlohmann::json{{key, std::move(items)}};
    }
  }
  return nullptr;
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return Value::of_bool(j.get<bool>());
  if (j.is_number_integer()) return Value::of_int(j.get<long long>());
  auto items_of = [&](const char* key) {
    std::vector<Value> items;
    for (const auto& item : j.at(key)) items.push_back(value_from_json(item));
    return items;
  };
  if (j.contains("array")) return Value::array(items_of("array"));
  if (j.contains("set")) return Value::set(items_of("set"));
  if (j.contains("tuple")) return Value::tuple(items_of("tuple"));
  throw std::invalid_argument("malformed value in JSON import");
}

nlohmann::json bindings_to_json(
    const std::vector<std::pair<std::string, Value>>& bindings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [name, value] : bindings)
    arr.push_back({{"name", name}, {"value", value_to_json(value)}});
  return arr;
}

std::vector<std::pair<std::string, Value>> bindings_from_json(
    const nlohmann::json& arr) {
  std::vector<std::pair<std::string, Value>> out;
  for (const auto& item : arr)
    out.emplace_back(item.at("name").get<std::string>(),
                     value_from_json(item.at("value")));
  return out;
}

nlohmann::json trace_to_json_rec(const TraceGraph& g) {
  nlohmann::json j;
  j["title"] = g.title;
  j["result"] = g.result;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : g.nodes) {
    nlohmann::json n;
    if (node.kind == TraceNode::Kind::State) {
      n["kind"] = "state";
      n["number"] = node.number;
      n["snapshot"] = bindings_to_json(node.snapshot);
    } else {
      n["kind"] = "call";
      n["call"] = node.call_text;
      n["subgraph"] = trace_to_json_rec(*node.subgraph);
    }
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [from, to] : g.edges)
    edges.push_back(nlohmann::json::array({from, to}));
  j["edges"] = std::move(edges);
  return j;
}

TraceGraph trace_from_json_rec(const nlohmann::json& j) {
  TraceGraph g;
  g.title = j.at("title").get<std::string>();
  g.result = j.at("result").get<std::string>();
  for (const auto& n : j.at("nodes")) {
    TraceNode node;
    if (n.at("kind") == "state") {
      node.kind = TraceNode::Kind::State;
      node.number = n.at("number").get<long long>();
      node.snapshot = bindings_from_json(n.at("snapshot"));
    } else {
      node.kind = TraceNode::Kind::Call;
      node.call_text = n.at("call").get<std::string>();
      node.subgraph =
          std::make_shared<TraceGraph>(trace_from_json_rec(n.at("subgraph")));
    }
    g.nodes.push_back(std::move(node));
  }
  for (const auto& e : j.at("edges"))
    g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return g;
}

const char* node_kind_name(EvalNode::Kind k) {
  switch (k) {
    case EvalNode::Kind::Root: return "root";
    case EvalNode::Kind::Instance: return "instance";
    case EvalNode::Kind::Connective: return "connective";
    case EvalNode::Kind::PredCall: return "predcall";
    case EvalNode::Kind::Truncated: return "truncated";
  }
  return "?";
}

EvalNode::Kind node_kind_from(const std::string& s) {
  if (s == "root") return EvalNode::Kind::Root;
  if (s == "instance") return EvalNode::Kind::Instance;
  if (s == "connective") return EvalNode::Kind::Connective;
  if (s == "predcall") return EvalNode::Kind::PredCall;
  return EvalNode::Kind::Truncated;
}

nlohmann::json tree_to_json_rec(const EvalNode& n) {
  nlohmann::json j;
  j["kind"] = node_kind_name(n.kind);
  j["label"] = n.label;
  if (!n.formula.empty()) j["formula"] = n.formula;
  if (!n.bindings.empty()) j["bindings"] = bindings_to_json(n.bindings);
  if (n.has_truth) j["value"] = n.truth;
  if (n.kind == EvalNode::Kind::Instance) j["number"] = n.number;
  if (n.kind == EvalNode::Kind::Truncated) {
    j["truncated"] = true;
    j["omitted"] = n.omitted;
  }
  nlohmann::json children = nlohmann::json::array();
  for (const auto& ch : n.children) children.push_back(tree_to_json_rec(*ch));
  j["children"] = std::move(children);
  return j;
}

std::shared_ptr<EvalNode> tree_from_json_rec(const nlohmann::json& j) {
  auto n = std::make_shared<EvalNode>();
  n->kind = node_kind_from(j.at("kind").get<std::string>());
  n->label = j.at("label").get<std::string>();
  if (j.contains("formula")) n->formula = j.at("formula").get<std::string>();
  if (j.contains("bindings")) n->bindings = bindings_from_json(j.at("bindings"));
  if (j.contains("value")) {
    n->has_truth = true;
    n->truth = j.at("value").get<bool>();
  }
  if (j.contains("number")) n->number = j.at("number").get<long long>();
  if (j.contains("omitted")) n->omitted = j.at("omitted").get<uint64_t>();
  for (const auto& ch : j.at("children"))
    n->children.push_back(tree_from_json_rec(ch));
  return n;
}

}  // namespace

std::string emit_json(const TraceGraph& g) {
  nlohmann::json j = trace_to_json_rec(g);
  j["kind"] = "trace";
  return j.dump(2);
}

std::string emit_json(const EvalTree& t) {
  nlohmann::json j;
  j["kind"] = "tree";
  j["layer_cap"] = t.layer_cap;
  j["root"] = tree_to_json_rec(*t.root);
  return j.dump(2);
}

TraceGraph trace_from_json(const std::string& text) {
  return trace_from_json_rec(nlohmann::json::parse(text));
}

EvalTree tree_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  EvalTree t;
  t.layer_cap = j.at("layer_cap").get<uint64_t>();
  t.root = tree_from_json_rec(j.at("root"));
  return t;
}

}  // namespace finicheck

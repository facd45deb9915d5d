#pragma once

// Bottom-up truth reconstruction over pruned evaluation trees: kept
// children count as sufficient evidence under each connective's rule.

#include "finicheck/viz.hpp"

namespace treeoracle {

inline bool reconstruct(const finicheck::EvalNode& n) {
  using finicheck::EvalNode;
  std::vector<bool> kids;
  for (const auto& ch : n.children)
    if (ch->kind != EvalNode::Kind::Truncated) kids.push_back(reconstruct(*ch));
  switch (n.kind) {
    case EvalNode::Kind::Instance:
      return kids.at(0);
    case EvalNode::Kind::PredCall:
      return kids.empty() ? n.truth : kids.front();
    case EvalNode::Kind::Connective: {
      if (kids.empty()) return n.truth;
      if (n.label == "∧" || n.label == "∀") {
        for (bool b : kids)
          if (!b) return false;
        return true;
      }
      if (n.label == "∨" || n.label == "∃") {
        for (bool b : kids)
          if (b) return true;
        return false;
      }
      if (n.label == "⇒")
        return kids.size() == 1 ? (!kids[0] || n.truth) : (!kids[0] || kids[1]);
      if (n.label == "¬") return !kids[0];
      if (n.label == "⇔") return kids[0] == kids[1];
      return n.truth;
    }
    default:
      return n.truth;
  }
}

}  // namespace treeoracle

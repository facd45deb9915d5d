#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "finicheck/ast.hpp"
#include "finicheck/source.hpp"
#include "finicheck/types.hpp"

namespace finicheck {

/// A model parameter supplied from outside the specification,
/// e.g. --const N=20.
struct ConstBinding {
  std::string name;
  long long value = 0;  // non-negative
};

/// Loop metadata shared by the evaluator and the VC generator: the variables
/// assigned in the loop body that are visible at the loop boundary, in order
/// of first assignment.
struct LoopInfo {
  std::vector<std::string> modified;
  std::vector<DenPtr> modified_dens;
  std::vector<TypeExprPtr> modified_types;
};

struct OpInfo {
  const Decl* decl = nullptr;
  int op_index = 0;  // 0-based position among operation declarations
  std::vector<DenPtr> param_dens;
  DenPtr result_den;
};

/// A specification with every type expression resolved to a finite
/// denotation and every expression type-checked. Immutable after
/// construction; safe to share across threads.
class TypedSpec {
public:
  std::shared_ptr<const Spec> spec;
  std::shared_ptr<const SourceFile> source;

  std::map<std::string, long long> consts;
  std::vector<ConstBinding> bindings;  // as supplied, for re-resolution
  std::map<std::string, DenPtr> type_names;
  std::map<std::string, OpInfo> operations;
  std::vector<std::string> operation_order;

  std::unordered_map<const Expr*, DenPtr> expr_dens;
  std::unordered_map<const Binder*, DenPtr> binder_dens;
  std::unordered_map<const Command*, DenPtr> var_dens;
  std::unordered_map<const Command*, LoopInfo> loops;

  const OpInfo* find_operation(const std::string& name) const {
    auto it = operations.find(name);
    return it == operations.end() ? nullptr : &it->second;
  }

  DenPtr den_of(const Expr& e) const {
    auto it = expr_dens.find(&e);
    return it == expr_dens.end() ? nullptr : it->second;
  }

  DenPtr den_of_binder(const Binder& b) const {
    auto it = binder_dens.find(&b);
    return it == binder_dens.end() ? nullptr : it->second;
  }
};

/// Resolves all type expressions against the constant bindings, checks all
/// declarations, and computes loop metadata. Throws TypeError,
/// UnboundConstantError or SpanError subclasses on ill-formed input.
std::shared_ptr<const TypedSpec> resolve(
    std::shared_ptr<const Spec> spec,
    const std::vector<ConstBinding>& bindings,
    std::shared_ptr<const SourceFile> source = nullptr);

}  // namespace finicheck

#pragma once

#include <string>
#include <vector>

#include "finicheck/check.hpp"
#include "finicheck/errors.hpp"
#include "finicheck/resolve.hpp"

namespace finicheck {

/// A command (or call shape) outside the supported weakest-precondition
/// fragment.
class UnsupportedConstructError : public SpanError {
public:
  using SpanError::SpanError;
};

enum class VcCategory {
  ResultCorrect,
  InvariantInit,
  MeasureNonNegative,
  InvariantPreserved,
  MeasureDecreased,
  OpPrecondition,
};

const char* vc_category_tag(VcCategory c);       // CorrOp, InvInit, ...
const char* vc_category_name(VcCategory c);      // ResultCorrect, ...
std::string vc_category_question(VcCategory c, const std::string& callee);

enum class VcStatus { Unchecked, Valid, Invalid };

/// A generated verification condition: an ordinary theorem declaration
/// (parameters and precondition of the source procedure, body generated by
/// the wp calculus) plus the source links that explain it.
struct VerificationCondition {
  std::string id;  // _<proc>_<seq>_<Tag><idx>
  VcCategory category;
  DeclPtr theorem;
  Span goal_span;
  std::vector<Span> contributing_spans;
  VcStatus status = VcStatus::Unchecked;
  std::string callee;  // OpPrecondition: the operation whose requires is due
};

/// The weakest precondition of a command with respect to a postcondition.
/// Loops are abstracted by their invariants; the loop body contributes no
/// spans and no formula parts to the main result.
struct WpResult {
  ExprPtr formula;
  std::vector<VerificationCondition> side_conditions;
  std::vector<Span> contributing_spans;
};

WpResult wp(const TypedSpec& spec, const Decl& proc, const Command& c,
            const ExprPtr& post);

/// Generates the full set of small verification conditions for a procedure:
/// one ResultCorrect theorem, per loop an InvariantInit per invariant, a
/// MeasureNonNegative, an InvariantPreserved per invariant and a
/// MeasureDecreased, and one OpPrecondition per call site whose callee has a
/// nontrivial requires clause.
std::vector<VerificationCondition> generate_vcs(const TypedSpec& spec,
                                                const Decl& proc);

/// Convenience: VC sets for every procedure (or one named procedure).
std::vector<VerificationCondition> generate_all_vcs(
    const TypedSpec& spec, const std::string& only_proc = "");

struct VcCheckOutcome {
  std::string id;
  VcStatus status = VcStatus::Unchecked;
  RunReport report;
};

/// Checks verification conditions by running each generated theorem through
/// the exhaustive checker; statuses are updated in place.
std::vector<VcCheckOutcome> check_vcs(std::vector<VerificationCondition>& vcs,
                                      const TypedSpec& spec,
                                      const CheckConfig& base);

/// Pretty-printed theorem declaration of one VC.
std::string vc_to_text(const VerificationCondition& vc, bool ascii = false);

/// JSON export: ids, categories, questions, formulas and span links.
std::string vcs_to_json(const std::vector<VerificationCondition>& vcs);

}  // namespace finicheck

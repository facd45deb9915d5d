#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finicheck/eval.hpp"
#include "finicheck/resolve.hpp"

namespace finicheck {

struct CheckConfig {
  std::string operation;
  EvalMode mode = EvalMode::Det;
  bool silent = false;
  long long timeout_ms = 0;  // per input, zero means none
  int workers = 1;           // 1 selects the serial reference driver
  bool fail_fast = false;    // abort at the first failure (serial only)
  bool ascii = false;
};

struct Failure {
  uint64_t input_index = 0;
  std::vector<Value> input;
  RuntimeError error;
};

struct RunReport {
  std::string operation;
  std::vector<std::string> param_symbols;
  uint64_t total_inputs = 0;
  uint64_t processed = 0;
  uint64_t checked = 0;
  uint64_t inadmissible = 0;
  std::vector<Failure> failures;
  long long duration_ms = 0;
  bool aborted = false;
  std::vector<std::string> output_lines;  // per-input results, canonical order

  bool ok() const { return failures.empty() && !aborted; }
};

/// Enumerates every parameter tuple of the operation in canonical order,
/// filters inadmissible ones via the precondition, executes the rest with
/// all annotation checks, and aggregates the outcome counts.
///
/// With workers == 1 the serial reference driver runs; with workers > 1 the
/// inputs are processed by an OpenMP-parallel kernel and the per-input
/// results are merged back into canonical order, so reports are identical
/// across worker counts (except the duration).
RunReport run_operation(const TypedSpec& spec, const CheckConfig& cfg);

/// The standard textual report: an "Executing …" header followed by
/// per-input output (unless silent), failure blocks with counterexample
/// environments, and the completion summary line.
std::string format_report(const RunReport& r, bool ascii = false);

/// Machine-readable form of the report for --report-json.
std::string report_to_json(const RunReport& r);

/// Decodes the index-th parameter tuple in canonical order (parameter 0
/// varies fastest).
std::vector<Value> input_tuple(const OpInfo& op, uint64_t index);

/// Product of the parameter carrier sizes (1 for zero parameters).
uint64_t input_space_size(const OpInfo& op);

}  // namespace finicheck

#pragma once

#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "finicheck/source.hpp"
#include "finicheck/value.hpp"

namespace finicheck {

enum class RuntimeErrorKind {
  ChooseFailure,
  PreconditionViolation,
  PostconditionViolation,
  InvariantViolation,
  MeasureNegative,
  MeasureNotDecreased,
  RangeViolation,
  AssertionViolation,
  Overflow,  // 64-bit arithmetic capacity exceeded
  Timeout,
  LimitExceeded,
};

const char* runtime_error_kind_name(RuntimeErrorKind kind);

/// A check-relevant failure, carrying the variable environment at the point
/// of failure for counterexample reporting.
struct RuntimeError {
  RuntimeErrorKind kind;
  Span span;
  std::string message;
  std::vector<std::pair<std::string, Value>> environment;
  int invariant_index = -1;   // InvariantViolation
  long long iteration = -1;   // InvariantViolation, measure errors
};

class RuntimeException : public std::exception {
public:
  explicit RuntimeException(RuntimeError error) : error_(std::move(error)) {}
  const RuntimeError& error() const { return error_; }
  const char* what() const noexcept override { return error_.message.c_str(); }

private:
  RuntimeError error_;
};

}  // namespace finicheck

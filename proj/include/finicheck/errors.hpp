#pragma once

#include <stdexcept>
#include <string>

#include "finicheck/source.hpp"

namespace finicheck {

/// Base of all front-end errors that point at a source location.
class SpanError : public std::runtime_error {
public:
  SpanError(std::string what, Span span)
      : std::runtime_error(std::move(what)), span_(span) {}
  const Span& span() const { return span_; }

private:
  Span span_;
};

class LexError : public SpanError {
public:
  using SpanError::SpanError;
};

class ParseError : public SpanError {
public:
  ParseError(std::string what, Span span, std::string expected = {})
      : SpanError(std::move(what), span), expected_(std::move(expected)) {}
  /// Human-readable set of expected tokens, may be empty.
  const std::string& expected() const { return expected_; }

private:
  std::string expected_;
};

class TypeError : public SpanError {
public:
  using SpanError::SpanError;
};

/// A `val` without value that received no binding.
class UnboundConstantError : public std::runtime_error {
public:
  explicit UnboundConstantError(const std::string& name)
      : std::runtime_error("unbound constant: " + name), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

/// Carrier or input-space size exceeds the 64-bit counting capacity.
class CarrierOverflowError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Renders "file:line:col: message" for terminal output.
std::string format_error_at(const SourceFile& src, const Span& span,
                            const std::string& message);

}  // namespace finicheck

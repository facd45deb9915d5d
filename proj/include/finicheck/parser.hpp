#pragma once

#include <memory>

#include "finicheck/ast.hpp"
#include "finicheck/token.hpp"

namespace finicheck {

/// Parses a token stream into a specification. Throws ParseError on
/// malformed input.
std::shared_ptr<const Spec> parse(const std::vector<Token>& tokens);

/// Tokenizes and parses a whole source file.
std::shared_ptr<const Spec> parse_source(const SourceFile& src);

/// Parses a single expression covering the whole source (used by tests and
/// by the verification-condition round trip).
ExprPtr parse_expression(const SourceFile& src);

}  // namespace finicheck

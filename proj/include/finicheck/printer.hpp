#pragma once

#include <string>

#include "finicheck/ast.hpp"

namespace finicheck {

struct PrintOptions {
  bool ascii = false;  // transliterate math symbols to their ASCII aliases
};

/// Renders a node back to parseable source text. Compound subterms are
/// parenthesized so that reparsing the output reproduces the tree exactly.
std::string pretty_print(const Expr& e, const PrintOptions& opts = {});
std::string pretty_print(const TypeExpr& t, const PrintOptions& opts = {});
std::string pretty_print(const Command& c, const PrintOptions& opts = {});
std::string pretty_print(const Decl& d, const PrintOptions& opts = {});
std::string pretty_print(const Spec& s, const PrintOptions& opts = {});

}  // namespace finicheck

#include "finicheck/errors.hpp"

#include <sstream>

namespace finicheck {

std::string format_error_at(const SourceFile& src, const Span& span,
                            const std::string& message) {
  auto [line, col] = src.line_col(span.begin);
  std::ostringstream out;
  out << src.name() << ":" << line << ":" << col << ": " << message;
  return out.str();
}

}  // namespace finicheck

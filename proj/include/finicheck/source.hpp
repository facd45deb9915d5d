#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace finicheck {

/// Half-open range of character offsets into a source text.
struct Span {
  uint32_t begin = 0;
  uint32_t end = 0;

  bool contains(const Span& other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const Span& other) const = default;
};

inline Span join(const Span& a, const Span& b) {
  return Span{a.begin < b.begin ? a.begin : b.begin,
              a.end > b.end ? a.end : b.end};
}

/// Source text plus the line table needed to render positions as line:column.
/// Offsets count Unicode code points, not bytes, so that spans agree with
/// what an editor column shows.
class SourceFile {
public:
  SourceFile() = default;
  SourceFile(std::string name, std::string text);

  const std::string& name() const { return name_; }
  const std::string& text() const { return text_; }

  /// Code points of the whole text.
  const std::vector<char32_t>& chars() const { return chars_; }

  /// 1-based (line, column) of a code-point offset.
  std::pair<uint32_t, uint32_t> line_col(uint32_t offset) const;

  /// UTF-8 slice covering a span.
  std::string slice(const Span& s) const;

private:
  std::string name_;
  std::string text_;
  std::vector<char32_t> chars_;
  std::vector<uint32_t> byte_of_char_;  // byte offset of each code point
  std::vector<uint32_t> line_starts_;   // code-point offset of each line start
};

/// Decodes UTF-8 into code points. Returns false on malformed input and
/// reports the byte offset of the offending sequence.
bool decode_utf8(const std::string& text, std::vector<char32_t>& out,
                 std::vector<uint32_t>& byte_offsets, size_t& bad_byte);

/// Encodes one code point as UTF-8.
std::string encode_utf8(char32_t cp);

}  // namespace finicheck

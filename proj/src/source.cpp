#include "finicheck/source.hpp"

#include <algorithm>
#include <stdexcept>

#include "finicheck/errors.hpp"

namespace finicheck {

bool decode_utf8(const std::string& text, std::vector<char32_t>& out,
                 std::vector<uint32_t>& byte_offsets, size_t& bad_byte) {
  out.clear();
  byte_offsets.clear();
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    byte_offsets.push_back(static_cast<uint32_t>(i));
    unsigned char c = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    int extra = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      bad_byte = i;
      return false;
    }
    if (i + static_cast<size_t>(extra) >= n) {
      bad_byte = i;
      return false;
    }
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        bad_byte = i;
        return false;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    out.push_back(cp);
    i += 1 + extra;
  }
  return true;
}

std::string encode_utf8(char32_t cp) {
  std::string s;
  if (cp < 0x80) {
    s += static_cast<char>(cp);
  } else if (cp < 0x800) {
    s += static_cast<char>(0xC0 | (cp >> 6));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    s += static_cast<char>(0xF0 | (cp >> 18));
    s += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return s;
}

SourceFile::SourceFile(std::string name, std::string text)
    : name_(std::move(name)), text_(std::move(text)) {
  size_t bad = 0;
  if (!decode_utf8(text_, chars_, byte_of_char_, bad)) {
    throw LexError("invalid UTF-8 byte sequence",
                   Span{static_cast<uint32_t>(bad), static_cast<uint32_t>(bad) + 1});
  }
  byte_of_char_.push_back(static_cast<uint32_t>(text_.size()));
  line_starts_.push_back(0);
  for (uint32_t i = 0; i < chars_.size(); ++i) {
    if (chars_[i] == U'\n') line_starts_.push_back(i + 1);
  }
}

std::pair<uint32_t, uint32_t> SourceFile::line_col(uint32_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  uint32_t line = static_cast<uint32_t>(it - line_starts_.begin());  // 1-based
  uint32_t col = offset - line_starts_[line - 1] + 1;
  return {line, col};
}

std::string SourceFile::slice(const Span& s) const {
  if (s.begin >= byte_of_char_.size() || s.end >= byte_of_char_.size())
    return {};
  return text_.substr(byte_of_char_[s.begin],
                      byte_of_char_[s.end] - byte_of_char_[s.begin]);
}

}  // namespace finicheck

#pragma once

#include <cstddef>
#include <string>

namespace lucretia {

/// Half-open byte range into the source text, with 1-based line/column
/// for both endpoints.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;

  static SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
    SourceSpan s = a;
    if (b.end > s.end) {
      s.end = b.end;
      s.end_line = b.end_line;
      s.end_column = b.end_column;
    }
    return s;
  }

  bool operator==(const SourceSpan&) const = default;
};

inline std::string to_text(const SourceSpan& s) {
  return std::to_string(s.line) + ":" + std::to_string(s.column);
}

}  // namespace lucretia

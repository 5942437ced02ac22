#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ascnet::utf8 {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset into the source
  std::size_t length;  // encoded length in bytes
};

// Decodes UTF-8. Invalid bytes decode as U+FFFD of length one so that every
// input byte belongs to exactly one code point.
std::vector<CodePoint> decode(std::string_view text);

void append(std::string& out, char32_t cp);

}  // namespace ascnet::utf8

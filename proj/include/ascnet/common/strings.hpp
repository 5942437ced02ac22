#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ascnet::str {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
// Splits on runs of ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
// ASCII-only case mapping; non-ASCII bytes pass through unchanged.
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool is_ascii_alpha(char c);
bool is_ascii_upper(char c);
bool is_ascii_digit(char c);

// Backslash escaping for storing free text in one TSV field.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);  // throws DataError
long long parse_int(std::string_view s);  // throws DataError

}  // namespace ascnet::str

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ascnet::tsv {

// Visits each non-empty, non-comment ('#'-prefixed) line of a UTF-8 TSV
// file. The callback receives the 1-based line number and the fields.
void for_each_row(const std::filesystem::path& path,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& fn);

// Reads `key<TAB>value` pairs. Keys are lower-cased when `lower_keys`.
// Duplicate keys are a DataError.
std::map<std::string, std::string> read_pairs(const std::filesystem::path& path,
                                              bool lower_keys = true);

// One entry per line, comments and blanks skipped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace ascnet::tsv

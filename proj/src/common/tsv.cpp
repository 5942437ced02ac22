#include "ascnet/common/tsv.hpp"

#include <fstream>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"

namespace ascnet::tsv {

void for_each_row(const std::filesystem::path& path,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (str::trim(line).empty() || line.front() == '#') continue;
    fn(lineno, str::split(line, '\t'));
  }
}

std::map<std::string, std::string> read_pairs(const std::filesystem::path& path, bool lower_keys) {
  std::map<std::string, std::string> out;
  for_each_row(path, [&](std::size_t lineno, const std::vector<std::string>& f) {
    if (f.size() != 2)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected key<TAB>value");
    std::string key = lower_keys ? str::to_lower(str::trim(f[0])) : std::string(str::trim(f[0]));
    std::string value(str::trim(f[1]));
    if (key.empty()) throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    if (!out.emplace(std::move(key), std::move(value)).second)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": duplicate key");
  });
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> out;
  for_each_row(path, [&](std::size_t, const std::vector<std::string>& f) {
    out.emplace_back(str::trim(f[0]));
  });
  return out;
}

}  // namespace ascnet::tsv

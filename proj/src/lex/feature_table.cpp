#include "ascnet/lex/feature_table.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/common/tsv.hpp"

namespace ascnet::lex {

FeatureTable FeatureTable::from_rows(const std::vector<std::string>& ids, const std::vector<FeatureVector>& rows) {
  if (ids.size() != rows.size()) throw DataError("feature table: id count differs from row count");
  FeatureTable t;
  t.ids = ids;
  if (rows.empty()) return t;
  t.names = rows.front().names;
  t.groups = rows.front().group;
  t.values = Matrix(rows.size(), t.names.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].names != t.names) throw DataError("feature table: row " + ids[r] + " has a different feature order");
    std::copy(rows[r].values.begin(), rows[r].values.end(), t.values.row(r).begin());
  }
  return t;
}

std::size_t FeatureTable::column_index(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("feature table has no column '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

FeatureTable FeatureTable::select(const std::vector<std::string>& keep) const {
  FeatureTable out;
  out.ids = ids;
  out.names = keep;
  out.values = Matrix(ids.size(), keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const std::size_t src = column_index(keep[c]);
    out.groups[keep[c]] = groups.count(keep[c]) ? groups.at(keep[c]) : keep[c];
    for (std::size_t r = 0; r < ids.size(); ++r) out.values(r, c) = values(r, src);
  }
  return out;
}

FeatureTable FeatureTable::join(const FeatureTable& other) const {
  if (ids != other.ids) throw DataError("feature tables list different ids");
  FeatureTable out;
  out.ids = ids;
  out.names = names;
  out.groups = groups;
  for (const auto& n : other.names) {
    if (out.groups.count(n) || std::find(names.begin(), names.end(), n) != names.end())
      throw DataError("duplicate feature name '" + n + "' in join");
    out.names.push_back(n);
    out.groups[n] = other.groups.count(n) ? other.groups.at(n) : n;
  }
  out.values = Matrix(ids.size(), out.names.size());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    auto dst = out.values.row(r);
    std::copy(values.row(r).begin(), values.row(r).end(), dst.begin());
    std::copy(other.values.row(r).begin(), other.values.row(r).end(), dst.begin() + static_cast<long>(names.size()));
  }
  return out;
}

std::vector<std::string> FeatureTable::group_names() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& n : names) {
    const std::string g = groups.count(n) ? groups.at(n) : n;
    if (seen.insert(g).second) out.push_back(g);
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("unterminated quote in CSV line");
  out.push_back(std::move(cur));
  return out;
}

std::filesystem::path groups_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".groups.tsv");
}

}  // namespace

void write_csv(const std::filesystem::path& path, const FeatureTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "id";
  for (const auto& n : table.names) out << ',' << csv_field(n);
  out << '\n';
  for (std::size_t r = 0; r < table.ids.size(); ++r) {
    out << csv_field(table.ids[r]);
    for (std::size_t c = 0; c < table.names.size(); ++c) out << ',' << str::format_double(table.values(r, c));
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
  std::ofstream g(groups_path(path), std::ios::binary);
  g << "# feature<TAB>group\n";
  for (const auto& n : table.names) g << n << '\t' << (table.groups.count(n) ? table.groups.at(n) : n) << '\n';
}

FeatureTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  FeatureTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty feature file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv(line);
  if (header.empty() || header.front() != "id") throw DataError(path.string() + ": header must start with 'id'");
  t.names.assign(header.begin() + 1, header.end());
  std::vector<double> data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != header.size())
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(f.size()));
    t.ids.push_back(f[0]);
    for (std::size_t c = 1; c < f.size(); ++c) data.push_back(str::parse_double(f[c]));
  }
  t.values.rows = t.ids.size();
  t.values.cols = t.names.size();
  t.values.data = std::move(data);
  for (const auto& n : t.names) t.groups[n] = n;
  if (std::filesystem::exists(groups_path(path)))
    for (auto& [k, v] : tsv::read_pairs(groups_path(path), false)) t.groups[k] = v;
  return t;
}

}  // namespace ascnet::lex

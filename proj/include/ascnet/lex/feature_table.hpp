#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ascnet/common/matrix.hpp"
#include "ascnet/lex/feature_vector.hpp"

namespace ascnet::lex {

// Feature matrix for a corpus: one row per tweet id, one column per name.
struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<std::string> names;
  std::map<std::string, std::string> groups;
  Matrix values;

  static FeatureTable from_rows(const std::vector<std::string>& ids, const std::vector<FeatureVector>& rows);

  std::size_t column_index(const std::string& name) const;  // throws DataError
  // Keeps the listed columns, in the listed order.
  FeatureTable select(const std::vector<std::string>& keep) const;
  // Column-wise join; both tables must list the same ids in the same order
  // and share no feature names.
  FeatureTable join(const FeatureTable& other) const;
  std::vector<std::string> group_names() const;  // distinct, in first-column order
};

// CSV with a header row `id,<name>,...`; values are written in shortest
// round-trip form. Groups go to a sidecar `<path>.groups.tsv`.
void write_csv(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_csv(const std::filesystem::path& path);

}  // namespace ascnet::lex

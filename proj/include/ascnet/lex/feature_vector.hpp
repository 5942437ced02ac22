#pragma once

#include <map>
#include <string>
#include <vector>

namespace ascnet::lex {

// Named, ordered features for one tweet. `group` labels each feature with
// the feature family it belongs to ("hash_affect", "vader", "ASC_anger"...).
struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
  std::map<std::string, std::string> group;

  std::size_t size() const { return names.size(); }
  // Appends one feature; a duplicate name or a non-finite value is an error.
  void add(const std::string& name, double value, const std::string& group_label);
  double at(const std::string& name) const;
  bool contains(const std::string& name) const;
};

// Order-stable concatenation; a name present in two parts is a DataError.
FeatureVector assemble(const std::vector<FeatureVector>& parts);

// Names of the features that are nonzero in at least `min_support` rows,
// in the shared column order. Every row must have the same names.
std::vector<std::string> prune_sparse(const std::vector<FeatureVector>& rows, std::size_t min_support = 8);

}  // namespace ascnet::lex

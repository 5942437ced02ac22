#include "ascnet/lex/feature_vector.hpp"

#include <algorithm>
#include <cmath>

#include "ascnet/common/error.hpp"

namespace ascnet::lex {

void FeatureVector::add(const std::string& name, double value, const std::string& group_label) {
  if (!std::isfinite(value)) throw NumericalError("feature '" + name + "' is not finite");
  if (!group.emplace(name, group_label).second) throw DataError("duplicate feature name '" + name + "'");
  names.push_back(name);
  values.push_back(value);
}

bool FeatureVector::contains(const std::string& name) const { return group.count(name) > 0; }

double FeatureVector::at(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("no feature named '" + name + "'");
  return values[static_cast<std::size_t>(it - names.begin())];
}

FeatureVector assemble(const std::vector<FeatureVector>& parts) {
  FeatureVector out;
  for (const auto& p : parts)
    for (std::size_t i = 0; i < p.size(); ++i) out.add(p.names[i], p.values[i], p.group.at(p.names[i]));
  return out;
}

std::vector<std::string> prune_sparse(const std::vector<FeatureVector>& rows, std::size_t min_support) {
  if (rows.empty()) return {};
  const auto& names = rows.front().names;
  std::vector<std::size_t> support(names.size(), 0);
  for (const auto& r : rows) {
    if (r.names != names) throw DataError("prune_sparse: rows do not share one feature order");
    for (std::size_t i = 0; i < names.size(); ++i) support[i] += r.values[i] != 0.0;
  }
  std::vector<std::string> keep;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (support[i] >= min_support) keep.push_back(names[i]);
  return keep;
}

}  // namespace ascnet::lex

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ascnet/common/matrix.hpp"

namespace ascnet::calib {

struct GroupShare {
  std::string group;
  std::size_t dim = 0;
  double percent = 0.0;  // 100 * sum of member d_i
};

struct ImportanceReport {
  std::vector<std::string> names;
  std::vector<std::string> groups;
  std::vector<double> beta;  // standardized OLS coefficients
  std::vector<double> rho;   // correlation of each feature with y
  std::vector<double> d;     // beta_i * rho_i / R^2; may be negative
  double r2 = 0.0;
  std::vector<GroupShare> shares;  // largest first

  double d_sum() const;
  // feature, group, d, group percent
  void write_tsv(const std::filesystem::path& path) const;
  // group, dim, percent
  void write_groups_tsv(const std::filesystem::path& path) const;
};

// Pratt decomposition of R^2 of an ordinary least-squares fit of y on the
// columns of x (both standardized internally). Needs n > p and full column
// rank; a rank-deficient matrix is an error naming the dependent columns.
ImportanceReport pratt_importance(const Matrix& x, const std::vector<double>& y,
                                  const std::vector<std::string>& names = {},
                                  const std::vector<std::string>& groups = {});

// Indices (ascending) of a maximal linearly independent subset of the
// non-constant columns, chosen by column-pivoted QR on standardized data.
std::vector<std::size_t> independent_columns(const Matrix& x);

}  // namespace ascnet::calib

#include "ascnet/calib/importance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "ascnet/calib/metrics.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"

namespace ascnet::calib {

double ImportanceReport::d_sum() const {
  double s = 0.0;
  for (double v : d) s += v;
  return s;
}

void ImportanceReport::write_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  std::map<std::string, double> pct;
  for (const auto& s : shares) pct[s.group] = s.percent;
  out << "feature\tgroup\td\tgroup_percent\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    out << names[i] << '\t' << groups[i] << '\t' << str::format_double(d[i]) << '\t'
        << str::format_double(pct[groups[i]]) << '\n';
}

void ImportanceReport::write_groups_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "name\tdim\tpercent\n";
  for (const auto& s : shares) out << s.group << '\t' << s.dim << '\t' << str::format_double(s.percent) << '\n';
}

ImportanceReport pratt_importance(const Matrix& x, const std::vector<double>& y, const std::vector<std::string>& names,
                                  const std::vector<std::string>& groups) {
  const std::size_t n = x.rows, p = x.cols;
  if (y.size() != n) throw DataError("importance: " + std::to_string(n) + " rows but " + std::to_string(y.size()) + " labels");
  if (p == 0) throw DataError("importance: no features");
  if (n <= p) throw DataError("importance: need more rows than features (" + std::to_string(n) + " <= " + std::to_string(p) + ")");
  if (!names.empty() && names.size() != p) throw DataError("importance: name count differs from feature count");
  if (!groups.empty() && groups.size() != p) throw DataError("importance: group count differs from feature count");

  ImportanceReport rep;
  for (std::size_t j = 0; j < p; ++j) {
    rep.names.push_back(names.empty() ? "x" + std::to_string(j) : names[j]);
    rep.groups.push_back(groups.empty() ? rep.names.back() : groups[j]);
  }

  auto zscore = [n](std::vector<double> v, const std::string& what) {
    double m = 0.0;
    for (double a : v) m += a;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double a : v) ss += (a - m) * (a - m);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0)) throw DataError("importance: " + what + " is constant");
    for (double& a : v) a = (a - m) / sd;
    return v;
  };

  Eigen::MatrixXd X(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    auto col = zscore(x.column(j), "feature '" + rep.names[j] + "'");
    for (std::size_t i = 0; i < n; ++i) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  const auto ys = zscore(y, "the target");
  Eigen::VectorXd Y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(n));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    std::vector<std::string> dependent;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < static_cast<Eigen::Index>(p); ++i)
      dependent.push_back(rep.names[static_cast<std::size_t>(perm(i))]);
    std::sort(dependent.begin(), dependent.end());
    throw NumericalError("importance: features are linearly dependent (rank " + std::to_string(qr.rank()) + " of " +
                         std::to_string(p) + "); dependent: " + str::join(dependent, ", "));
  }
  const Eigen::VectorXd beta = qr.solve(Y);
  const Eigen::VectorXd resid = Y - X * beta;
  rep.r2 = 1.0 - resid.squaredNorm() / Y.squaredNorm();
  if (!(rep.r2 > 0.0)) throw NumericalError("importance: the fit explains nothing (R^2 = 0)");

  for (std::size_t j = 0; j < p; ++j) {
    const auto col = x.column(j);
    rep.beta.push_back(beta(static_cast<Eigen::Index>(j)));
    rep.rho.push_back(pearson(col, y));
    // With one feature beta equals rho and R^2 equals rho^2, so d is 1.
    rep.d.push_back(p == 1 ? 1.0 : rep.beta[j] * rep.rho[j] / rep.r2);
  }

  std::map<std::string, GroupShare> by_group;
  std::vector<std::string> order;
  for (std::size_t j = 0; j < p; ++j) {
    auto [it, fresh] = by_group.try_emplace(rep.groups[j], GroupShare{rep.groups[j], 0, 0.0});
    if (fresh) order.push_back(rep.groups[j]);
    it->second.dim += 1;
    it->second.percent += 100.0 * rep.d[j];
  }
  for (const auto& g : order) rep.shares.push_back(by_group[g]);
  std::stable_sort(rep.shares.begin(), rep.shares.end(),
                   [](const GroupShare& a, const GroupShare& b) { return a.percent > b.percent; });
  return rep;
}

std::vector<std::size_t> independent_columns(const Matrix& x) {
  const std::size_t n = x.rows;
  std::vector<std::size_t> varying;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < x.cols; ++j) {
    auto c = x.column(j);
    double m = 0.0;
    for (double a : c) m += a;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double a : c) ss += (a - m) * (a - m);
    if (!(ss > 0.0)) continue;
    const double sd = std::sqrt(ss / static_cast<double>(n));
    for (double& a : c) a = (a - m) / sd;
    varying.push_back(j);
    cols.push_back(std::move(c));
  }
  if (varying.empty()) return {};
  Eigen::MatrixXd X(n, varying.size());
  for (std::size_t j = 0; j < varying.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  std::vector<std::size_t> keep;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < qr.rank(); ++i) keep.push_back(varying[static_cast<std::size_t>(perm(i))]);
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace ascnet::calib

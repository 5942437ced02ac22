#include "ascnet/calib/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ascnet/common/error.hpp"

namespace ascnet::calib {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: lengths differ (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw DataError("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericalError("undefined correlation: constant input");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double jaccard(const Matrix& gold, const Matrix& pred) {
  if (gold.rows != pred.rows || gold.cols != pred.cols)
    throw ShapeError("jaccard: shapes differ (" + std::to_string(gold.rows) + "," + std::to_string(gold.cols) + ") vs (" +
                     std::to_string(pred.rows) + "," + std::to_string(pred.cols) + ")");
  if (gold.rows == 0) throw DataError("jaccard: no rows");
  double total = 0.0;
  for (std::size_t r = 0; r < gold.rows; ++r) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t c = 0; c < gold.cols; ++c) {
      const double a = gold(r, c), b = pred(r, c);
      if ((a != 0.0 && a != 1.0) || (b != 0.0 && b != 1.0)) throw DataError("jaccard: entries must be 0 or 1");
      inter += a == 1.0 && b == 1.0;
      uni += a == 1.0 || b == 1.0;
    }
    total += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  }
  return total / static_cast<double>(gold.rows);
}

double macro_average(std::span<const double> scores) {
  if (scores.empty()) throw DataError("macro-average of nothing");
  double s = 0.0;
  for (double v : scores) s += v;
  return s / static_cast<double>(scores.size());
}

double truncate3(double x) { return std::floor(x * 1000.0 + 1e-9) / 1000.0; }

}  // namespace ascnet::calib

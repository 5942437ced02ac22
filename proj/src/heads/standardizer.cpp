#include "ascnet/heads/standardizer.hpp"

#include <cmath>

#include "ascnet/common/error.hpp"

namespace ascnet::heads {

Standardizer Standardizer::fit(const Matrix& train, const std::vector<std::string>& names) {
  if (train.rows == 0) throw DataError("cannot standardize an empty matrix");
  Standardizer s;
  s.mean_.assign(train.cols, 0.0);
  s.sd_.assign(train.cols, 0.0);
  const double n = static_cast<double>(train.rows);
  for (std::size_t c = 0; c < train.cols; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < train.rows; ++r) m += train(r, c);
    m /= n;
    double v = 0.0;
    for (std::size_t r = 0; r < train.rows; ++r) v += (train(r, c) - m) * (train(r, c) - m);
    const double sd = std::sqrt(v / n);
    if (!(sd > 0.0)) {
      const std::string label = c < names.size() ? "'" + names[c] + "'" : "column " + std::to_string(c);
      throw DataError("feature " + label + " is constant on the training rows; remove it first (see prune_sparse)");
    }
    s.mean_[c] = m;
    s.sd_[c] = sd;
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
  if (x.cols != dim())
    throw ShapeError("standardizer fitted on " + std::to_string(dim()) + " features, got " + std::to_string(x.cols));
  Matrix out(x.rows, x.cols);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) out(r, c) = (x(r, c) - mean_[c]) / sd_[c];
  return out;
}

nlohmann::json Standardizer::to_json() const { return {{"mean", mean_}, {"sd", sd_}}; }

Standardizer Standardizer::from_json(const nlohmann::json& j) {
  Standardizer s;
  try {
    s.mean_ = j.at("mean").get<std::vector<double>>();
    s.sd_ = j.at("sd").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad standardizer record: ") + e.what());
  }
  if (s.mean_.size() != s.sd_.size()) throw DataError("standardizer mean/sd lengths differ");
  for (double sd : s.sd_)
    if (!(sd > 0.0)) throw DataError("standardizer holds a non-positive SD");
  return s;
}

}  // namespace ascnet::heads

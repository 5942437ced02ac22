#include "ascnet/tensor/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "ascnet/common/rng.hpp"

namespace ascnet::tensor {

GradCheckResult grad_check(const std::function<Tensor()>& f, std::vector<NamedParam> params,
                           const GradCheckOptions& options) {
  for (auto& p : params) {
    p.tensor.set_requires_grad(true);
    p.tensor.zero_grad();
  }
  f().backward();
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) analytic.emplace_back(p.tensor.grad().begin(), p.tensor.grad().end());

  auto eval = [&] { return f().item(); };
  const double f0 = eval();
  const double d = options.delta;
  Rng rng(options.seed);
  GradCheckResult result;

  for (std::size_t k = 0; k < params.size(); ++k) {
    auto values = params[k].tensor.mutable_values();
    std::vector<std::size_t> coords(values.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (coords.size() > options.max_coords) {
      rng.shuffle(coords);
      coords.resize(options.max_coords);
      std::sort(coords.begin(), coords.end());
    }
    for (std::size_t i : coords) {
      const double saved = values[i];
      values[i] = saved + d;
      const double fp = eval();
      values[i] = saved - d;
      const double fm = eval();
      values[i] = saved;

      const double fwd = (fp - f0) / d, bwd = (f0 - fm) / d;
      if (std::abs(fwd - bwd) > options.kink_tolerance * std::max({1.0, std::abs(fwd), std::abs(bwd)})) {
        ++result.excluded;
        continue;
      }
      const double numeric = (fp - fm) / (2.0 * d);
      const double a = analytic[k][i];
      const double scale = std::max(std::abs(a), std::abs(numeric));
      const double err = scale < options.abs_floor ? std::abs(a - numeric) : std::abs(a - numeric) / scale;
      ++result.checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst = params[k].name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return result;
}

}  // namespace ascnet::tensor

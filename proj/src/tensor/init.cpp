#include "ascnet/tensor/init.hpp"

#include <cmath>

namespace ascnet::tensor {

Tensor uniform(Shape shape, double lo, double hi, Rng& rng) {
  std::vector<double> v(shape_size(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Tensor::from(std::move(shape), std::move(v), true);
}

Tensor glorot_uniform(Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return uniform(std::move(shape), -a, a, rng);
}

Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  return glorot_uniform({rows, cols}, rows, cols, rng);
}

}  // namespace ascnet::tensor

#pragma once

#include "ascnet/common/rng.hpp"
#include "ascnet/tensor/tensor.hpp"

namespace ascnet::tensor {

// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Tensor glorot_uniform(Shape shape, std::size_t fan_in, std::size_t fan_out, Rng& rng);
// Same, with fans taken from a [rows, cols] shape.
Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);
Tensor uniform(Shape shape, double lo, double hi, Rng& rng);

}  // namespace ascnet::tensor

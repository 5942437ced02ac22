#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ascnet/tensor/tensor.hpp"

namespace ascnet::tensor {

struct GradCheckOptions {
  double delta = 1e-4;
  // Coordinates sampled per parameter; every coordinate when the parameter
  // is no larger than this.
  std::size_t max_coords = 48;
  std::uint64_t seed = 7;
  // Coordinates where both gradients are below this compare absolutely.
  double abs_floor = 1e-5;
  // A coordinate whose one-sided differences disagree by more than this
  // (relative) sits on a kink, e.g. a max-pool tie, and is excluded.
  double kink_tolerance = 1e-2;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t excluded = 0;  // non-differentiable coordinates skipped
  std::string worst;         // "param[index]" of the largest error
};

// Compares the recorded backward pass of a scalar function against central
// finite differences over sampled parameter coordinates. `f` must rebuild
// its graph from the current parameter values on every call.
GradCheckResult grad_check(const std::function<Tensor()>& f, std::vector<NamedParam> params,
                           const GradCheckOptions& options = {});

}  // namespace ascnet::tensor

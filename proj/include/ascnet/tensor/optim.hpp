#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ascnet/tensor/tensor.hpp"

namespace ascnet::tensor {

enum class OptimizerKind { adagrad, adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static OptimizerConfig adagrad(double lr = 0.01, double eps = 1e-8) {
    return {OptimizerKind::adagrad, lr, 0.0, 0.0, eps};
  }
  static OptimizerConfig adam(double lr = 0.001) { return {OptimizerKind::adam, lr, 0.9, 0.999, 1e-8}; }
};

// Per-parameter accumulators, keyed by parameter name so they survive a
// checkpoint round trip.
struct OptimizerSlot {
  std::string param;
  std::vector<double> first;   // AdaGrad: sum of squared gradients; Adam: m
  std::vector<double> second;  // Adam: v (unused by AdaGrad)
};

struct OptimizerState {
  OptimizerConfig config;
  std::uint64_t step_count = 0;
  std::vector<OptimizerSlot> slots;
};

// Updates parameters from their gradients.
//   AdaGrad: acc += g^2;  p -= lr * g / (sqrt(acc) + eps)
//   Adam:    bias-corrected first/second moments.
// Parameters with requires_grad == false are frozen and skipped; a
// trainable parameter without a gradient buffer is an error.
class Optimizer {
 public:
  Optimizer(std::vector<NamedParam> params, OptimizerConfig config);

  void step();
  void zero_grad();

  const OptimizerState& state() const { return state_; }
  // Restores accumulators from a checkpoint; slots are matched by name.
  void load_state(const OptimizerState& state);
  void set_learning_rate(double lr) { state_.config.learning_rate = lr; }
  const std::vector<NamedParam>& params() const { return params_; }

 private:
  std::vector<NamedParam> params_;
  OptimizerState state_;
};

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& s);

}  // namespace ascnet::tensor

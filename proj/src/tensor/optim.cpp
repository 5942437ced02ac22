#include "ascnet/tensor/optim.hpp"

#include <cmath>

#include "ascnet/common/error.hpp"

namespace ascnet::tensor {

Optimizer::Optimizer(std::vector<NamedParam> params, OptimizerConfig config) : params_(std::move(params)) {
  state_.config = config;
  for (const auto& p : params_) {
    OptimizerSlot slot;
    slot.param = p.name;
    slot.first.assign(p.tensor.size(), 0.0);
    if (config.kind == OptimizerKind::adam) slot.second.assign(p.tensor.size(), 0.0);
    state_.slots.push_back(std::move(slot));
  }
}

void Optimizer::zero_grad() {
  for (auto& p : params_)
    if (p.tensor.requires_grad()) p.tensor.zero_grad();
}

void Optimizer::step() {
  const auto& c = state_.config;
  ++state_.step_count;
  const double t = static_cast<double>(state_.step_count);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Tensor& p = params_[k].tensor;
    if (!p.requires_grad()) continue;
    if (!p.has_grad()) throw Error("optimizer: parameter '" + params_[k].name + "' has no gradient");
    auto theta = p.mutable_values();
    auto g = p.grad();
    auto& slot = state_.slots[k];
    if (c.kind == OptimizerKind::adagrad) {
      for (std::size_t i = 0; i < theta.size(); ++i) {
        slot.first[i] += g[i] * g[i];
        theta[i] -= c.learning_rate * g[i] / (std::sqrt(slot.first[i]) + c.epsilon);
      }
    } else {
      for (std::size_t i = 0; i < theta.size(); ++i) {
        slot.first[i] = c.beta1 * slot.first[i] + (1.0 - c.beta1) * g[i];
        slot.second[i] = c.beta2 * slot.second[i] + (1.0 - c.beta2) * g[i] * g[i];
        const double mhat = slot.first[i] / bc1;
        const double vhat = slot.second[i] / bc2;
        theta[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
      }
    }
  }
}

void Optimizer::load_state(const OptimizerState& state) {
  if (state.config.kind != state_.config.kind) throw DataError("optimizer state kind mismatch");
  state_.config = state.config;
  state_.step_count = state.step_count;
  for (const auto& in : state.slots) {
    bool found = false;
    for (auto& slot : state_.slots) {
      if (slot.param != in.param) continue;
      if (slot.first.size() != in.first.size() || slot.second.size() != in.second.size())
        throw DataError("optimizer state for '" + in.param + "' has the wrong size");
      slot = in;
      found = true;
    }
    if (!found) throw DataError("optimizer state names unknown parameter '" + in.param + "'");
  }
}

std::string to_string(OptimizerKind kind) { return kind == OptimizerKind::adam ? "adam" : "adagrad"; }

OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "adagrad") return OptimizerKind::adagrad;
  throw DataError("unknown optimizer '" + s + "'");
}

}  // namespace ascnet::tensor

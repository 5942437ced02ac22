#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ascnet::tensor {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

// One recorded value in the dynamic graph. Leaves (parameters, inputs) have
// no backward rule; every op output keeps shared ownership of its inputs, so
// a graph lives exactly as long as the tensors that reach it.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty == absent
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads this node's grad and accumulates into the inputs' grads.
  std::function<void(Node&)> backward;

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};

// Handle to a graph node with value semantics on the handle (copies alias
// the same node, like a shared_ptr).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t axis) const { return node_->shape.at(axis); }
  std::size_t size() const { return node_->value.size(); }

  std::span<const double> values() const { return node_->value; }
  // Direct write access, for initializers and optimizers on leaf tensors.
  std::span<double> mutable_values() { return node_->value; }
  double item() const;
  double operator[](std::size_t i) const { return node_->value[i]; }

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on) { node_->requires_grad = on; }
  bool has_grad() const { return !node_->grad.empty(); }
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->grad; }
  // Allocates (or resets) the gradient buffer to zeros.
  void zero_grad();
  // Drops the gradient buffer entirely.
  void clear_grad() { node_->grad.clear(); }

  // Reverse pass from a scalar: seeds d(self)/d(self) = 1 and visits every
  // reachable node that requires a gradient exactly once, in reverse
  // topological order. Leaf gradients accumulate across calls.
  void backward();

  // Detached copy of the current values (no graph, no grad).
  Tensor detach() const;

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& node_ptr() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// A leaf parameter with its stable name (used for checkpoints and optimizer
// state).
struct NamedParam {
  std::string name;
  Tensor tensor;
};

}  // namespace ascnet::tensor

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ascnet/asc/model.hpp"
#include "ascnet/common/matrix.hpp"
#include "ascnet/tensor/optim.hpp"

namespace ascnet::asc {

// One-hot slot order of every 3-way output: (positive, neutral, negative).
enum class Sentiment : std::size_t { positive = 0, neutral = 1, negative = 2 };
std::string to_string(Sentiment s);
// 1 -> positive, 0 -> neutral, -1 -> negative.
Sentiment sentiment_from_int(long long v);
inline std::size_t slot_of(Sentiment s) { return static_cast<std::size_t>(s); }

// Embeddings fixed for the first epochs, then trainable.
struct DistantSchedule {
  std::size_t frozen_epochs = 1;
  std::size_t trainable_epochs = 6;
  std::size_t total() const { return frozen_epochs + trainable_epochs; }
};

struct EpochReport {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // mean cross-entropy over the epoch's examples
  bool embeddings_trainable = true;
};

struct TrainOptions {
  std::size_t epochs = 10;  // ignored when `schedule` is set
  std::size_t batch_size = 32;
  tensor::OptimizerConfig optimizer = tensor::OptimizerConfig::adagrad();
  std::uint64_t seed = 1;
  std::optional<DistantSchedule> schedule;
  std::function<void(const EpochReport&)> on_epoch;
};

struct TrainHistory {
  std::vector<EpochReport> epochs;
  std::vector<double> losses() const;
};

// Mini-batch cross-entropy training with seeded shuffling; the last partial
// batch is kept. `targets` are one-hot slots. Works for SubModel and
// AscModel.
template <class Model>
TrainHistory train_classifier(Model& model, const std::vector<typename Model::Input>& inputs,
                              const std::vector<std::size_t>& targets, const TrainOptions& options);

TrainHistory train_asc(AscModel& model, const std::vector<text::CleanedTweet>& tweets,
                       const std::vector<Sentiment>& labels, const TrainOptions& options);

// Class probabilities, one row per input.
template <class Model>
Matrix predict_proba(const Model& model, const std::vector<typename Model::Input>& inputs, std::size_t batch_size = 64);

std::vector<std::size_t> argmax_rows(const Matrix& m);
double accuracy(const Matrix& probs, const std::vector<std::size_t>& targets);

}  // namespace ascnet::asc

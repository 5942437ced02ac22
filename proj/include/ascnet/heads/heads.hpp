#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ascnet/common/matrix.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/tensor/optim.hpp"

namespace ascnet::heads {

inline constexpr std::size_t kCopies = 300;
inline constexpr std::size_t kValenceInputDim = 212;
inline constexpr std::size_t kMultiLabelInputDim = 217;
inline constexpr std::size_t kMultiLabelHidden = 100;
inline constexpr double kLabelThreshold = 0.5;

inline const std::array<std::string, 11> kEmotionLabels = {"anger", "anticipation", "disgust", "fear",
                                                           "joy",   "love",         "optimism", "pessimism",
                                                           "sadness", "surprise",   "trust"};

// Probabilities in (positive, neutral, negative) order -> [0,1]:
// certain positive 1, certain neutral 0.5, certain negative 0.
double score_map(std::span<const double> p);

struct HeadTrainConfig {
  tensor::OptimizerConfig optimizer = tensor::OptimizerConfig::adam();
  std::size_t batch_size = 400;
  std::size_t epochs = 65;
  std::uint64_t seed = 1;

  static HeadTrainConfig valence();
  // Learning rate and epochs per emotion-intensity task.
  static HeadTrainConfig emotion(const std::string& emotion);
  static HeadTrainConfig multilabel();
};

// 300 bias-free dense(d -> 3) softmax copies, each mapped through
// score_map, averaged. The copies live side by side in one [d, 900] matrix.
class VotingRegressionHead {
 public:
  VotingRegressionHead(std::size_t input_dim, Rng& rng, std::size_t copies = kCopies);

  tensor::Tensor forward(const tensor::Tensor& x) const;  // [n,d] -> [n]
  std::vector<double> predict(const Matrix& x) const;
  // Per-epoch mean squared error.
  std::vector<double> train(const Matrix& x, const std::vector<double>& y, const HeadTrainConfig& cfg);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t copies() const { return copies_; }
  const tensor::Tensor& weights() const { return w_; }
  std::vector<tensor::NamedParam> params() const { return {{"voting/w", w_}}; }

 private:
  std::size_t input_dim_, copies_;
  tensor::Tensor w_;
};

// dense(d -> 100, tanh), then 300 dense(100 -> 11) sigmoid copies averaged.
class MultiLabelHead {
 public:
  MultiLabelHead(std::size_t input_dim, Rng& rng, std::size_t copies = kCopies,
                 std::size_t labels = kEmotionLabels.size());

  tensor::Tensor forward(const tensor::Tensor& x) const;  // [n,d] -> [n,labels]
  Matrix predict(const Matrix& x) const;
  // Per-epoch Tanimoto loss.
  std::vector<double> train(const Matrix& x, const Matrix& y, const HeadTrainConfig& cfg);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t copies() const { return copies_; }
  std::size_t labels() const { return labels_; }
  std::vector<tensor::NamedParam> params() const;

 private:
  std::size_t input_dim_, copies_, labels_;
  tensor::Tensor hidden_w_, hidden_b_, out_w_, out_b_;
};

Matrix binarize(const Matrix& probs, double threshold = kLabelThreshold);

// Head checkpoints; `extra` lands in the metadata (feature names,
// standardizer statistics, task) and comes back through `extra_out`.
void save_head(const std::filesystem::path& path, const VotingRegressionHead& h, std::uint64_t seed,
               const nlohmann::json& extra);
void save_head(const std::filesystem::path& path, const MultiLabelHead& h, std::uint64_t seed,
               const nlohmann::json& extra);
VotingRegressionHead load_voting_head(const std::filesystem::path& path, nlohmann::json* extra_out = nullptr);
MultiLabelHead load_multilabel_head(const std::filesystem::path& path, nlohmann::json* extra_out = nullptr);
// "voting" or "multilabel".
std::string head_kind(const std::filesystem::path& path);

}  // namespace ascnet::heads

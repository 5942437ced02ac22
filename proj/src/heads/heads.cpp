#include "ascnet/heads/heads.hpp"

#include <cmath>
#include <numeric>

#include "ascnet/common/error.hpp"
#include "ascnet/common/log.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/tensor/checkpoint.hpp"
#include "ascnet/tensor/init.hpp"
#include "ascnet/tensor/ops.hpp"

namespace ascnet::heads {

using tensor::Tensor;

double score_map(std::span<const double> p) {
  if (p.size() != 3) throw ShapeError("score map takes 3 probabilities, got " + std::to_string(p.size()));
  return (p[0] - p[2]) / 2.0 + 0.5;
}

HeadTrainConfig HeadTrainConfig::valence() { return {}; }

HeadTrainConfig HeadTrainConfig::emotion(const std::string& emotion) {
  HeadTrainConfig c;
  if (emotion == "anger") {
    c.optimizer = tensor::OptimizerConfig::adam(1e-4);
    c.epochs = 330;
  } else if (emotion == "fear") {
    c.optimizer = tensor::OptimizerConfig::adam(1e-5);
    c.epochs = 700;
  } else if (emotion == "joy") {
    c.optimizer = tensor::OptimizerConfig::adam(1e-5);
    c.epochs = 700;
  } else if (emotion == "sadness") {
    c.optimizer = tensor::OptimizerConfig::adam(3e-5);
    c.epochs = 1000;
  } else {
    throw UsageError("unknown emotion '" + emotion + "' (anger|fear|joy|sadness)");
  }
  return c;
}

HeadTrainConfig HeadTrainConfig::multilabel() {
  HeadTrainConfig c;
  c.batch_size = 10;
  c.epochs = 40;
  return c;
}

namespace {

Tensor rows_of(const Matrix& x, const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end) {
  std::vector<double> v;
  v.reserve((end - begin) * x.cols);
  for (std::size_t i = begin; i < end; ++i) {
    const auto r = x.row(idx[i]);
    v.insert(v.end(), r.begin(), r.end());
  }
  return Tensor::from({end - begin, x.cols}, std::move(v));
}

Tensor as_tensor(const Matrix& x) { return Tensor::from({x.rows, x.cols}, x.data); }

// Seeded shuffled mini-batches, final partial batch kept; returns the mean
// loss per epoch.
template <class BatchLoss>
std::vector<double> fit(const std::vector<tensor::NamedParam>& params, std::size_t n, const HeadTrainConfig& cfg,
                        BatchLoss batch_loss) {
  if (n == 0) throw DataError("training set is empty");
  if (cfg.batch_size == 0) throw UsageError("batch size must be positive");
  tensor::Optimizer opt(params, cfg.optimizer);
  Rng rng = Rng::derive(cfg.seed, "head-batches");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> history;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      opt.zero_grad();
      Tensor loss = batch_loss(order, start, end);
      const double value = loss.item();
      if (!std::isfinite(value)) throw NumericalError("head loss became non-finite in epoch " + std::to_string(epoch + 1));
      loss.backward();
      opt.step();
      total += value * static_cast<double>(end - start);
    }
    history.push_back(total / static_cast<double>(n));
    log::debug("head epoch " + std::to_string(epoch + 1) + " loss " + str::format_double(history.back()));
  }
  return history;
}

void check_width(std::size_t got, std::size_t want) {
  if (got != want)
    throw ShapeError("head expects " + std::to_string(want) + " input features, got " + std::to_string(got));
}

}  // namespace

VotingRegressionHead::VotingRegressionHead(std::size_t input_dim, Rng& rng, std::size_t copies)
    : input_dim_(input_dim), copies_(copies) {
  if (input_dim == 0 || copies == 0) throw UsageError("voting head needs positive input width and copy count");
  const double limit = std::sqrt(6.0 / static_cast<double>(input_dim + 3));
  w_ = tensor::uniform({input_dim, copies * 3}, -limit, limit, rng);
  w_.set_requires_grad(true);
}

Tensor VotingRegressionHead::forward(const Tensor& x) const {
  if (x.rank() != 2) throw ShapeError("voting head input must be [n, d], got " + tensor::shape_str(x.shape()));
  check_width(x.dim(1), input_dim_);
  const std::size_t n = x.dim(0);
  auto p = tensor::softmax(tensor::reshape(tensor::matmul(x, w_), {n, copies_, 3}), 2);
  auto f = tensor::add_scalar(tensor::scale(tensor::sub(tensor::select(p, 2, 0), tensor::select(p, 2, 2)), 0.5), 0.5);
  return tensor::mean(f, 1);
}

std::vector<double> VotingRegressionHead::predict(const Matrix& x) const {
  check_width(x.cols, input_dim_);
  if (x.rows == 0) return {};
  auto y = forward(as_tensor(x));
  return {y.values().begin(), y.values().end()};
}

std::vector<double> VotingRegressionHead::train(const Matrix& x, const std::vector<double>& y,
                                                const HeadTrainConfig& cfg) {
  check_width(x.cols, input_dim_);
  if (x.rows != y.size()) throw DataError("feature rows and labels differ in count");
  for (double v : y)
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("regression label " + str::format_double(v) + " outside [0,1]");
  return fit(params(), x.rows, cfg, [&](const std::vector<std::size_t>& idx, std::size_t b, std::size_t e) {
    std::vector<double> t;
    for (std::size_t i = b; i < e; ++i) t.push_back(y[idx[i]]);
    return tensor::mse(forward(rows_of(x, idx, b, e)), Tensor::from({e - b}, std::move(t)));
  });
}

MultiLabelHead::MultiLabelHead(std::size_t input_dim, Rng& rng, std::size_t copies, std::size_t labels)
    : input_dim_(input_dim), copies_(copies), labels_(labels) {
  if (input_dim == 0 || copies == 0 || labels == 0) throw UsageError("multi-label head needs positive sizes");
  hidden_w_ = tensor::glorot_uniform(input_dim, kMultiLabelHidden, rng);
  hidden_b_ = Tensor::zeros({kMultiLabelHidden}, true);
  const double limit = std::sqrt(6.0 / static_cast<double>(kMultiLabelHidden + labels));
  out_w_ = tensor::uniform({kMultiLabelHidden, copies * labels}, -limit, limit, rng);
  out_w_.set_requires_grad(true);
  out_b_ = Tensor::zeros({copies * labels}, true);
}

std::vector<tensor::NamedParam> MultiLabelHead::params() const {
  return {{"multilabel/hidden/w", hidden_w_},
          {"multilabel/hidden/b", hidden_b_},
          {"multilabel/output/w", out_w_},
          {"multilabel/output/b", out_b_}};
}

Tensor MultiLabelHead::forward(const Tensor& x) const {
  if (x.rank() != 2) throw ShapeError("multi-label head input must be [n, d], got " + tensor::shape_str(x.shape()));
  check_width(x.dim(1), input_dim_);
  const std::size_t n = x.dim(0);
  auto h = tensor::tanh(tensor::dense(x, hidden_w_, hidden_b_));
  auto s = tensor::sigmoid(tensor::dense(h, out_w_, out_b_));
  return tensor::mean(tensor::reshape(s, {n, copies_, labels_}), 1);
}

Matrix MultiLabelHead::predict(const Matrix& x) const {
  check_width(x.cols, input_dim_);
  Matrix out(x.rows, labels_);
  if (x.rows == 0) return out;
  auto y = forward(as_tensor(x));
  out.data.assign(y.values().begin(), y.values().end());
  return out;
}

std::vector<double> MultiLabelHead::train(const Matrix& x, const Matrix& y, const HeadTrainConfig& cfg) {
  check_width(x.cols, input_dim_);
  if (x.rows != y.rows) throw DataError("feature rows and label rows differ in count");
  if (y.cols != labels_) throw ShapeError("label matrix has " + std::to_string(y.cols) + " columns, head has " + std::to_string(labels_));
  for (double v : y.data)
    if (v != 0.0 && v != 1.0) throw DataError("multi-label targets must be 0 or 1, got " + str::format_double(v));
  return fit(params(), x.rows, cfg, [&](const std::vector<std::size_t>& idx, std::size_t b, std::size_t e) {
    return tensor::tanimoto(forward(rows_of(x, idx, b, e)), rows_of(y, idx, b, e));
  });
}

Matrix binarize(const Matrix& probs, double threshold) {
  Matrix out(probs.rows, probs.cols);
  for (std::size_t i = 0; i < probs.data.size(); ++i) out.data[i] = probs.data[i] >= threshold ? 1.0 : 0.0;
  return out;
}

namespace {

void save(const std::filesystem::path& path, const char* kind, const nlohmann::json& shape,
          const std::vector<tensor::NamedParam>& params, std::uint64_t seed, const nlohmann::json& extra) {
  tensor::Checkpoint c;
  c.seed = seed;
  c.metadata = {{"kind", kind}, {"shape", shape}, {"extra", extra}};
  c.config_digest = digest_hex(fnv1a64(c.metadata.dump()));
  c.tensors = tensor::Checkpoint::capture(params);
  tensor::save_checkpoint(path, c);
}

tensor::Checkpoint open(const std::filesystem::path& path, const char* kind, nlohmann::json* extra_out) {
  auto c = tensor::load_checkpoint(path);
  if (c.metadata.value("kind", "") != kind) throw DataError(path.string() + ": not a " + std::string(kind) + " head checkpoint");
  if (extra_out) *extra_out = c.metadata.value("extra", nlohmann::json::object());
  return c;
}

}  // namespace

void save_head(const std::filesystem::path& path, const VotingRegressionHead& h, std::uint64_t seed,
               const nlohmann::json& extra) {
  save(path, "voting", {{"input_dim", h.input_dim()}, {"copies", h.copies()}}, h.params(), seed, extra);
}

void save_head(const std::filesystem::path& path, const MultiLabelHead& h, std::uint64_t seed,
               const nlohmann::json& extra) {
  save(path, "multilabel", {{"input_dim", h.input_dim()}, {"copies", h.copies()}, {"labels", h.labels()}},
       h.params(), seed, extra);
}

VotingRegressionHead load_voting_head(const std::filesystem::path& path, nlohmann::json* extra_out) {
  auto c = open(path, "voting", extra_out);
  try {
    const auto& s = c.metadata.at("shape");
    Rng rng(c.seed);
    VotingRegressionHead h(s.at("input_dim").get<std::size_t>(), rng, s.at("copies").get<std::size_t>());
    auto p = h.params();
    c.restore(p);
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad head metadata: " + e.what());
  }
}

MultiLabelHead load_multilabel_head(const std::filesystem::path& path, nlohmann::json* extra_out) {
  auto c = open(path, "multilabel", extra_out);
  try {
    const auto& s = c.metadata.at("shape");
    Rng rng(c.seed);
    MultiLabelHead h(s.at("input_dim").get<std::size_t>(), rng, s.at("copies").get<std::size_t>(),
                     s.at("labels").get<std::size_t>());
    auto p = h.params();
    c.restore(p);
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad head metadata: " + e.what());
  }
}

std::string head_kind(const std::filesystem::path& path) {
  auto c = tensor::load_checkpoint(path);
  auto k = c.metadata.value("kind", "");
  if (k != "voting" && k != "multilabel") throw DataError(path.string() + ": not a head checkpoint");
  return k;
}

}  // namespace ascnet::heads

#include "ascnet/asc/train.hpp"

#include <cmath>
#include <numeric>

#include "ascnet/common/error.hpp"
#include "ascnet/common/log.hpp"
#include "ascnet/common/strings.hpp"

namespace ascnet::asc {

std::string to_string(Sentiment s) {
  switch (s) {
    case Sentiment::positive: return "positive";
    case Sentiment::neutral: return "neutral";
    case Sentiment::negative: return "negative";
  }
  return "?";
}

Sentiment sentiment_from_int(long long v) {
  if (v == 1) return Sentiment::positive;
  if (v == 0) return Sentiment::neutral;
  if (v == -1) return Sentiment::negative;
  throw DataError("sentiment label must be -1, 0 or 1, got " + std::to_string(v));
}

std::vector<double> TrainHistory::losses() const {
  std::vector<double> out;
  for (const auto& e : epochs) out.push_back(e.loss);
  return out;
}

template <class Model>
TrainHistory train_classifier(Model& model, const std::vector<typename Model::Input>& inputs,
                              const std::vector<std::size_t>& targets, const TrainOptions& options) {
  if (inputs.empty()) throw DataError("training set is empty");
  if (inputs.size() != targets.size()) throw DataError("training inputs and labels differ in length");
  if (options.batch_size == 0) throw UsageError("batch size must be positive");
  for (auto t : targets)
    if (t >= 3) throw DataError("class slot " + std::to_string(t) + " out of range");

  tensor::Optimizer opt(model.params(), options.optimizer);
  Rng rng = Rng::derive(options.seed, "batches");
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t epochs = options.schedule ? options.schedule->total() : options.epochs;

  TrainHistory history;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    if (options.schedule) model.set_embeddings_trainable(epoch >= options.schedule->frozen_epochs);
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      std::vector<const typename Model::Input*> batch;
      std::vector<double> onehot((end - start) * 3, 0.0);
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&inputs[order[i]]);
        onehot[(i - start) * 3 + targets[order[i]]] = 1.0;
      }
      opt.zero_grad();
      auto loss = tensor::cross_entropy(model.probs(batch), tensor::Tensor::from({end - start, 3}, std::move(onehot)));
      const double value = loss.item();
      if (!std::isfinite(value)) throw NumericalError("training loss became non-finite in epoch " + std::to_string(epoch + 1));
      loss.backward();
      opt.step();
      total += value * static_cast<double>(end - start);
    }
    EpochReport r{epoch + 1, total / static_cast<double>(order.size()), true};
    if (options.schedule) r.embeddings_trainable = epoch >= options.schedule->frozen_epochs;
    log::debug("epoch " + std::to_string(r.epoch) + " loss " + str::format_double(r.loss));
    if (options.on_epoch) options.on_epoch(r);
    history.epochs.push_back(r);
  }
  return history;
}

template <class Model>
Matrix predict_proba(const Model& model, const std::vector<typename Model::Input>& inputs, std::size_t batch_size) {
  Matrix out(inputs.size(), 3);
  for (std::size_t start = 0; start < inputs.size(); start += batch_size) {
    const std::size_t end = std::min(inputs.size(), start + batch_size);
    std::vector<const typename Model::Input*> batch;
    for (std::size_t i = start; i < end; ++i) batch.push_back(&inputs[i]);
    const auto p = model.probs(batch);
    std::copy(p.values().begin(), p.values().end(), out.data.begin() + static_cast<long>(start * 3));
  }
  return out;
}

template TrainHistory train_classifier<SubModel>(SubModel&, const std::vector<SubModel::Input>&,
                                                 const std::vector<std::size_t>&, const TrainOptions&);
template TrainHistory train_classifier<AscModel>(AscModel&, const std::vector<AscModel::Input>&,
                                                 const std::vector<std::size_t>&, const TrainOptions&);
template Matrix predict_proba<SubModel>(const SubModel&, const std::vector<SubModel::Input>&, std::size_t);
template Matrix predict_proba<AscModel>(const AscModel&, const std::vector<AscModel::Input>&, std::size_t);

TrainHistory train_asc(AscModel& model, const std::vector<text::CleanedTweet>& tweets,
                       const std::vector<Sentiment>& labels, const TrainOptions& options) {
  std::vector<AscModel::Input> inputs;
  inputs.reserve(tweets.size());
  for (const auto& t : tweets) inputs.push_back(model.encode(t));
  std::vector<std::size_t> targets;
  for (auto l : labels) targets.push_back(slot_of(l));
  return train_classifier(model, inputs, targets, options);
}

std::vector<std::size_t> argmax_rows(const Matrix& m) {
  std::vector<std::size_t> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    out[r] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

double accuracy(const Matrix& probs, const std::vector<std::size_t>& targets) {
  if (probs.rows != targets.size() || targets.empty()) throw DataError("accuracy: size mismatch");
  const auto pred = argmax_rows(probs);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == targets[i];
  return static_cast<double>(hit) / static_cast<double>(targets.size());
}

}  // namespace ascnet::asc

#include "ascnet/asc/hidden.hpp"

#include "ascnet/common/error.hpp"

namespace ascnet::asc {

std::string to_string(HiddenLayer l) {
  return l == HiddenLayer::combiner_hidden ? "combiner_hidden" : "submodel_penultimate";
}

HiddenLayer hidden_layer_from_string(const std::string& s) {
  if (s == "combiner_hidden") return HiddenLayer::combiner_hidden;
  if (s == "submodel_penultimate") return HiddenLayer::submodel_penultimate;
  throw UsageError("unknown hidden layer '" + s + "' (submodel_penultimate|combiner_hidden)");
}

namespace {

constexpr std::size_t kChunk = 64;

template <class Model, class Fn>
std::vector<lex::FeatureVector> collect(const Model& model, const std::vector<text::CleanedTweet>& tweets,
                                        const std::vector<std::string>& names, const std::string& group, Fn layer) {
  std::vector<lex::FeatureVector> out;
  out.reserve(tweets.size());
  for (std::size_t start = 0; start < tweets.size(); start += kChunk) {
    const std::size_t end = std::min(tweets.size(), start + kChunk);
    std::vector<typename Model::Input> enc;
    for (std::size_t i = start; i < end; ++i) enc.push_back(model.encode(tweets[i]));
    std::vector<const typename Model::Input*> batch;
    for (const auto& e : enc) batch.push_back(&e);
    const tensor::Tensor h = layer(batch);
    const std::size_t d = h.dim(1);
    if (d != names.size()) throw ShapeError("hidden layer width " + std::to_string(d) + " does not match its names");
    for (std::size_t r = 0; r < batch.size(); ++r) {
      lex::FeatureVector fv;
      for (std::size_t c = 0; c < d; ++c) fv.add(names[c], h[r * d + c], group);
      out.push_back(std::move(fv));
    }
  }
  return out;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + "_" + std::to_string(i));
  return out;
}

}  // namespace

std::vector<lex::FeatureVector> extract_hidden(const AscModel& model, const std::vector<text::CleanedTweet>& tweets,
                                               HiddenLayer layer, const std::string& prefix) {
  if (layer == HiddenLayer::combiner_hidden)
    return collect(model, tweets, numbered(prefix, AscModel::kCombinerHidden), prefix,
                   [&](const auto& b) { return model.combiner_hidden(b); });
  std::vector<std::string> names;
  for (const auto& s : model.subs()) {
    auto part = numbered(prefix + "_" + s.config().slot, s.config().penultimate_dim);
    names.insert(names.end(), part.begin(), part.end());
  }
  return collect(model, tweets, names, prefix, [&](const auto& b) { return model.concat_penultimate(b); });
}

std::vector<lex::FeatureVector> extract_hidden(const SubModel& model, const std::vector<text::CleanedTweet>& tweets,
                                               HiddenLayer layer, const std::string& prefix) {
  if (layer != HiddenLayer::submodel_penultimate)
    throw UsageError("a single sub-model has no combiner layer; use submodel_penultimate");
  return collect(model, tweets, numbered(prefix, model.config().penultimate_dim), prefix,
                 [&](const auto& b) { return model.penultimate(b); });
}

}  // namespace ascnet::asc

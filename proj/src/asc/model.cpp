#include "ascnet/asc/model.hpp"

#include "ascnet/common/error.hpp"
#include "ascnet/tensor/init.hpp"

namespace ascnet::asc {

using tensor::Tensor;

AscModel::AscModel(std::vector<SubModel> subs, Rng& rng) : subs_(std::move(subs)) {
  if (subs_.size() != 4) throw UsageError("the combined model takes exactly 4 sub-models, got " + std::to_string(subs_.size()));
  comb_w_ = tensor::glorot_uniform(concat_dim(), kCombinerHidden, rng);
  comb_b_ = Tensor::zeros({kCombinerHidden}, true);
  out_w_ = tensor::glorot_uniform(kCombinerHidden, 3, rng);
  out_b_ = Tensor::zeros({3}, true);
}

std::size_t AscModel::concat_dim() const {
  std::size_t n = 0;
  for (const auto& s : subs_) n += s.config().penultimate_dim;
  return n;
}

AscModel::Input AscModel::encode(const text::CleanedTweet& t) const {
  Input in;
  for (std::size_t i = 0; i < 4; ++i) in[i] = subs_[i].encode(t);
  return in;
}

Tensor AscModel::concat_penultimate(const std::vector<const Input*>& batch) const {
  std::vector<Tensor> parts;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<const EncodedTweet*> column;
    column.reserve(batch.size());
    for (const auto* x : batch) column.push_back(&(*x)[i]);
    parts.push_back(subs_[i].penultimate(column));
  }
  return tensor::concat(parts, 1);
}

Tensor AscModel::combiner_hidden(const std::vector<const Input*>& batch) const {
  return tensor::tanh(tensor::dense(concat_penultimate(batch), comb_w_, comb_b_));
}

Tensor AscModel::probs(const std::vector<const Input*>& batch) const {
  return tensor::softmax(tensor::dense(combiner_hidden(batch), out_w_, out_b_), 1);
}

std::vector<tensor::NamedParam> AscModel::params() const {
  std::vector<tensor::NamedParam> p;
  for (const auto& s : subs_) {
    auto sp = s.params(s.config().slot + "/", false);
    p.insert(p.end(), sp.begin(), sp.end());
  }
  p.push_back({"combiner/hidden/w", comb_w_});
  p.push_back({"combiner/hidden/b", comb_b_});
  p.push_back({"combiner/output/w", out_w_});
  p.push_back({"combiner/output/b", out_b_});
  return p;
}

void AscModel::set_embeddings_trainable(bool on) {
  for (auto& s : subs_) s.set_embeddings_trainable(on);
}

AscModel build_asc(const std::vector<SubModelConfig>& configs, const Vocab& simple_vocab, const Vocab& complex_vocab,
                   Rng& rng, const std::map<std::string, const EmbeddingFile*>& pretrained) {
  if (configs.size() != 4) throw UsageError("the combined model takes exactly 4 sub-model configs, got " + std::to_string(configs.size()));
  std::vector<SubModel> subs;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& c = configs[i];
    if (c.slot != kSlots[i]) throw UsageError("sub-model " + std::to_string(i) + " must fill slot " + kSlots[i] + ", not " + c.slot);
    const auto expected = SubModelConfig::canonical(c.slot).variant;
    if (c.variant != expected)
      throw UsageError("slot " + c.slot + " reads " + to_string(expected) + " text, not " + to_string(c.variant));
    const auto it = pretrained.find(c.slot);
    subs.emplace_back(c, c.variant == CleaningVariant::simple ? simple_vocab : complex_vocab, rng,
                      it == pretrained.end() ? nullptr : it->second);
  }
  return AscModel(std::move(subs), rng);
}

}  // namespace ascnet::asc

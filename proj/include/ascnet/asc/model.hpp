#pragma once

#include <array>
#include <map>
#include <vector>

#include "ascnet/asc/submodel.hpp"

namespace ascnet::asc {

// Four sub-models whose penultimate layers are concatenated and fed to a
// dense tanh layer of 25 units and a 3-way softmax.
class AscModel {
 public:
  static constexpr std::size_t kCombinerHidden = 25;
  using Input = std::array<EncodedTweet, 4>;

  AscModel(std::vector<SubModel> subs, Rng& rng);

  Input encode(const text::CleanedTweet& t) const;

  tensor::Tensor concat_penultimate(const std::vector<const Input*>& batch) const;  // [n, 4p]
  tensor::Tensor combiner_hidden(const std::vector<const Input*>& batch) const;     // [n, 25]
  tensor::Tensor probs(const std::vector<const Input*>& batch) const;               // [n, 3]

  std::vector<tensor::NamedParam> params() const;
  void set_embeddings_trainable(bool on);

  const std::vector<SubModel>& subs() const { return subs_; }
  std::size_t concat_dim() const;

 private:
  std::vector<SubModel> subs_;
  tensor::Tensor comb_w_, comb_b_, out_w_, out_b_;
};

// Checks the four configurations against the slot table (one per kSlots
// entry, in order, each reading its slot's cleaning variant) and builds the
// model. Sub-models read the vocabulary of their cleaning variant.
AscModel build_asc(const std::vector<SubModelConfig>& configs, const Vocab& simple_vocab, const Vocab& complex_vocab,
                   Rng& rng, const std::map<std::string, const EmbeddingFile*>& pretrained = {});

}  // namespace ascnet::asc

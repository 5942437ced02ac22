#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "ascnet/asc/embeddings.hpp"
#include "ascnet/asc/vocab.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/tensor/ops.hpp"
#include "ascnet/text/pipeline.hpp"

namespace ascnet::asc {

enum class CleaningVariant { simple, complex };
std::string to_string(CleaningVariant v);
CleaningVariant cleaning_variant_from_string(const std::string& s);

const std::vector<text::Token>& tokens_of(const text::CleanedTweet& t, CleaningVariant v);

// Input slots of the combined model, with the cleaning variant each one
// reads: 200-dimensional embeddings go with simple text, 150 with complex.
inline const std::array<std::string, 4> kSlots = {"w2v_200", "w2v_150", "ft_200", "ft_150"};

struct SubModelConfig {
  std::string slot = "w2v_200";
  std::size_t word_embed_dim = 200;
  std::size_t pos_embed_dim = 8;
  CleaningVariant variant = CleaningVariant::simple;
  std::size_t seq_len = 40;
  std::size_t gru_hidden = 200;
  std::vector<std::size_t> filter_widths = {1, 2, 3, 4, 5, 6};
  std::size_t filters_per_width = 100;
  std::size_t penultimate_dim = 30;
  std::size_t num_classes = 3;

  // Full-size configuration for one of kSlots.
  static SubModelConfig canonical(const std::string& slot);

  std::size_t gru_input_dim() const { return word_embed_dim + pos_embed_dim; }
  std::size_t state_dim() const { return 2 * gru_hidden; }
  std::size_t attention_dim() const { return filter_widths.size() * filters_per_width; }

  // Rejects empty dimensions, sequences shorter than the widest filter, and
  // a 200/150 word dimension paired with the wrong cleaning variant.
  void validate() const;

  nlohmann::json to_json() const;
  static SubModelConfig from_json(const nlohmann::json& j);
};

// Intermediate values of one forward pass, for shape checks and inspection.
struct SubModelTrace {
  tensor::Tensor inputs;       // [seq_len, word+pos]
  tensor::Tensor states;       // [seq_len, 2*hidden]
  tensor::Tensor attention;    // [widths*filters]
  tensor::Tensor penultimate;  // [1, penultimate_dim]
  tensor::Tensor probs;        // [1, num_classes]
};

// Embeddings -> bi-GRU -> convolution/max-pool attention -> dense tanh ->
// dense softmax. Copies share parameters.
class SubModel {
 public:
  using Input = EncodedTweet;

  SubModel(SubModelConfig cfg, Vocab vocab, Rng& rng, const EmbeddingFile* pretrained = nullptr);

  EncodedTweet encode(const text::CleanedTweet& t) const;

  tensor::Tensor attention(const EncodedTweet& x) const;
  tensor::Tensor penultimate(const std::vector<const EncodedTweet*>& batch) const;  // [n, p]
  tensor::Tensor probs(const std::vector<const EncodedTweet*>& batch) const;        // [n, classes]
  SubModelTrace trace(const EncodedTweet& x) const;

  // Parameters under `prefix`; the output layer is left out when the
  // sub-model only feeds a combiner.
  std::vector<tensor::NamedParam> params(const std::string& prefix = "", bool with_output = true) const;

  // Freezes or releases both embedding tables.
  void set_embeddings_trainable(bool on);
  bool embeddings_trainable() const { return embeddings_trainable_; }

  const SubModelConfig& config() const { return cfg_; }
  const Vocab& vocab() const { return vocab_; }
  const tensor::Tensor& word_table() const { return word_table_; }
  const tensor::Tensor& pos_table() const { return pos_table_; }

 private:
  tensor::Tensor embed(const EncodedTweet& x) const;

  SubModelConfig cfg_;
  Vocab vocab_;
  bool embeddings_trainable_ = true;
  tensor::Tensor word_table_, pos_table_;
  tensor::GruParams fwd_, bwd_;
  std::vector<tensor::ConvBank> banks_;
  tensor::Tensor hidden_w_, hidden_b_, out_w_, out_b_;
};

}  // namespace ascnet::asc

#include "ascnet/asc/submodel.hpp"

#include <algorithm>

#include "ascnet/common/error.hpp"
#include "ascnet/tensor/init.hpp"

namespace ascnet::asc {

using tensor::Tensor;

std::string to_string(CleaningVariant v) { return v == CleaningVariant::simple ? "simple" : "complex"; }

CleaningVariant cleaning_variant_from_string(const std::string& s) {
  if (s == "simple") return CleaningVariant::simple;
  if (s == "complex") return CleaningVariant::complex;
  throw UsageError("unknown cleaning variant '" + s + "' (simple|complex)");
}

const std::vector<text::Token>& tokens_of(const text::CleanedTweet& t, CleaningVariant v) {
  return v == CleaningVariant::simple ? t.simple : t.complex;
}

SubModelConfig SubModelConfig::canonical(const std::string& slot) {
  SubModelConfig c;
  c.slot = slot;
  if (slot == "w2v_200" || slot == "ft_200") {
    c.word_embed_dim = 200;
    c.variant = CleaningVariant::simple;
  } else if (slot == "w2v_150" || slot == "ft_150") {
    c.word_embed_dim = 150;
    c.variant = CleaningVariant::complex;
  } else {
    throw UsageError("unknown sub-model slot '" + slot + "'");
  }
  return c;
}

void SubModelConfig::validate() const {
  auto positive = [&](std::size_t v, const char* what) {
    if (v == 0) throw UsageError("sub-model " + slot + ": " + what + " must be positive");
  };
  positive(word_embed_dim, "word_embed_dim");
  positive(pos_embed_dim, "pos_embed_dim");
  positive(seq_len, "seq_len");
  positive(gru_hidden, "gru_hidden");
  positive(filters_per_width, "filters_per_width");
  positive(penultimate_dim, "penultimate_dim");
  if (filter_widths.empty()) throw UsageError("sub-model " + slot + ": no filter widths");
  for (auto w : filter_widths) positive(w, "filter width");
  if (num_classes != 3) throw UsageError("sub-model " + slot + ": the classifier has exactly 3 classes");
  const std::size_t widest = *std::max_element(filter_widths.begin(), filter_widths.end());
  if (seq_len < widest)
    throw UsageError("sub-model " + slot + ": seq_len " + std::to_string(seq_len) + " shorter than filter width " +
                     std::to_string(widest));
  if ((word_embed_dim == 200 && variant != CleaningVariant::simple) ||
      (word_embed_dim == 150 && variant != CleaningVariant::complex))
    throw UsageError("sub-model " + slot + ": " + std::to_string(word_embed_dim) +
                     "-dimensional embeddings pair with " + (word_embed_dim == 200 ? "simple" : "complex") +
                     " cleaning, not " + to_string(variant));
}

nlohmann::json SubModelConfig::to_json() const {
  return {{"slot", slot},
          {"word_embed_dim", word_embed_dim},
          {"pos_embed_dim", pos_embed_dim},
          {"variant", to_string(variant)},
          {"seq_len", seq_len},
          {"gru_hidden", gru_hidden},
          {"filter_widths", filter_widths},
          {"filters_per_width", filters_per_width},
          {"penultimate_dim", penultimate_dim},
          {"num_classes", num_classes}};
}

SubModelConfig SubModelConfig::from_json(const nlohmann::json& j) {
  SubModelConfig c;
  try {
    c.slot = j.at("slot").get<std::string>();
    c.word_embed_dim = j.at("word_embed_dim").get<std::size_t>();
    c.pos_embed_dim = j.at("pos_embed_dim").get<std::size_t>();
    c.variant = cleaning_variant_from_string(j.at("variant").get<std::string>());
    c.seq_len = j.at("seq_len").get<std::size_t>();
    c.gru_hidden = j.at("gru_hidden").get<std::size_t>();
    c.filter_widths = j.at("filter_widths").get<std::vector<std::size_t>>();
    c.filters_per_width = j.at("filters_per_width").get<std::size_t>();
    c.penultimate_dim = j.at("penultimate_dim").get<std::size_t>();
    c.num_classes = j.at("num_classes").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad sub-model config: ") + e.what());
  }
  return c;
}

namespace {

tensor::GruParams make_gru(std::size_t in, std::size_t h, Rng& rng) {
  return {tensor::glorot_uniform({in, 3 * h}, in, h, rng), tensor::glorot_uniform({h, 3 * h}, h, h, rng),
          Tensor::zeros({3 * h}, true)};
}

}  // namespace

SubModel::SubModel(SubModelConfig cfg, Vocab vocab, Rng& rng, const EmbeddingFile* pretrained)
    : cfg_(std::move(cfg)), vocab_(std::move(vocab)) {
  cfg_.validate();
  const std::size_t D = cfg_.state_dim(), F = cfg_.filters_per_width;
  word_table_ = init_embedding_table(vocab_, cfg_.word_embed_dim, rng, pretrained);
  pos_table_ = tensor::uniform({kPosVocabSize, cfg_.pos_embed_dim}, -kEmbeddingInitScale, kEmbeddingInitScale, rng);
  std::fill_n(pos_table_.mutable_values().begin(), cfg_.pos_embed_dim, 0.0);
  fwd_ = make_gru(cfg_.gru_input_dim(), cfg_.gru_hidden, rng);
  bwd_ = make_gru(cfg_.gru_input_dim(), cfg_.gru_hidden, rng);
  for (std::size_t w : cfg_.filter_widths)
    banks_.push_back({w, tensor::glorot_uniform({w * D, F}, w * D, F, rng), Tensor::zeros({F}, true)});
  hidden_w_ = tensor::glorot_uniform(cfg_.attention_dim(), cfg_.penultimate_dim, rng);
  hidden_b_ = Tensor::zeros({cfg_.penultimate_dim}, true);
  out_w_ = tensor::glorot_uniform(cfg_.penultimate_dim, cfg_.num_classes, rng);
  out_b_ = Tensor::zeros({cfg_.num_classes}, true);
}

EncodedTweet SubModel::encode(const text::CleanedTweet& t) const {
  return asc::encode(tokens_of(t, cfg_.variant), vocab_, cfg_.seq_len);
}

Tensor SubModel::embed(const EncodedTweet& x) const {
  if (x.words.size() != cfg_.seq_len || x.pos.size() != cfg_.seq_len)
    throw ShapeError("sub-model " + cfg_.slot + ": input has " + std::to_string(x.words.size()) + " ids, expected " +
                     std::to_string(cfg_.seq_len));
  return tensor::concat({tensor::embedding_lookup(word_table_, x.words, embeddings_trainable_),
                         tensor::embedding_lookup(pos_table_, x.pos, embeddings_trainable_)},
                        1);
}

Tensor SubModel::attention(const EncodedTweet& x) const {
  return tensor::conv_maxpool(tensor::bi_gru(embed(x), fwd_, bwd_), banks_);
}

Tensor SubModel::penultimate(const std::vector<const EncodedTweet*>& batch) const {
  if (batch.empty()) throw ShapeError("sub-model " + cfg_.slot + ": empty batch");
  std::vector<Tensor> rows;
  rows.reserve(batch.size());
  for (const auto* x : batch) rows.push_back(tensor::reshape(attention(*x), {1, cfg_.attention_dim()}));
  Tensor a = rows.size() == 1 ? rows.front() : tensor::concat(rows, 0);
  return tensor::tanh(tensor::dense(a, hidden_w_, hidden_b_));
}

Tensor SubModel::probs(const std::vector<const EncodedTweet*>& batch) const {
  return tensor::softmax(tensor::dense(penultimate(batch), out_w_, out_b_), 1);
}

SubModelTrace SubModel::trace(const EncodedTweet& x) const {
  SubModelTrace t;
  t.inputs = embed(x);
  t.states = tensor::bi_gru(t.inputs, fwd_, bwd_);
  t.attention = tensor::conv_maxpool(t.states, banks_);
  t.penultimate = tensor::tanh(tensor::dense(tensor::reshape(t.attention, {1, cfg_.attention_dim()}), hidden_w_, hidden_b_));
  t.probs = tensor::softmax(tensor::dense(t.penultimate, out_w_, out_b_), 1);
  return t;
}

std::vector<tensor::NamedParam> SubModel::params(const std::string& prefix, bool with_output) const {
  std::vector<tensor::NamedParam> p = {{prefix + "word_embedding", word_table_},
                                       {prefix + "pos_embedding", pos_table_},
                                       {prefix + "gru_fwd/w", fwd_.w},
                                       {prefix + "gru_fwd/u", fwd_.u},
                                       {prefix + "gru_fwd/b", fwd_.b},
                                       {prefix + "gru_bwd/w", bwd_.w},
                                       {prefix + "gru_bwd/u", bwd_.u},
                                       {prefix + "gru_bwd/b", bwd_.b}};
  for (const auto& b : banks_) {
    const std::string w = std::to_string(b.width);
    p.push_back({prefix + "conv" + w + "/kernel", b.kernel});
    p.push_back({prefix + "conv" + w + "/bias", b.bias});
  }
  p.push_back({prefix + "hidden/w", hidden_w_});
  p.push_back({prefix + "hidden/b", hidden_b_});
  if (with_output) {
    p.push_back({prefix + "output/w", out_w_});
    p.push_back({prefix + "output/b", out_b_});
  }
  return p;
}

void SubModel::set_embeddings_trainable(bool on) {
  embeddings_trainable_ = on;
  word_table_.set_requires_grad(on);
  pos_table_.set_requires_grad(on);
  if (!on) {
    word_table_.clear_grad();
    pos_table_.clear_grad();
  }
}

}  // namespace ascnet::asc

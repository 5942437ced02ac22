#pragma once

// Small corpora and model configurations shared by the unit and acceptance
// tests.

#include <string>
#include <vector>

#include "ascnet/asc/model.hpp"
#include "ascnet/asc/train.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/text/dictionaries.hpp"
#include "ascnet/text/pipeline.hpp"

namespace fixtures {

inline const ascnet::text::ReplacementDictionaries& dicts() {
  static const auto d = ascnet::text::ReplacementDictionaries::load(ascnet::text::default_dict_dir());
  return d;
}

inline std::vector<ascnet::text::CleanedTweet> clean_all(const std::vector<std::string>& texts) {
  std::vector<ascnet::text::CleanedTweet> out;
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.push_back(ascnet::text::clean({"t" + std::to_string(i), texts[i]}, dicts()));
  return out;
}

// 20 tweets, each class marked by its own words inside shared filler.
struct Labeled {
  std::vector<ascnet::text::CleanedTweet> tweets;
  std::vector<ascnet::asc::Sentiment> labels;
};

inline Labeled sentiment_corpus(std::size_t n = 20, std::uint64_t seed = 11) {
  using ascnet::asc::Sentiment;
  const std::vector<std::string> pos = {"happy", "great", "love", "wonderful", "awesome"};
  const std::vector<std::string> neu = {"meeting", "report", "schedule", "tuesday", "office"};
  const std::vector<std::string> neg = {"awful", "hate", "terrible", "angry", "worst"};
  const std::vector<std::string> filler = {"the", "a", "today", "this", "my", "we", "it", "was", "really", "just"};
  ascnet::Rng rng(seed);
  Labeled out;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto cls = static_cast<Sentiment>(i % 3);
    const auto& pool = cls == Sentiment::positive ? pos : cls == Sentiment::neutral ? neu : neg;
    std::string t;
    const std::size_t len = 4 + rng.below(5);
    const std::size_t at = rng.below(len);
    for (std::size_t k = 0; k < len; ++k) {
      if (!t.empty()) t += ' ';
      t += k == at ? pool[rng.below(pool.size())] : filler[rng.below(filler.size())];
    }
    texts.push_back(t);
    out.labels.push_back(cls);
  }
  out.tweets = clean_all(texts);
  return out;
}

inline ascnet::asc::Vocab vocab_of(const std::vector<ascnet::text::CleanedTweet>& tweets,
                                   ascnet::asc::CleaningVariant v) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& t : tweets) sentences.push_back(ascnet::text::surfaces(ascnet::asc::tokens_of(t, v)));
  return ascnet::asc::Vocab::build(sentences);
}

// Sub-model config with narrow layers; the embedding width keeps its
// slot's value unless `word_dim` overrides it.
inline ascnet::asc::SubModelConfig small_config(const std::string& slot, std::size_t seq_len, std::size_t hidden,
                                                std::size_t filters, std::size_t penultimate,
                                                std::size_t word_dim = 0) {
  auto c = ascnet::asc::SubModelConfig::canonical(slot);
  c.seq_len = seq_len;
  c.gru_hidden = hidden;
  c.filters_per_width = filters;
  c.penultimate_dim = penultimate;
  if (word_dim) c.word_embed_dim = word_dim;
  return c;
}

inline std::vector<ascnet::asc::SubModelConfig> small_configs(std::size_t seq_len, std::size_t hidden,
                                                              std::size_t filters, std::size_t penultimate,
                                                              std::size_t word_scale = 1) {
  std::vector<ascnet::asc::SubModelConfig> out;
  for (const auto& s : ascnet::asc::kSlots) {
    auto c = small_config(s, seq_len, hidden, filters, penultimate);
    c.word_embed_dim /= word_scale;
    out.push_back(c);
  }
  return out;
}

inline ascnet::asc::AscModel small_asc(const std::vector<ascnet::text::CleanedTweet>& tweets,
                                       const std::vector<ascnet::asc::SubModelConfig>& cfgs, std::uint64_t seed) {
  ascnet::Rng rng(seed);
  return ascnet::asc::build_asc(cfgs, vocab_of(tweets, ascnet::asc::CleaningVariant::simple),
                                vocab_of(tweets, ascnet::asc::CleaningVariant::complex), rng);
}

}  // namespace fixtures

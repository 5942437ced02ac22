#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "ascnet/text/token.hpp"

namespace ascnet::asc {

// Word ids: 0 is padding, 1 is the unknown word, real words start at 2.
class Vocab {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;

  Vocab();
  // Words seen at least `min_count` times, most frequent first, ties in
  // byte order; deterministic for a given corpus.
  static Vocab build(const std::vector<std::vector<std::string>>& sentences, std::size_t min_count = 1);
  static Vocab from_words(const std::vector<std::string>& words);  // words[0..1] must be the specials

  std::size_t add(const std::string& word);
  std::size_t id(const std::string& word) const;  // kUnk when absent
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  const std::string& word(std::size_t id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

// POS ids: 0 is padding, tags map to 1..25.
inline constexpr std::size_t kPosVocabSize = 26;

struct EncodedTweet {
  std::vector<std::size_t> words;  // exactly seq_len ids, zero padded at the end
  std::vector<std::size_t> pos;
};

// Truncates to `seq_len` tokens and pads with id 0 after the last token.
EncodedTweet encode(const std::vector<text::Token>& tokens, const Vocab& vocab, std::size_t seq_len);

}  // namespace ascnet::asc

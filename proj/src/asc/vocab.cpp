#include "ascnet/asc/vocab.hpp"

#include <algorithm>
#include <map>

#include "ascnet/common/error.hpp"

namespace ascnet::asc {

Vocab::Vocab() {
  add("<pad>");
  add("<unk>");
}

std::size_t Vocab::add(const std::string& word) {
  const auto [it, fresh] = index_.emplace(word, words_.size());
  if (fresh) words_.push_back(word);
  return it->second;
}

std::size_t Vocab::id(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? kUnk : it->second;
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& sentences, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences)
    for (const auto& w : s) ++counts[w];
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocab v;
  for (const auto& [w, c] : ranked)
    if (c >= min_count && w != "<pad>" && w != "<unk>") v.add(w);
  return v;
}

Vocab Vocab::from_words(const std::vector<std::string>& words) {
  if (words.size() < 2 || words[0] != "<pad>" || words[1] != "<unk>")
    throw DataError("vocabulary must start with <pad> and <unk>");
  Vocab v;
  for (std::size_t i = 2; i < words.size(); ++i)
    if (v.add(words[i]) != i) throw DataError("duplicate vocabulary word '" + words[i] + "'");
  return v;
}

EncodedTweet encode(const std::vector<text::Token>& tokens, const Vocab& vocab, std::size_t seq_len) {
  EncodedTweet e;
  e.words.assign(seq_len, Vocab::kPad);
  e.pos.assign(seq_len, 0);
  for (std::size_t i = 0; i < std::min(seq_len, tokens.size()); ++i) {
    e.words[i] = vocab.id(tokens[i].surface);
    e.pos[i] = text::tag_id(tokens[i].pos);
    if (e.pos[i] == 0) throw DataError("token '" + tokens[i].surface + "' carries no valid POS tag");
  }
  return e;
}

}  // namespace ascnet::asc

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ascnet::text {

// Phrase table for longest-match replacement over token sequences. Keys are
// space-separated lower-case token strings.
class PhraseTable {
 public:
  void insert(const std::string& phrase, std::string value);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_length() const { return max_len_; }
  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  // Returns the value for `words[pos, pos+len)`, or nullptr.
  const std::string* find(const std::vector<std::string>& words, std::size_t pos, std::size_t len) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::size_t max_len_ = 0;
};

inline const std::vector<std::string> kEntityKeywords = {"_date_", "_number_", "_brand_", "_place_", "_name_"};

struct ReplacementDictionaries {
  std::map<std::string, std::string, std::less<>> synonyms;
  PhraseTable wiki;
  PhraseTable ner;
  std::map<std::string, std::string, std::less<>> lemmas;
  std::map<std::string, std::string, std::less<>> emoji_groups;

  // Reads synonyms.tsv, wiki.tsv, ner.tsv, lemmas.tsv and emoji_groups.tsv
  // from `dir`. Checks the invariants: NER values come from kEntityKeywords
  // and no synonym maps onto another synonym key.
  static ReplacementDictionaries load(const std::filesystem::path& dir);
  void validate() const;
};

// Directory of the dictionaries shipped with the source tree.
std::filesystem::path default_dict_dir();

}  // namespace ascnet::text

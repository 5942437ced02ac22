#include "ascnet/text/dictionaries.hpp"

#include <algorithm>
#include <cstdlib>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/common/tsv.hpp"

namespace ascnet::text {

void PhraseTable::insert(const std::string& phrase, std::string value) {
  const auto words = str::split_ws(phrase);
  if (words.empty()) throw DataError("empty phrase");
  max_len_ = std::max(max_len_, words.size());
  entries_[str::join(words, " ")] = std::move(value);
}

const std::string* PhraseTable::find(const std::vector<std::string>& words, std::size_t pos, std::size_t len) const {
  std::string key;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i > pos) key += ' ';
    key += words[i];
  }
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::map<std::string, std::string, std::less<>> read_map(const std::filesystem::path& p) {
  auto plain = tsv::read_pairs(p);
  return {plain.begin(), plain.end()};
}

PhraseTable read_phrases(const std::filesystem::path& p) {
  PhraseTable t;
  for (auto& [k, v] : tsv::read_pairs(p)) t.insert(k, v);
  return t;
}

void check_keyword(const std::string& v, const char* what) {
  if (v.empty() || std::any_of(v.begin(), v.end(), [](char c) { return c == ' ' || c == '\t'; }))
    throw DataError(std::string(what) + ": replacement '" + v + "' must be a single token");
}

}  // namespace

ReplacementDictionaries ReplacementDictionaries::load(const std::filesystem::path& dir) {
  ReplacementDictionaries d;
  d.synonyms = read_map(dir / "synonyms.tsv");
  d.lemmas = read_map(dir / "lemmas.tsv");
  d.emoji_groups = read_map(dir / "emoji_groups.tsv");
  d.ner = read_phrases(dir / "ner.tsv");
  d.wiki = read_phrases(dir / "wiki.tsv");
  d.validate();
  return d;
}

void ReplacementDictionaries::validate() const {
  for (const auto& [k, v] : synonyms) {
    check_keyword(v, "synonyms");
    if (k == v) throw DataError("synonyms: '" + k + "' maps to itself");
    if (synonyms.count(v)) throw DataError("synonyms: '" + k + "' -> '" + v + "' chains into another entry");
  }
  for (const auto& [k, v] : lemmas) check_keyword(v, "lemmas");
  for (const auto& [k, v] : emoji_groups) check_keyword(v, "emoji_groups");
  for (const auto& [k, v] : wiki.entries()) check_keyword(v, "wiki");
  for (const auto& [k, v] : ner.entries())
    if (std::find(kEntityKeywords.begin(), kEntityKeywords.end(), v) == kEntityKeywords.end())
      throw DataError("ner: '" + k + "' maps to '" + v + "', not an entity keyword");
}

std::filesystem::path default_dict_dir() {
  if (const char* env = std::getenv("ASCNET_DATA_DIR")) return std::filesystem::path(env) / "dicts";
  return std::filesystem::path(ASCNET_DATA_DIR) / "dicts";
}

}  // namespace ascnet::text

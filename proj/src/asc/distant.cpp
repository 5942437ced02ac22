#include "ascnet/asc/distant.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/lex/lexicons.hpp"

namespace ascnet::asc {

std::vector<DistantDatasetSpec> load_distant_keywords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open keyword file " + path.string());
  std::map<std::string, std::vector<std::string>> by_emotion;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (str::trim(line).empty() || line[0] == '#') continue;
    auto f = str::split(line, '\t');
    if (f.size() != 2) throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected emotion<TAB>keyword");
    auto emotion = std::string(str::trim(f[0]));
    if (std::find(lex::kAffectEmotions.begin(), lex::kAffectEmotions.end(), emotion) == lex::kAffectEmotions.end())
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": unknown emotion '" + emotion + "'");
    by_emotion[emotion].push_back(str::to_lower(str::trim(f[1])));
  }
  std::vector<DistantDatasetSpec> out;
  for (const auto& e : lex::kAffectEmotions) {
    auto it = by_emotion.find(e);
    if (it == by_emotion.end()) throw DataError(path.string() + ": no keywords for " + e);
    out.push_back({e, it->second});
  }
  return out;
}

std::filesystem::path default_distant_keywords() { return lex::default_lexicon_dir() / "distant_keywords.tsv"; }

bool has_keyword(const text::CleanedTweet& t, const std::vector<std::string>& keywords) {
  for (const auto& tok : t.simple) {
    std::string_view s = tok.surface;
    if (!s.empty() && s[0] == '#') s.remove_prefix(1);
    if (std::find(keywords.begin(), keywords.end(), s) != keywords.end()) return true;
  }
  return false;
}

std::vector<DistantSplit> build_distant_datasets(const std::vector<text::CleanedTweet>& corpus,
                                                 const std::vector<DistantDatasetSpec>& specs) {
  std::vector<DistantSplit> out;
  for (const auto& spec : specs) {
    if (spec.keywords.empty()) throw UsageError("keyword list for " + spec.emotion + " is empty");
    DistantSplit s{spec.emotion, {}, {}};
    for (std::size_t i = 0; i < corpus.size(); ++i)
      (has_keyword(corpus[i], spec.keywords) ? s.with : s.without).push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

void distant_training_set(const DistantSplit& split, std::vector<std::size_t>& indices,
                          std::vector<Sentiment>& labels) {
  indices.clear();
  labels.clear();
  for (auto i : split.with) {
    indices.push_back(i);
    labels.push_back(Sentiment::positive);
  }
  for (auto i : split.without) {
    indices.push_back(i);
    labels.push_back(Sentiment::negative);
  }
}

}  // namespace ascnet::asc

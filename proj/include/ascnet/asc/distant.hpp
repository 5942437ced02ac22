#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ascnet/asc/train.hpp"
#include "ascnet/text/pipeline.hpp"

namespace ascnet::asc {

struct DistantDatasetSpec {
  std::string emotion;                // one of lex::kAffectEmotions
  std::vector<std::string> keywords;  // lowercase single tokens
};

// Index partition of a corpus by keyword presence.
struct DistantSplit {
  std::string emotion;
  std::vector<std::size_t> with;     // tweets holding at least one keyword
  std::vector<std::size_t> without;  // the rest
};

// Reads `emotion<TAB>keyword` lines; every emotion needs at least one word.
std::vector<DistantDatasetSpec> load_distant_keywords(const std::filesystem::path& path);
std::filesystem::path default_distant_keywords();

bool has_keyword(const text::CleanedTweet& t, const std::vector<std::string>& keywords);

// One split per spec; matching looks at simple-cleaned tokens.
std::vector<DistantSplit> build_distant_datasets(const std::vector<text::CleanedTweet>& corpus,
                                                 const std::vector<DistantDatasetSpec>& specs);

// Training labels for one split: keyword tweets take the positive slot,
// the others the negative slot; the neutral slot stays unused.
void distant_training_set(const DistantSplit& split, std::vector<std::size_t>& indices,
                          std::vector<Sentiment>& labels);

}  // namespace ascnet::asc

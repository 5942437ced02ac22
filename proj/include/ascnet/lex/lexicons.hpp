#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ascnet::lex {

// The twelve named emotion categories, fixed; a lexicon file adds four more.
inline const std::array<std::string, 12> kFixedCategories = {
    "anger", "disappointed", "fear", "hopeful", "joy", "lonely",
    "love", "negative", "neutral", "positive", "sadness", "surprise"};
inline constexpr std::size_t kCategoryCount = 16;
inline const std::array<double, 4> kCategoryScores = {0.5, 1.0, 1.5, 2.0};
inline constexpr double kCategoryCap = 5.0;

struct CategoryEntry {
  std::size_t category;  // index into CategoryLexicon::categories
  double score;          // one of kCategoryScores
};

struct CategoryLexicon {
  std::vector<std::string> categories;  // fixed twelve, then the extra four
  std::map<std::string, std::vector<CategoryEntry>, std::less<>> entries;

  std::size_t entry_count() const;
  // `token<TAB>category<TAB>score` lines. The file must use exactly four
  // categories beyond kFixedCategories; they are appended in order of first
  // appearance.
  static CategoryLexicon load(const std::filesystem::path& path);
};

inline const std::array<std::string, 4> kAffectEmotions = {"anger", "fear", "joy", "sadness"};

struct AffectLexicon {
  std::map<std::string, std::array<double, 4>, std::less<>> entries;  // kAffectEmotions order

  // Accepts `word<TAB>emotion<TAB>score` and the original lexicon's
  // `term<TAB>score<TAB>AffectDimension` layout (header line skipped).
  // Emotions outside kAffectEmotions are ignored; scores must lie in [0,1].
  static AffectLexicon load(const std::filesystem::path& path);
};

// Signed word strengths for the polarity scorer.
struct PolarityLexicon {
  std::map<std::string, double, std::less<>> entries;  // in [-1,1], nonzero
  std::set<std::string, std::less<>> negators;

  // `word<TAB>positive|negative<TAB>strength` with strength in (0,1].
  static PolarityLexicon load(const std::filesystem::path& path, const std::filesystem::path& negators);
};

struct LexiconSet {
  CategoryLexicon categories;
  AffectLexicon affect;
  PolarityLexicon polarity;
  std::set<std::string, std::less<>> magnifiers;
  std::set<std::string, std::less<>> diminishers;

  // categories.tsv, affect.tsv, polarity.tsv, negators.txt, magnifiers.txt
  // and diminishers.txt from `dir`; `affect_override` replaces affect.tsv
  // (for pointing at the full lexicon).
  static LexiconSet load(const std::filesystem::path& dir, const std::filesystem::path& affect_override = {});
};

std::filesystem::path default_lexicon_dir();

}  // namespace ascnet::lex

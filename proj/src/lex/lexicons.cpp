#include "ascnet/lex/lexicons.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/common/tsv.hpp"

namespace ascnet::lex {

namespace {

std::string where(const std::filesystem::path& p, std::size_t line) { return p.string() + ":" + std::to_string(line) + ": "; }

bool try_number(std::string_view s, double& out) {
  s = str::trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::set<std::string, std::less<>> read_word_set(const std::filesystem::path& p) {
  std::set<std::string, std::less<>> out;
  for (const auto& w : tsv::read_lines(p)) out.insert(str::to_lower(w));
  return out;
}

}  // namespace

std::size_t CategoryLexicon::entry_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : entries) n += v.size();
  return n;
}

CategoryLexicon CategoryLexicon::load(const std::filesystem::path& path) {
  CategoryLexicon lex;
  lex.categories.assign(kFixedCategories.begin(), kFixedCategories.end());
  tsv::for_each_row(path, [&](std::size_t line, const std::vector<std::string>& f) {
    if (f.size() != 3) throw DataError(where(path, line) + "expected token<TAB>category<TAB>score");
    const std::string token = str::to_lower(str::trim(f[0]));
    const std::string cat = str::to_lower(str::trim(f[1]));
    const double score = str::parse_double(f[2]);
    if (std::find(kCategoryScores.begin(), kCategoryScores.end(), score) == kCategoryScores.end())
      throw DataError(where(path, line) + "score must be one of 0.5, 1, 1.5, 2");
    auto it = std::find(lex.categories.begin(), lex.categories.end(), cat);
    if (it == lex.categories.end()) {
      if (lex.categories.size() == kCategoryCount)
        throw DataError(where(path, line) + "category '" + cat + "' exceeds the 16-category inventory");
      lex.categories.push_back(cat);
      it = lex.categories.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - lex.categories.begin());
    auto& slot = lex.entries[token];
    for (const auto& e : slot)
      if (e.category == idx) throw DataError(where(path, line) + "duplicate entry for '" + token + "' in " + cat);
    slot.push_back({idx, score});
  });
  if (lex.categories.size() != kCategoryCount)
    throw DataError(path.string() + ": expected 16 categories, found " + std::to_string(lex.categories.size()));
  return lex;
}

AffectLexicon AffectLexicon::load(const std::filesystem::path& path) {
  AffectLexicon lex;
  tsv::for_each_row(path, [&](std::size_t line, const std::vector<std::string>& f) {
    if (f.size() != 3) throw DataError(where(path, line) + "expected three tab-separated fields");
    double score = 0.0;
    std::string emotion;
    if (try_number(f[1], score)) {
      emotion = f[2];
    } else if (try_number(f[2], score)) {
      emotion = f[1];
    } else {
      if (lex.entries.empty()) return;  // header row
      throw DataError(where(path, line) + "no numeric score");
    }
    if (!(score >= 0.0 && score <= 1.0)) throw DataError(where(path, line) + "score outside [0,1]");
    emotion = str::to_lower(str::trim(emotion));
    const auto it = std::find(kAffectEmotions.begin(), kAffectEmotions.end(), emotion);
    if (it == kAffectEmotions.end()) return;
    auto& row = lex.entries.try_emplace(str::to_lower(str::trim(f[0])), std::array<double, 4>{}).first->second;
    row[static_cast<std::size_t>(it - kAffectEmotions.begin())] = score;
  });
  return lex;
}

PolarityLexicon PolarityLexicon::load(const std::filesystem::path& path, const std::filesystem::path& negators) {
  PolarityLexicon lex;
  tsv::for_each_row(path, [&](std::size_t line, const std::vector<std::string>& f) {
    if (f.size() != 3) throw DataError(where(path, line) + "expected word<TAB>polarity<TAB>strength");
    const std::string side = str::to_lower(str::trim(f[1]));
    const double s = str::parse_double(f[2]);
    if (!(s > 0.0 && s <= 1.0)) throw DataError(where(path, line) + "strength outside (0,1]");
    double sign = 0.0;
    if (side == "positive") sign = 1.0;
    else if (side == "negative") sign = -1.0;
    else throw DataError(where(path, line) + "polarity must be positive or negative");
    if (!lex.entries.emplace(str::to_lower(str::trim(f[0])), sign * s).second)
      throw DataError(where(path, line) + "duplicate word");
  });
  lex.negators = read_word_set(negators);
  return lex;
}

LexiconSet LexiconSet::load(const std::filesystem::path& dir, const std::filesystem::path& affect_override) {
  LexiconSet s;
  s.categories = CategoryLexicon::load(dir / "categories.tsv");
  s.affect = AffectLexicon::load(affect_override.empty() ? dir / "affect.tsv" : affect_override);
  s.polarity = PolarityLexicon::load(dir / "polarity.tsv", dir / "negators.txt");
  s.magnifiers = read_word_set(dir / "magnifiers.txt");
  s.diminishers = read_word_set(dir / "diminishers.txt");
  return s;
}

std::filesystem::path default_lexicon_dir() {
  if (const char* env = std::getenv("ASCNET_DATA_DIR")) return std::filesystem::path(env) / "lexicons";
  return std::filesystem::path(ASCNET_DATA_DIR) / "lexicons";
}

}  // namespace ascnet::lex

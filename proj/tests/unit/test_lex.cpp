#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ascnet/common/error.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/lex/feature_table.hpp"
#include "ascnet/lex/features.hpp"
#include "doctest.h"

using namespace ascnet::lex;
namespace fs = std::filesystem;
using ascnet::text::CleanedTweet;

namespace {

const ascnet::text::ReplacementDictionaries& dicts() {
  static const auto d = ascnet::text::ReplacementDictionaries::load(ascnet::text::default_dict_dir());
  return d;
}

const LexiconSet& lexicons() {
  static const auto l = LexiconSet::load(default_lexicon_dir());
  return l;
}

CleanedTweet cleaned(const std::string& text) { return ascnet::text::clean({"t", text}, dicts()); }

FeatureVector fv(std::vector<std::pair<std::string, double>> items, const std::string& group = "g") {
  FeatureVector f;
  for (auto& [n, v] : items) f.add(n, v, group);
  return f;
}

CategoryLexicon toy_categories() {
  CategoryLexicon lex;
  lex.categories.assign(kFixedCategories.begin(), kFixedCategories.end());
  for (const char* extra : {"disgust", "anticipation", "trust", "shame"}) lex.categories.push_back(extra);
  auto idx = [&](const std::string& c) {
    return static_cast<std::size_t>(std::find(lex.categories.begin(), lex.categories.end(), c) - lex.categories.begin());
  };
  lex.entries["yay"].push_back({idx("joy"), 2.0});
  lex.entries["woohoo"].push_back({idx("joy"), 2.0});
  lex.entries["party"].push_back({idx("joy"), 2.0});
  lex.entries["grr"].push_back({idx("anger"), 1.5});
  return lex;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("syntactic features") {
  const auto& l = lexicons();
  auto syn = [&](const std::string& s) { return syntactic_features(cleaned(s), l.magnifiers, l.diminishers); };
  CHECK(syn("wowww that is great").at("long") == 1.0);
  CHECK(syn("wow").at("long") == 0.0);
  CHECK(is_elongated("soooo"));
  CHECK_FALSE(is_elongated("good"));
  const auto eight = syn("one two three four five six seven eight");
  CHECK(std::abs(eight.at("length") - 2.0794415416798357) < 1e-15);
  CHECK(syn("hello").at("length") == 0.0);
  const auto f = syn("I am SO incredibly happy but hardly rested @bob #Irony");
  CHECK(f.at("mag") == 2.0);  // "so", "incredibly"
  CHECK(f.at("dim") == 1.0);
  CHECK(f.at("caps") == 1.0);
  CHECK(f.at("at") == 1.0);
  CHECK(f.at("hash") == 1.0);
  CHECK(f.at("irony") == 1.0);
  const auto plain = syn("I am fine");
  for (const char* k : {"caps", "at", "hash", "irony", "long"}) CHECK(plain.at(k) == 0.0);
  CHECK(syn("#sarcasm is great").at("irony") == 1.0);
  CHECK(syn("#ironyfree").at("irony") == 0.0);
  CHECK(syn("see http://x.co/#frag").at("hash") == 0.0);
  CHECK(f.names == std::vector<std::string>{"mag", "dim", "length", "long", "caps", "hash", "at", "irony"});
}

TEST_CASE("category features") {
  const auto lex = toy_categories();
  auto cat = [&](const std::string& s) { return category_features(cleaned(s), lex); };
  const auto capped = cat("yay woohoo party");
  CHECK(capped.size() == 16);
  CHECK(capped.at("cat_joy") == 5.0);
  const auto none = cat("nothing here");
  for (double v : none.values) CHECK(v == 0.0);
  const auto one = cat("grr");
  CHECK(one.at("cat_anger") == 1.5);
  double rest = 0;
  for (std::size_t i = 0; i < one.size(); ++i)
    if (one.names[i] != "cat_anger") rest += one.values[i];
  CHECK(rest == 0.0);
}

TEST_CASE("shipped category lexicon") {
  const auto& lex = lexicons().categories;
  CHECK(lex.entry_count() == 338);
  CHECK(lex.categories.size() == 16);
  for (std::size_t i = 0; i < kFixedCategories.size(); ++i) CHECK(lex.categories[i] == kFixedCategories[i]);
  for (const auto& [tok, entries] : lex.entries)
    for (const auto& e : entries) CHECK((e.score == 0.5 || e.score == 1.0 || e.score == 1.5 || e.score == 2.0));
  // Emoji keywords produced by the cleaning step are scored.
  const auto f = category_features(cleaned("so happy :-)"), lex);
  CHECK(f.at("cat_joy") == 3.5);
}

TEST_CASE("category lexicon loader rejects bad files") {
  const fs::path p = fs::temp_directory_path() / "ascnet_cat_bad.tsv";
  {
    std::ofstream(p) << "yay\tjoy\t0.7\n";
  }
  CHECK_THROWS_AS(CategoryLexicon::load(p), ascnet::DataError);
  {
    std::ofstream(p) << "yay\tjoy\t2\n";  // only 12 categories
  }
  CHECK_THROWS_WITH_AS(CategoryLexicon::load(p), doctest::Contains("16 categories"), ascnet::DataError);
  fs::remove(p);
}

TEST_CASE("NRC hashtag features") {
  AffectLexicon lex;
  lex.entries["scary"] = {0, 0.3, 0, 0};
  lex.entries["panic"] = {0, 0.8, 0, 0};
  lex.entries["rage"] = {0.6, 0, 0, 0};
  lex.entries["badday"] = {0.2, 0, 0, 0.5};
  lex.entries["sad"] = {0, 0, 0, 0.9};
  auto nrc = [&](const std::string& s) { return nrc_hashtag_features(cleaned(s), lex).values; };
  CHECK(nrc("so #scary and #panic") == std::vector<double>{0, 0.8, 0, 0});
  CHECK(nrc("no tags at all scary") == std::vector<double>{0, 0, 0, 0});
  CHECK(nrc("#rage") == std::vector<double>{0.6, 0, 0, 0});
  CHECK(nrc("#BadDay") == std::vector<double>{0.2, 0, 0, 0.5});  // whole body
  CHECK(nrc("#SoSad") == std::vector<double>{0, 0, 0, 0.9});     // split word
  const auto names = nrc_hashtag_features(cleaned("x"), lex).names;
  CHECK(names == std::vector<std::string>{"hash_anger", "hash_fear", "hash_joy", "hash_sadness"});
}

TEST_CASE("affect lexicon accepts both column layouts") {
  const fs::path p = fs::temp_directory_path() / "ascnet_affect.tsv";
  {
    std::ofstream(p) << "term\tscore\tAffectDimension\nrage\t0.9\tanger\ncalm\tjoy\t0.25\nodd\t0.5\ttrust\n";
  }
  const auto lex = AffectLexicon::load(p);
  CHECK(lex.entries.at("rage")[0] == 0.9);
  CHECK(lex.entries.at("calm")[2] == 0.25);
  CHECK(lex.entries.count("odd") == 0);
  {
    std::ofstream(p) << "rage\t1.5\tanger\n";
  }
  CHECK_THROWS_AS(AffectLexicon::load(p), ascnet::DataError);
  fs::remove(p);
}

TEST_CASE("polarity scorer") {
  PolarityLexicon lex;
  lex.entries["good"] = 1.0;
  lex.entries["great"] = 0.5;
  lex.entries["bad"] = -1.0;
  lex.negators = {"not"};
  auto pol = [&](const std::string& s) { return polarity_scorer(cleaned(s), lex); };
  const auto all_pos = pol("good great");
  CHECK(all_pos.at("vader_pos") == 1.0);
  CHECK(all_pos.at("blob") > 0.0);
  const auto none = pol("the weather");
  CHECK(none.values == std::vector<double>{0, 1, 0, 0});
  CHECK(pol("good but bad").at("blob") == 0.0);
  const auto negated = pol("not good");
  CHECK(negated.at("vader_neg") == 0.5);
  CHECK(negated.at("blob") == -1.0);
  CHECK(none.names == std::vector<std::string>{"vader_neg", "vader_neu", "vader_pos", "blob"});
}

TEST_CASE("assemble") {
  CHECK(assemble({}).size() == 0);
  const auto a = fv({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}});
  FeatureVector b;
  for (int i = 0; i < 16; ++i) b.add("x" + std::to_string(i), i, "h");
  const auto ab = assemble({a, b});
  CHECK(ab.size() == 20);
  CHECK(ab.group.at("x3") == "h");
  CHECK_THROWS_AS(assemble({fv({{"joy", 1}}), fv({{"joy", 2}})}), ascnet::DataError);
  const auto ba = assemble({b, a});
  for (const auto& n : ab.names) CHECK(ab.at(n) == ba.at(n));
  FeatureVector bad;
  CHECK_THROWS_AS(bad.add("nan", std::nan(""), "g"), ascnet::NumericalError);
}

TEST_CASE("prune_sparse") {
  std::vector<FeatureVector> rows;
  for (int r = 0; r < 10; ++r) rows.push_back(fv({{"seven", r < 7 ? 1.0 : 0.0}, {"eight", r < 8 ? -2.0 : 0.0}, {"zero", 0}}));
  CHECK(prune_sparse(rows) == std::vector<std::string>{"eight"});
  CHECK(prune_sparse(rows, 0) == std::vector<std::string>{"seven", "eight", "zero"});
  CHECK(prune_sparse(rows, 7) == std::vector<std::string>{"seven", "eight"});
  rows.push_back(fv({{"eight", 1}, {"seven", 1}, {"zero", 0}}));
  CHECK_THROWS_AS(prune_sparse(rows), ascnet::DataError);
}

TEST_CASE("prune_sparse is monotone in min_support (property)") {
  ascnet::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FeatureVector> rows(12);
    for (auto& r : rows)
      for (int c = 0; c < 6; ++c) r.add("f" + std::to_string(c), rng.uniform() < 0.15 * c ? 1.0 : 0.0, "g");
    std::size_t prev = 7;
    for (std::size_t k = 0; k <= 13; ++k) {
      const auto kept = prune_sparse(rows, k);
      CHECK(kept.size() <= prev);
      prev = kept.size();
    }
  }
}

TEST_CASE("feature values stay in their documented ranges (property)") {
  const std::vector<std::string> words = {"#Fear",  "happy", ":-)", "sooooo", "SAD",   "@x",    "not",  "good",
                                          "#irony", "rage",  "yay", "party",  "!!!",   "love",  "hate", "#SoScary",
                                          "very",   "hardly", "great", "awful", "amazing", "lol", "omg", "\xF0\x9F\x98\x80"};
  ascnet::Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = 1 + rng.below(15); i < n; ++i) text += words[rng.below(words.size())] + " ";
    const auto f = lexical_features(cleaned(text), lexicons());
    CHECK(f.size() == 8 + 16 + 4 + 4);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto& n = f.names[i];
      const double v = f.values[i];
      CHECK(std::isfinite(v));
      if (n.rfind("cat_", 0) == 0) CHECK((v >= 0 && v <= 5));
      if (n.rfind("hash_", 0) == 0) CHECK((v >= 0 && v <= 1));
      if (n == "long" || n == "caps" || n == "hash" || n == "at" || n == "irony") CHECK((v == 0 || v == 1));
      if (n == "blob") CHECK((v >= -1 && v <= 1));
    }
    CHECK(std::abs(f.at("vader_neg") + f.at("vader_neu") + f.at("vader_pos") - 1.0) < 1e-12);
  }
}

TEST_CASE("feature CSV round trip") {
  std::vector<FeatureVector> rows = {fv({{"a", 0.1}, {"b", -3.25e-7}}, "ga"), fv({{"a", 1.0 / 3.0}, {"b", 0}}, "ga")};
  rows[0].group["b"] = "gb";
  rows[1].group["b"] = "gb";
  auto t = FeatureTable::from_rows({"id,1", "id\"2"}, rows);
  const fs::path p = fs::temp_directory_path() / "ascnet_features.csv";
  write_csv(p, t);
  const auto back = read_csv(p);
  CHECK(back.ids == t.ids);
  CHECK(back.names == t.names);
  CHECK(back.values.data == t.values.data);  // exact: shortest round-trip text
  CHECK(back.groups.at("b") == "gb");
  CHECK(back.group_names() == std::vector<std::string>{"ga", "gb"});
  const std::string first = slurp(p);
  write_csv(p, back);
  CHECK(slurp(p) == first);
  CHECK(first.substr(0, first.find('\n')) == "id,a,b");

  const auto sel = t.select({"b"});
  CHECK(sel.values.cols == 1);
  CHECK(sel.values(0, 0) == -3.25e-7);
  FeatureTable other = FeatureTable::from_rows(t.ids, {fv({{"c", 5}}), fv({{"c", 6}})});
  const auto joined = t.join(other);
  CHECK(joined.names == std::vector<std::string>{"a", "b", "c"});
  CHECK(joined.values(1, 2) == 6.0);
  CHECK_THROWS_AS(t.join(t), ascnet::DataError);
  CHECK_THROWS_AS(t.select({"zzz"}), ascnet::DataError);
  fs::remove(p);
  fs::remove(fs::path(p.string() + ".groups.tsv"));
}

#include "ascnet/lex/features.hpp"

#include <algorithm>
#include <cmath>

#include "ascnet/common/strings.hpp"
#include "ascnet/common/utf8.hpp"
#include "ascnet/text/tokenizer.hpp"

namespace ascnet::lex {

using text::TokenKind;

bool is_elongated(std::string_view word) {
  const auto cps = utf8::decode(word);
  for (std::size_t i = 2; i < cps.size(); ++i)
    if (cps[i].value == cps[i - 1].value && cps[i].value == cps[i - 2].value) return true;
  return false;
}

namespace {

bool all_caps_word(std::string_view w) {
  std::size_t upper = 0;
  for (char c : w) {
    if (c >= 'a' && c <= 'z') return false;
    upper += str::is_ascii_upper(c);
  }
  return upper >= 2;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

FeatureVector syntactic_features(const text::CleanedTweet& t, const std::set<std::string, std::less<>>& magnifiers,
                                 const std::set<std::string, std::less<>>& diminishers) {
  double mag = 0, dim = 0;
  for (const auto& tok : t.simple) {
    mag += magnifiers.count(tok.surface);
    dim += diminishers.count(tok.surface);
  }
  bool elongated = false, caps = false, hash = false, at = false, irony = false;
  for (const auto& tok : text::tokenize(t.source)) {
    if (tok.kind == TokenKind::Word) {
      elongated |= is_elongated(tok.surface);
      caps |= all_caps_word(tok.surface);
    }
    if (tok.kind != TokenKind::Url) {
      hash |= tok.surface.find('#') != std::string::npos;
      at |= tok.surface.find('@') != std::string::npos;
    }
    if (tok.kind == TokenKind::Hashtag) {
      const std::string body = str::to_lower(std::string_view(tok.surface).substr(1));
      irony |= body == "irony" || body == "sarcasm";
    }
  }
  FeatureVector f;
  f.add("mag", mag, "mag");
  f.add("dim", dim, "dim");
  f.add("length", t.simple.empty() ? 0.0 : std::log(static_cast<double>(t.simple.size())), "length");
  f.add("long", flag(elongated), "long");
  f.add("caps", flag(caps), "caps");
  f.add("hash", flag(hash), "hash");
  f.add("at", flag(at), "at");
  f.add("irony", flag(irony), "irony");
  return f;
}

FeatureVector category_features(const text::CleanedTweet& t, const CategoryLexicon& lex) {
  std::vector<double> sums(lex.categories.size(), 0.0);
  for (const auto& tok : t.simple) {
    const auto it = lex.entries.find(tok.surface);
    if (it == lex.entries.end()) continue;
    for (const auto& e : it->second) sums[e.category] += e.score;
  }
  FeatureVector f;
  for (std::size_t c = 0; c < sums.size(); ++c)
    f.add("cat_" + lex.categories[c], std::min(sums[c], kCategoryCap), "cat_" + lex.categories[c]);
  return f;
}

FeatureVector nrc_hashtag_features(const text::CleanedTweet& t, const AffectLexicon& lex) {
  std::array<double, 4> best{};
  auto visit = [&](const std::string& word) {
    const auto it = lex.entries.find(word);
    if (it == lex.entries.end()) return;
    for (std::size_t e = 0; e < best.size(); ++e) best[e] = std::max(best[e], it->second[e]);
  };
  for (const auto& tok : text::tokenize(t.source)) {
    if (tok.kind != TokenKind::Hashtag) continue;
    const std::string_view body = std::string_view(tok.surface).substr(1);
    visit(str::to_lower(body));
    for (const auto& part : text::split_hashtag(body)) visit(str::to_lower(part));
  }
  FeatureVector f;
  for (std::size_t e = 0; e < best.size(); ++e) f.add("hash_" + kAffectEmotions[e], best[e], "hash_affect");
  return f;
}

FeatureVector polarity_scorer(const text::CleanedTweet& t, const PolarityLexicon& lex) {
  constexpr std::size_t kNegationWindow = 3;
  const std::size_t n = t.simple.size();
  double pos = 0, neg = 0, signed_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = lex.entries.find(t.simple[i].surface);
    if (it == lex.entries.end()) continue;
    double s = it->second;
    for (std::size_t k = i >= kNegationWindow ? i - kNegationWindow : 0; k < i; ++k)
      if (lex.negators.count(t.simple[k].surface)) {
        s = -s;
        break;
      }
    (s > 0 ? pos : neg) += 1;
    signed_sum += s;
  }
  const double hits = pos + neg;
  FeatureVector f;
  f.add("vader_neg", n ? neg / n : 0.0, "vader");
  f.add("vader_neu", n ? (n - hits) / n : 1.0, "vader");
  f.add("vader_pos", n ? pos / n : 0.0, "vader");
  f.add("blob", hits ? signed_sum / hits : 0.0, "blob");
  return f;
}

FeatureVector lexical_features(const text::CleanedTweet& t, const LexiconSet& lex) {
  return assemble({syntactic_features(t, lex.magnifiers, lex.diminishers), category_features(t, lex.categories),
                   nrc_hashtag_features(t, lex.affect), polarity_scorer(t, lex.polarity)});
}

}  // namespace ascnet::lex

#pragma once

#include "ascnet/lex/feature_vector.hpp"
#include "ascnet/lex/lexicons.hpp"
#include "ascnet/text/pipeline.hpp"

namespace ascnet::lex {

// mag, dim, length, long, caps, hash, at, irony. Counts and the length use
// the simple token sequence; caps, elongation, '#', '@' and irony look at the
// source text, before hashtags are split and case is folded.
FeatureVector syntactic_features(const text::CleanedTweet& t, const std::set<std::string, std::less<>>& magnifiers,
                                 const std::set<std::string, std::less<>>& diminishers);

// A word counts as elongated when some character repeats three times in a row.
bool is_elongated(std::string_view word);

// One feature per category (cat_<name>): summed scores of matching simple
// tokens, capped at kCategoryCap.
FeatureVector category_features(const text::CleanedTweet& t, const CategoryLexicon& lex);

// hash_<emotion>: largest lexicon score over the tweet's hashtags, each
// hashtag looked up whole and by its split words.
FeatureVector nrc_hashtag_features(const text::CleanedTweet& t, const AffectLexicon& lex);

// vader_neg, vader_neu, vader_pos: shares of simple tokens that hit the
// negative / no / positive side of the lexicon; blob: mean signed strength of
// the hits. A negator among the three preceding tokens flips a hit.
FeatureVector polarity_scorer(const text::CleanedTweet& t, const PolarityLexicon& lex);

// All of the above, in that order.
FeatureVector lexical_features(const text::CleanedTweet& t, const LexiconSet& lex);

}  // namespace ascnet::lex

#pragma once

#include <string>
#include <vector>

#include "ascnet/text/dictionaries.hpp"
#include "ascnet/text/pos.hpp"
#include "ascnet/text/token.hpp"

namespace ascnet::text {

struct RawTweet {
  std::string id;
  std::string text;
};

struct CleanedTweet {
  std::string id;
  std::string source;
  std::vector<Token> simple;
  std::vector<Token> complex;
};

inline constexpr const char* kUrlKeyword = "twitter-url";
inline constexpr const char* kMentionKeyword = "twitter-entity";

// Replaces emoticon and emoji tokens that have a dictionary entry with the
// group keyword. Unknown emoji pass through.
std::vector<Token> group_emojis(std::vector<Token> tokens, const ReplacementDictionaries& dicts);

// Splits a hashtag body at case, digit and underscore boundaries:
// "NiceToFly" -> {"Nice","To","Fly"}, "NYCMarathon2018" -> {"NYC","Marathon","2018"}.
std::vector<std::string> split_hashtag(std::string_view body);

// URL and mention keywords, hashtag splitting, lower-casing and collapse of
// immediately repeated tokens.
std::vector<Token> regex_pass(std::vector<Token> tokens);

// Lemmas, then named entities (longest match), then synonyms, then wiki
// phrases (longest match); repeated until nothing changes.
std::vector<Token> complex_pass(std::vector<Token> tokens, const ReplacementDictionaries& dicts);

CleanedTweet clean(const RawTweet& raw, const ReplacementDictionaries& dicts,
                   const PosTagger& tagger = default_tagger());

}  // namespace ascnet::text

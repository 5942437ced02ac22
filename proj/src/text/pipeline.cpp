#include "ascnet/text/pipeline.hpp"

#include <algorithm>

#include "ascnet/common/error.hpp"
#include "ascnet/common/log.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/common/utf8.hpp"
#include "ascnet/text/tokenizer.hpp"

namespace ascnet::text {

namespace {

// Drops variation selectors and skin tone modifiers so that tinted or
// text-style variants share the entry of the plain emoji.
std::string strip_emoji_modifiers(std::string_view s) {
  std::string out;
  for (const auto& cp : utf8::decode(s)) {
    const char32_t c = cp.value;
    if (c == 0xFE0E || c == 0xFE0F || (c >= 0x1F3FB && c <= 0x1F3FF)) continue;
    out.append(s.substr(cp.offset, cp.length));
  }
  return out;
}

// ":)))" -> ":)"
std::string squeeze_tail(std::string s) {
  while (s.size() > 2 && s.back() == s[s.size() - 2]) s.pop_back();
  return s;
}

const std::string* lookup(const std::map<std::string, std::string, std::less<>>& m, std::string_view key) {
  const auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

std::vector<Token> replace_phrases(std::vector<Token> tokens, const PhraseTable& table) {
  if (table.empty()) return tokens;
  const auto words = surfaces(tokens);
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t len = std::min(table.max_length(), tokens.size() - i);
    const std::string* hit = nullptr;
    for (; len > 0; --len)
      if ((hit = table.find(words, i, len))) break;
    if (!hit) {
      out.push_back(std::move(tokens[i++]));
      continue;
    }
    Token merged = tokens[i];
    merged.surface = *hit;
    if (len > 1) {
      merged.pos = '^';
      merged.kind = TokenKind::Word;
      merged.span.end = tokens[i + len - 1].span.end;
    }
    out.push_back(std::move(merged));
    i += len;
  }
  return out;
}

std::vector<Token> complex_step(std::vector<Token> tokens, const ReplacementDictionaries& d) {
  for (auto& t : tokens)
    if (const auto* v = lookup(d.lemmas, t.surface)) t.surface = *v;
  tokens = replace_phrases(std::move(tokens), d.ner);
  // Digit strings are numbers whatever the dictionary says.
  for (auto& t : tokens)
    if (t.kind == TokenKind::Number) t.surface = "_number_";
  for (auto& t : tokens)
    if (const auto* v = lookup(d.synonyms, t.surface)) t.surface = *v;
  return replace_phrases(std::move(tokens), d.wiki);
}

bool same_surfaces(const std::vector<Token>& a, const std::vector<Token>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Token& x, const Token& y) { return x.surface == y.surface; });
}

}  // namespace

std::vector<Token> group_emojis(std::vector<Token> tokens, const ReplacementDictionaries& dicts) {
  for (auto& t : tokens) {
    if (t.kind != TokenKind::Emoji && t.kind != TokenKind::Emoticon) continue;
    const std::string key = str::to_lower(t.surface);
    const std::string* hit = lookup(dicts.emoji_groups, key);
    if (!hit) hit = lookup(dicts.emoji_groups, t.kind == TokenKind::Emoji ? strip_emoji_modifiers(key) : squeeze_tail(key));
    if (hit)
      t.surface = *hit;
    else
      log::debug("no emoji group for '" + t.surface + "'");
  }
  return tokens;
}

std::vector<std::string> split_hashtag(std::string_view body) {
  // Character classes: 'u' upper, 'l' lower or non-ASCII, 'd' digit, '_' separator.
  auto cls = [](char c) {
    if (c == '_') return '_';
    if (str::is_ascii_digit(c)) return 'd';
    if (str::is_ascii_upper(c)) return 'u';
    return 'l';
  };
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i], k = cls(c);
    if (k == '_') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    if (!cur.empty()) {
      const char p = cls(cur.back());
      const bool next_lower = i + 1 < body.size() && cls(body[i + 1]) == 'l';
      const bool boundary = (p == 'l' && k == 'u') || (p == 'd') != (k == 'd') || (p == 'u' && k == 'u' && next_lower);
      if (boundary) {
        parts.push_back(std::move(cur));
        cur.clear();
      }
    }
    cur += c;
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::vector<Token> regex_pass(std::vector<Token> tokens) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  auto push = [&out](Token t) {
    if (!out.empty() && out.back().surface == t.surface) {
      out.back().span.end = std::max(out.back().span.end, t.span.end);
      return;
    }
    out.push_back(std::move(t));
  };
  for (auto& t : tokens) {
    if (t.kind == TokenKind::Url) {
      t.surface = kUrlKeyword;
    } else if (t.kind == TokenKind::Mention) {
      t.surface = kMentionKeyword;
    } else if (t.kind == TokenKind::Hashtag) {
      const auto parts = split_hashtag(std::string_view(t.surface).substr(1));
      if (!parts.empty()) {
        for (const auto& p : parts) {
          Token piece = t;
          piece.surface = str::to_lower(p);
          piece.kind = std::all_of(p.begin(), p.end(), str::is_ascii_digit) ? TokenKind::Number : TokenKind::Word;
          push(std::move(piece));
        }
        continue;
      }
      t.surface = str::to_lower(t.surface);
    } else {
      t.surface = str::to_lower(t.surface);
    }
    push(std::move(t));
  }
  return out;
}

std::vector<Token> complex_pass(std::vector<Token> tokens, const ReplacementDictionaries& dicts) {
  constexpr int kMaxRounds = 16;
  for (int round = 0; round < kMaxRounds; ++round) {
    auto next = complex_step(tokens, dicts);
    if (same_surfaces(next, tokens)) return next;
    tokens = std::move(next);
  }
  throw DataError("replacement dictionaries do not reach a fixed point on '" + join_surfaces(tokens) + "'");
}

CleanedTweet clean(const RawTweet& raw, const ReplacementDictionaries& dicts, const PosTagger& tagger) {
  auto tokens = tokenize(raw.text);
  if (tokens.empty()) throw DataError("empty tweet" + (raw.id.empty() ? std::string() : " (id " + raw.id + ")"));
  CleanedTweet out;
  out.id = raw.id;
  out.source = raw.text;
  out.simple = regex_pass(group_emojis(pos_tag(std::move(tokens), tagger), dicts));
  out.complex = complex_pass(out.simple, dicts);
  return out;
}

}  // namespace ascnet::text

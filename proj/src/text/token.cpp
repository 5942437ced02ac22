#include "ascnet/text/token.hpp"

#include <algorithm>

namespace ascnet::text {

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Word: return "word";
    case TokenKind::Number: return "number";
    case TokenKind::Punct: return "punct";
    case TokenKind::Url: return "url";
    case TokenKind::Mention: return "mention";
    case TokenKind::Hashtag: return "hashtag";
    case TokenKind::Emoticon: return "emoticon";
    case TokenKind::Emoji: return "emoji";
  }
  return "?";
}

bool is_valid_tag(char tag) { return std::find(kTagset.begin(), kTagset.end(), tag) != kTagset.end(); }

std::size_t tag_id(char tag) {
  const auto it = std::find(kTagset.begin(), kTagset.end(), tag);
  return it == kTagset.end() ? 0 : static_cast<std::size_t>(it - kTagset.begin()) + 1;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string join_surfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace ascnet::text

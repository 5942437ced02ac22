#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ascnet::text {

// What the tokenizer recognised; later stages may rewrite the surface but
// keep the kind unless they merge tokens.
enum class TokenKind { Word, Number, Punct, Url, Mention, Hashtag, Emoticon, Emoji };

std::string_view to_string(TokenKind k);

// Byte offsets into the UTF-8 source, half open.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Token {
  std::string surface;
  char pos = '\0';  // one of kTagset, '\0' before tagging
  TokenKind kind = TokenKind::Word;
  Span span;
};

// Twitter part-of-speech inventory:
//   N common noun      O pronoun          ^ proper noun     S nominal+possessive
//   Z proper+possess.  V verb             A adjective       R adverb
//   ! interjection     D determiner       P pre/postposition & conjunction
//   T verb particle    X existential      # hashtag         @ mention
//   ~ discourse marker U url/email        E emoticon/emoji  $ numeral
//   , punctuation      G other/abbrev     L nominal+verbal  M proper+verbal
//   Y existential+verbal
inline constexpr std::array<char, 25> kTagset = {'N', 'O', '^', 'S', 'Z', 'V', 'A', 'R', '!', 'D', 'P', '&', 'T',
                                                 'X', '#', '@', '~', 'U', 'E', '$', ',', 'G', 'L', 'M', 'Y'};
inline constexpr char kFallbackTag = 'N';

bool is_valid_tag(char tag);
// 1-based index into kTagset; 0 is reserved for padding.
std::size_t tag_id(char tag);

std::vector<std::string> surfaces(const std::vector<Token>& tokens);
std::string join_surfaces(const std::vector<Token>& tokens);

}  // namespace ascnet::text

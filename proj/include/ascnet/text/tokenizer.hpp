#pragma once

#include <string_view>
#include <vector>

#include "ascnet/text/token.hpp"

namespace ascnet::text {

// Rule tokenizer for tweets. URLs, @mentions, #hashtags, emoticons and
// emoji sequences (including ZWJ, skin tone and flag sequences) come out as
// single tokens; runs of one repeated punctuation character stay together;
// every other punctuation character is its own token. The returned tokens
// cover every non-whitespace byte of `text` exactly once.
std::vector<Token> tokenize(std::string_view text);

bool is_emoji(char32_t cp);
bool is_unicode_space(char32_t cp);

// Fixed emoticon inventory recognised by the tokenizer, longest first.
const std::vector<std::string_view>& emoticons();

}  // namespace ascnet::text

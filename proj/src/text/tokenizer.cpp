#include "ascnet/text/tokenizer.hpp"

#include <algorithm>

#include "ascnet/common/utf8.hpp"

namespace ascnet::text {

namespace {

using utf8::CodePoint;

constexpr char32_t kVs15 = 0xFE0E, kVs16 = 0xFE0F, kZwj = 0x200D, kKeycap = 0x20E3;

bool is_skin_tone(char32_t c) { return c >= 0x1F3FB && c <= 0x1F3FF; }
bool is_regional(char32_t c) { return c >= 0x1F1E6 && c <= 0x1F1FF; }
bool is_tag_char(char32_t c) { return c >= 0xE0020 && c <= 0xE007F; }
bool is_emoji_modifier(char32_t c) {
  return c == kVs15 || c == kVs16 || is_skin_tone(c) || is_tag_char(c) || c == kKeycap;
}

bool is_ascii_alnum(char32_t c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_unicode_punct(char32_t c) {
  return (c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7 || (c >= 0x2010 && c <= 0x205E) ||
         (c >= 0x2190 && c <= 0x21FF) || (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) || c == 0xFFFD;
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return is_ascii_alnum(c) || c == '_';
  return !is_emoji(c) && !is_unicode_space(c) && !is_unicode_punct(c) && !is_emoji_modifier(c) && c != kZwj;
}

bool is_apostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text), cps_(utf8::decode(text)) {}

  std::vector<Token> run() {
    std::size_t i = 0;
    while (i < cps_.size()) {
      if (is_unicode_space(at(i))) {
        ++i;
        continue;
      }
      std::size_t n = 0;
      TokenKind kind = TokenKind::Punct;
      if ((n = url(i))) kind = TokenKind::Url;
      else if ((n = email(i))) kind = TokenKind::Url;
      else if ((n = mention(i))) kind = TokenKind::Mention;
      else if ((n = hashtag(i))) kind = TokenKind::Hashtag;
      else if ((n = emoji(i))) kind = TokenKind::Emoji;
      else if ((n = emoticon(i))) kind = TokenKind::Emoticon;
      else if ((n = word(i, kind))) {
      } else {
        n = 1;
        while (i + n < cps_.size() && at(i + n) == at(i)) ++n;
        kind = TokenKind::Punct;
      }
      emit(i, n, kind);
      i += n;
    }
    return std::move(out_);
  }

 private:
  char32_t at(std::size_t i) const { return i < cps_.size() ? cps_[i].value : 0; }
  bool prev_is_word(std::size_t i) const { return i > 0 && is_word_char(at(i - 1)); }

  void emit(std::size_t i, std::size_t n, TokenKind kind) {
    const std::size_t b = cps_[i].offset;
    const std::size_t e = cps_[i + n - 1].offset + cps_[i + n - 1].length;
    Token t;
    t.surface = std::string(text_.substr(b, e - b));
    t.kind = kind;
    t.span = {b, e};
    out_.push_back(std::move(t));
  }

  bool matches_ci(std::size_t i, std::string_view lit) const {
    for (std::size_t k = 0; k < lit.size(); ++k) {
      char32_t c = at(i + k);
      if (c >= 'A' && c <= 'Z') c += 32;
      if (c != static_cast<unsigned char>(lit[k])) return false;
    }
    return true;
  }

  std::size_t url(std::size_t i) const {
    if (prev_is_word(i)) return 0;
    std::size_t head = 0;
    for (std::string_view p : {"https://", "http://", "www."})
      if (matches_ci(i, p)) {
        head = p.size();
        break;
      }
    if (!head) return 0;
    std::size_t n = head;
    while (i + n < cps_.size() && !is_unicode_space(at(i + n)) && !is_emoji(at(i + n)) && at(i + n) < 0x80) ++n;
    bool open_paren = false;
    for (std::size_t k = 0; k < n; ++k) open_paren |= at(i + k) == '(';
    auto trailing = [&](char32_t c) {
      return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '\'' || c == '"' ||
             c == ']' || c == '}' || (c == ')' && !open_paren);
    };
    while (n > head && trailing(at(i + n - 1))) --n;
    return n > head ? n : 0;
  }

  std::size_t email(std::size_t i) const {
    if (prev_is_word(i) || !is_ascii_alnum(at(i))) return 0;
    auto local = [](char32_t c) { return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-'; };
    std::size_t n = 0;
    while (local(at(i + n))) ++n;
    if (at(i + n) != '@' || n == 0) return 0;
    ++n;
    const std::size_t domain = n;
    std::size_t last_dot = 0;
    while (is_ascii_alnum(at(i + n)) || at(i + n) == '-' || at(i + n) == '.') {
      if (at(i + n) == '.') last_dot = n;
      ++n;
    }
    while (n > domain && at(i + n - 1) == '.') --n;
    if (last_dot <= domain || last_dot + 1 >= n) return 0;
    return n;
  }

  std::size_t mention(std::size_t i) const {
    if (at(i) != '@' || prev_is_word(i)) return 0;
    std::size_t n = 1;
    while (is_ascii_alnum(at(i + n)) || at(i + n) == '_') ++n;
    return n > 1 ? n : 0;
  }

  std::size_t hashtag(std::size_t i) const {
    if (at(i) != '#' || prev_is_word(i) || (i > 0 && at(i - 1) == '&')) return 0;
    std::size_t n = 1;
    while (i + n < cps_.size() && is_word_char(at(i + n))) ++n;
    return n > 1 ? n : 0;
  }

  // One emoji sequence: base [modifiers] (ZWJ base [modifiers])*, a regional
  // indicator pair, or a keycap.
  std::size_t emoji(std::size_t i) const {
    const char32_t c = at(i);
    std::size_t n = 0;
    if ((is_digit(c) || c == '#' || c == '*') && (at(i + 1) == kKeycap || (at(i + 1) == kVs16 && at(i + 2) == kKeycap)))
      return at(i + 1) == kKeycap ? 2 : 3;
    if (is_regional(c)) return is_regional(at(i + 1)) ? 2 : 1;
    auto base = [&](std::size_t k) {
      const char32_t b = at(k);
      return is_emoji(b) || (b >= 0x80 && at(k + 1) == kVs16 && !is_unicode_space(b));
    };
    if (!base(i)) return 0;
    n = 1;
    for (;;) {
      while (i + n < cps_.size() && is_emoji_modifier(at(i + n))) ++n;
      if (at(i + n) == kZwj && i + n + 1 < cps_.size() && base(i + n + 1)) {
        n += 2;
        continue;
      }
      break;
    }
    return n;
  }

  std::size_t emoticon(std::size_t i) const {
    for (std::string_view e : emoticons()) {
      bool ok = true;
      for (std::size_t k = 0; k < e.size() && ok; ++k) ok = at(i + k) == static_cast<unsigned char>(e[k]);
      if (!ok) continue;
      const bool alnum_head = is_ascii_alnum(static_cast<unsigned char>(e.front()));
      if (alnum_head && prev_is_word(i)) continue;
      std::size_t n = e.size();
      const char32_t mouth = static_cast<unsigned char>(e.back());
      while (at(i + n) == mouth) ++n;
      const bool alnum_tail = is_ascii_alnum(mouth);
      if ((alnum_tail || alnum_head) && i + n < cps_.size() && is_word_char(at(i + n))) continue;
      return n;
    }
    return 0;
  }

  std::size_t word(std::size_t i, TokenKind& kind) const {
    if (!is_word_char(at(i))) return 0;
    std::size_t n = 0;
    bool digits_only = true;
    for (;;) {
      while (i + n < cps_.size() && is_word_char(at(i + n))) {
        digits_only &= is_digit(at(i + n));
        ++n;
      }
      const char32_t sep = at(i + n);
      const char32_t next = at(i + n + 1);
      const char32_t last = at(i + n - 1);
      const bool joins = (is_apostrophe(sep) && is_word_char(next) && !is_digit(next)) ||
                         ((sep == '.' || sep == ',') && is_digit(last) && is_digit(next)) ||
                         (sep == '-' && is_word_char(next) && !is_digit(last) && !is_digit(next));
      if (!joins) break;
      if (!(sep == '.' || sep == ',')) digits_only = false;
      ++n;
    }
    kind = digits_only ? TokenKind::Number : TokenKind::Word;
    return n;
  }

  std::string_view text_;
  std::vector<CodePoint> cps_;
  std::vector<Token> out_;
};

}  // namespace

bool is_unicode_space(char32_t c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200B) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

bool is_emoji(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FAFF && !is_skin_tone(c)) || (c >= 0x2600 && c <= 0x27BF) ||
         (c >= 0x2300 && c <= 0x23FF) || (c >= 0x2B05 && c <= 0x2B55) || (c >= 0x25AA && c <= 0x25FE) ||
         c == 0x203C || c == 0x2049 || c == 0x2122 || c == 0x2139 || c == 0x24C2 || c == 0x2934 || c == 0x2935 ||
         c == 0x3030 || c == 0x303D || c == 0x3297 || c == 0x3299;
}

const std::vector<std::string_view>& emoticons() {
  static const std::vector<std::string_view> list = [] {
    std::vector<std::string_view> v = {
        ":-)", ":)",  ":-(", ":(",  ":-D", ":D",  ";-)", ";)",  ":-P", ":P",   ":-p",  ":p",  ":'(", ":'-(", ":')",
        ":-/", ":/",  ":-O", ":O",  ":-o", ":o",  ":-*", ":*",  ":-|", ":|",   "=)",   "=(",  "=D",  "=P",   ":]",
        ":[",  ":-]", ":-[", ";D",  "xD",  "XD",  "<3",  "</3", "^_^", "^^",  "-_-",  "T_T", ">:(", ">:-(", "o_O",
        "O_o", "o.O", "(:",  ":3",  ":-3", ";P",  ";p",  "8-)", ":$", ":-$"};
    std::stable_sort(v.begin(), v.end(), [](auto a, auto b) { return a.size() > b.size(); });
    return v;
  }();
  return list;
}

std::vector<Token> tokenize(std::string_view text) { return Scanner(text).run(); }

}  // namespace ascnet::text

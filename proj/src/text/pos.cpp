#include "ascnet/text/pos.hpp"

#include <string>
#include <unordered_map>

#include "ascnet/common/strings.hpp"

namespace ascnet::text {

namespace {

const std::unordered_map<std::string, char>& closed_class() {
  // Words of the noun group are listed only to shield them from the suffix
  // rules below.
  static const std::unordered_map<std::string, char> table = [] {
    std::unordered_map<std::string, char> m;
    auto put = [&m](char tag, std::initializer_list<const char*> words) {
      for (const char* w : words) m.emplace(w, tag);
    };
    put('O', {"i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "he", "him", "his", "himself",
              "she", "her", "hers", "herself", "it", "its", "itself", "we", "us", "our", "ours", "ourselves", "they",
              "them", "their", "theirs", "themselves", "who", "whom", "whose", "what", "which", "someone", "anyone",
              "everyone", "nobody", "somebody", "something", "anything", "everything", "nothing", "u", "ya", "ur"});
    put('D', {"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no", "all", "both",
              "either", "neither", "another", "such", "da", "teh"});
    put('P', {"in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through", "during",
              "before", "after", "above", "below", "to", "from", "of", "over", "under", "than", "via", "without",
              "within", "among", "across", "toward", "towards", "upon", "around", "near", "since", "until", "till",
              "like", "2", "4", "w/"});
    put('&', {"and", "or", "but", "nor", "yet", "&", "n", "&amp;", "plus"});
    put('!', {"lol", "haha", "hahaha", "lmao", "rofl", "omg", "wow", "oh", "ah", "ugh", "yay", "yes", "hey", "hi",
              "hello", "ok", "okay", "oops", "wtf", "damn", "smh", "hmm", "yeah", "yep", "nope", "please", "thanks",
              "thank", "bye", "ouch", "aww", "woah", "whoa", "meh", "ha", "lmfao", "ikr", "idk"});
    put('X', {"there"});
    put('V', {"is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do", "does", "did",
              "will", "would", "shall", "should", "can", "could", "may", "might", "must", "get", "got", "go", "went",
              "gone", "come", "came", "make", "made", "say", "said", "know", "knew", "think", "thought", "see", "saw",
              "seen", "want", "need", "hate", "take", "took", "give", "gave", "tell", "told", "feel", "felt", "let",
              "fly", "flew", "flown", "keep", "kept", "bring", "brought", "sing", "sang", "can't", "cant", "don't",
              "dont", "won't", "wont", "didn't", "didnt", "isn't", "isnt", "wasn't", "aren't", "doesn't", "doesnt",
              "gonna", "wanna", "gotta"});
    put('R', {"not", "never", "very", "really", "too", "just", "also", "always", "often", "now", "then", "here",
              "only", "still", "even", "again", "maybe", "soon", "well", "quite", "rather", "almost", "already",
              "ever", "how", "when", "where", "why", "today", "tomorrow", "tonight", "yesterday", "so", "much",
              "more", "most", "less", "least", "back", "away", "n't", "rly", "srsly"});
    put('T', {"up", "out", "off", "down"});
    put('L', {"i'm", "im", "i've", "ive", "i'll", "i'd", "you're", "youre", "you've", "you'll", "he's", "she's",
              "it's", "that's", "thats", "what's", "whats", "we're", "we've", "we'll", "they're", "theyre",
              "they've", "they'll", "who's", "let's", "lets"});
    put('Y', {"there's", "theres", "there're"});
    put('G', {"etc", "vs", "ie", "eg", "e.g", "i.e"});
    put('~', {"rt"});
    put('$', {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
              "twelve", "twenty", "thirty", "hundred", "thousand", "million", "billion", "first", "second", "third"});
    put('N', {"thing", "morning", "evening", "king", "ring",
              "spring", "wedding", "ceiling", "string", "wing", "building", "feeling", "meeting", "clothing",
              "speed", "seed", "weed", "family", "reply", "supply", "ally", "belly", "bully", "jelly", "rally",
              "animal", "hospital", "capital", "festival", "signal", "terminal", "arrival", "rival", "music",
              "panic", "picnic", "topic", "logic", "traffic", "table", "cable", "bible", "people", "time", "day"});
    put('A', {"right", "good", "great", "bad", "happy", "sad", "nice", "best", "better", "worse", "worst", "new",
              "old", "big", "little", "sorry", "sure", "cool", "angry", "scared", "mad", "glad", "fine"});
    return m;
  }();
  return table;
}

bool ends_with(std::string_view s, std::string_view suf) {
  return s.size() >= suf.size() && s.substr(s.size() - suf.size()) == suf;
}

bool titlecase(std::string_view w) {
  if (w.empty() || !str::is_ascii_upper(w[0])) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (str::is_ascii_upper(w[i])) return false;
  return w.size() > 1;
}

}  // namespace

char RuleTagger::tag_word(std::string_view word, bool sentence_initial) const {
  const std::string lw = str::to_lower(word);
  if (auto it = closed_class().find(lw); it != closed_class().end()) return it->second;
  const bool proper = titlecase(word) && !sentence_initial;
  if (ends_with(lw, "'s") || ends_with(lw, "\xE2\x80\x99s")) return titlecase(word) ? 'Z' : 'S';
  if (proper) return '^';
  if (lw.size() > 4 && ends_with(lw, "ly")) return 'R';
  if (lw.size() > 4 && (ends_with(lw, "ing") || ends_with(lw, "ed"))) return 'V';
  for (std::string_view suf : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ic", "al", "est"})
    if (lw.size() > suf.size() + 2 && ends_with(lw, suf)) return 'A';
  return kFallbackTag;
}

void RuleTagger::tag(std::vector<Token>& tokens) const {
  bool initial = true;
  for (auto& t : tokens) {
    switch (t.kind) {
      case TokenKind::Url: t.pos = 'U'; break;
      case TokenKind::Mention: t.pos = '@'; break;
      case TokenKind::Hashtag: t.pos = '#'; break;
      case TokenKind::Emoticon:
      case TokenKind::Emoji: t.pos = 'E'; break;
      case TokenKind::Number: t.pos = '$'; break;
      case TokenKind::Punct: t.pos = ','; break;
      case TokenKind::Word: t.pos = tag_word(t.surface, initial); break;
    }
    if (t.kind == TokenKind::Punct) {
      const char c = t.surface.front();
      initial = c == '.' || c == '!' || c == '?' || c == ':';
    } else if (t.pos != '@' && t.pos != '~') {
      initial = false;
    }
  }
}

const PosTagger& default_tagger() {
  static const RuleTagger tagger;
  return tagger;
}

std::vector<Token> pos_tag(std::vector<Token> tokens, const PosTagger& tagger) {
  tagger.tag(tokens);
  return tokens;
}

}  // namespace ascnet::text

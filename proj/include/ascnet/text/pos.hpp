#pragma once

#include <memory>
#include <vector>

#include "ascnet/text/token.hpp"

namespace ascnet::text {

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  // Assigns exactly one tag from kTagset to every token.
  virtual void tag(std::vector<Token>& tokens) const = 0;
};

// Token-kind rules, a closed-class word list and suffix heuristics, with
// kFallbackTag for anything unrecognised.
class RuleTagger : public PosTagger {
 public:
  void tag(std::vector<Token>& tokens) const override;
  char tag_word(std::string_view word, bool sentence_initial) const;
};

const PosTagger& default_tagger();

std::vector<Token> pos_tag(std::vector<Token> tokens, const PosTagger& tagger = default_tagger());

}  // namespace ascnet::text

#pragma once

#include <string>
#include <vector>

#include "ascnet/asc/model.hpp"
#include "ascnet/lex/feature_vector.hpp"

namespace ascnet::asc {

enum class HiddenLayer { submodel_penultimate, combiner_hidden };
std::string to_string(HiddenLayer l);
HiddenLayer hidden_layer_from_string(const std::string& s);  // UsageError when unknown

// Hidden activations as features named `<prefix>_<i>` in group `<prefix>`,
// e.g. prefix "ASC" or "w2v_200_fear". For the combined model the
// penultimate layer is the concatenation over sub-models, named
// `<prefix>_<slot>_<i>`.
std::vector<lex::FeatureVector> extract_hidden(const AscModel& model, const std::vector<text::CleanedTweet>& tweets,
                                               HiddenLayer layer, const std::string& prefix = "ASC");
std::vector<lex::FeatureVector> extract_hidden(const SubModel& model, const std::vector<text::CleanedTweet>& tweets,
                                               HiddenLayer layer, const std::string& prefix);

}  // namespace ascnet::asc

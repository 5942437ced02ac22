#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ascnet/app/config.hpp"
#include "ascnet/app/dataset.hpp"
#include "ascnet/asc/distant.hpp"
#include "ascnet/asc/model.hpp"
#include "ascnet/calib/importance.hpp"
#include "ascnet/calib/thresholds.hpp"
#include "ascnet/heads/heads.hpp"
#include "ascnet/heads/standardizer.hpp"
#include "ascnet/lex/feature_table.hpp"
#include "ascnet/lex/lexicons.hpp"
#include "ascnet/text/dictionaries.hpp"

namespace ascnet::app {

struct Resources {
  text::ReplacementDictionaries dicts;
  lex::LexiconSet lexicons;
  static Resources load(const RunConfig& cfg);
};

std::size_t worker_count(const RunConfig& cfg);

// ---- cleaning ---------------------------------------------------------------

std::vector<text::CleanedTweet> clean_tweets(const std::vector<text::RawTweet>& raw, const Resources& res,
                                             std::size_t threads);
// id<TAB>simple<TAB>complex, tokens joined by spaces.
void write_cleaned(const std::filesystem::path& path, const std::vector<text::CleanedTweet>& tweets);

// ---- sentiment models -------------------------------------------------------

std::vector<asc::SubModelConfig> asc_configs(const RunConfig& cfg, std::size_t penultimate_dim);
std::vector<asc::Sentiment> corpus_labels(const Dataset& corpus);

asc::AscModel train_sentiment_model(const std::vector<text::CleanedTweet>& corpus,
                                    const std::vector<asc::Sentiment>& labels, const RunConfig& cfg);
// Keyword-split retraining for one emotion with the freeze/unfreeze
// schedule and the smaller penultimate layer.
asc::AscModel train_distant_model(const std::vector<text::CleanedTweet>& corpus, const asc::DistantSplit& split,
                                  const RunConfig& cfg);

struct FeatureModels {
  std::optional<asc::AscModel> general;
  std::vector<std::pair<std::string, asc::AscModel>> distant;  // by emotion
};

// Lexical features (per tweet, in parallel), then hidden layers of the
// sentiment models: "ASC" (25), "ASC_<emotion>" (25) and
// "<slot>_<emotion>" (sub-model penultimate).
std::vector<lex::FeatureVector> featurize(const std::vector<text::CleanedTweet>& tweets, const Resources& res,
                                          const FeatureModels& models, const RunConfig& cfg);

// Columns nonzero in at least `min_support` rows and not constant.
std::vector<std::string> select_features(const lex::FeatureTable& train, std::size_t min_support);

// ---- heads ------------------------------------------------------------------

struct HeadBundle {
  TaskSpec task;
  std::vector<std::string> features;
  heads::Standardizer standardizer;
  std::optional<heads::VotingRegressionHead> voting;
  std::optional<heads::MultiLabelHead> multilabel;
  std::vector<double> history;
};

heads::HeadTrainConfig head_config(const TaskSpec& task, const RunConfig& cfg);

// Rows of `table` matched to `gold` by id; ids missing on either side are
// a DataError listing them.
std::vector<std::size_t> align(const lex::FeatureTable& table, const Dataset& gold);

HeadBundle train_head(const lex::FeatureTable& train, const Dataset& gold, const TaskSpec& task,
                      const RunConfig& cfg);
void save_bundle(const std::filesystem::path& path, const HeadBundle& b, std::uint64_t seed,
                 const std::string& config_digest);
HeadBundle load_bundle(const std::filesystem::path& path);

struct Predictions {
  std::vector<std::string> ids;
  std::vector<double> scores;  // regression scores or ordinal classes
  Matrix flags;                // multi-label
};

// Regression scores in [0,1], or label probabilities for E-c.
Predictions predict_raw(const HeadBundle& b, const lex::FeatureTable& table);
Predictions finalize(const HeadBundle& b, Predictions raw, const std::optional<calib::CalibrationThresholds>& t);

calib::GridSearchResult calibrate(const HeadBundle& b, const lex::FeatureTable& train, const Dataset& gold,
                                  const RunConfig& cfg);

void write_predictions(const std::filesystem::path& path, const Predictions& p, const TaskSpec& task);
Predictions read_predictions(const std::filesystem::path& path, const TaskSpec& task);

struct Evaluation {
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;
};
Evaluation evaluate(const Predictions& pred, const Dataset& gold, const TaskSpec& task);

// Pratt shares over the features a head would use, against the gold labels.
calib::ImportanceReport importance(const lex::FeatureTable& train, const Dataset& gold, const TaskSpec& task,
                                   std::size_t min_support);

}  // namespace ascnet::app

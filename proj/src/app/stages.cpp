#include "ascnet/app/stages.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

#include "ascnet/asc/hidden.hpp"
#include "ascnet/asc/train.hpp"
#include "ascnet/calib/metrics.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/common/log.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/lex/features.hpp"

namespace ascnet::app {

namespace {

// fn(i) for i in [0, n) over `threads` workers; each index is written by
// exactly one worker, so results do not depend on scheduling. The first
// failure by index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t stream_seed(const RunConfig& cfg, const std::string& stream) { return Rng::derive(cfg.seed, stream).next(); }

std::string missing_list(const std::vector<std::string>& ids) {
  std::vector<std::string> shown(ids.begin(), ids.begin() + static_cast<long>(std::min<std::size_t>(ids.size(), 10)));
  return str::join(shown, ", ") + (ids.size() > 10 ? ", ... (" + std::to_string(ids.size()) + " in all)" : "");
}

}  // namespace

Resources Resources::load(const RunConfig& cfg) {
  Resources r{text::ReplacementDictionaries::load(cfg.dicts.empty() ? text::default_dict_dir() : cfg.dicts),
              lex::LexiconSet::load(cfg.lexicons.empty() ? lex::default_lexicon_dir() : cfg.lexicons, cfg.affect_lexicon)};
  return r;
}

std::size_t worker_count(const RunConfig& cfg) {
  if (cfg.threads) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<text::CleanedTweet> clean_tweets(const std::vector<text::RawTweet>& raw, const Resources& res,
                                             std::size_t threads) {
  std::vector<text::CleanedTweet> out(raw.size());
  parallel_for(raw.size(), threads, [&](std::size_t i) {
    try {
      out[i] = text::clean(raw[i], res.dicts);
    } catch (const DataError& e) {
      throw DataError("tweet " + raw[i].id + ": " + e.what());
    }
  });
  return out;
}

void write_cleaned(const std::filesystem::path& path, const std::vector<text::CleanedTweet>& tweets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& t : tweets)
    out << t.id << '\t' << str::escape_field(text::join_surfaces(t.simple)) << '\t'
        << str::escape_field(text::join_surfaces(t.complex)) << '\n';
}

std::vector<asc::SubModelConfig> asc_configs(const RunConfig& cfg, std::size_t penultimate_dim) {
  std::vector<asc::SubModelConfig> out;
  for (const auto& slot : asc::kSlots) {
    auto c = asc::SubModelConfig::canonical(slot);
    c.seq_len = cfg.seq_len;
    c.gru_hidden = cfg.gru_hidden;
    c.filters_per_width = cfg.filters_per_width;
    c.penultimate_dim = penultimate_dim;
    c.validate();
    out.push_back(c);
  }
  return out;
}

std::vector<asc::Sentiment> corpus_labels(const Dataset& corpus) {
  std::vector<asc::Sentiment> out;
  for (const auto& r : corpus.rows) out.push_back(asc::sentiment_from_int(static_cast<long long>(r.label)));
  return out;
}

namespace {

struct Vocabs {
  asc::Vocab simple, complex;
};

Vocabs corpus_vocabs(const std::vector<text::CleanedTweet>& corpus, std::size_t min_count) {
  std::vector<std::vector<std::string>> s, c;
  for (const auto& t : corpus) {
    s.push_back(text::surfaces(t.simple));
    c.push_back(text::surfaces(t.complex));
  }
  return {asc::Vocab::build(s, min_count), asc::Vocab::build(c, min_count)};
}

asc::AscModel build_and_train(const std::vector<text::CleanedTweet>& corpus, const std::vector<text::CleanedTweet>& train,
                              const std::vector<asc::Sentiment>& labels, const RunConfig& cfg, std::size_t penultimate,
                              const std::string& stream, std::optional<asc::DistantSchedule> schedule) {
  const auto vocabs = corpus_vocabs(corpus, cfg.vocab_min_count);
  std::map<std::string, asc::EmbeddingFile> files;
  std::map<std::string, const asc::EmbeddingFile*> pretrained;
  for (const auto& [slot, path] : cfg.embeddings) {
    files.emplace(slot, asc::EmbeddingFile::read(path));
    pretrained[slot] = &files.at(slot);
  }
  Rng init = Rng::derive(cfg.seed, stream + "-init");
  auto model = asc::build_asc(asc_configs(cfg, penultimate), vocabs.simple, vocabs.complex, init, pretrained);
  asc::TrainOptions o;
  o.epochs = cfg.asc_epochs;
  o.batch_size = cfg.asc_batch_size;
  o.optimizer = tensor::OptimizerConfig::adagrad(cfg.asc_learning_rate);
  o.seed = stream_seed(cfg, stream + "-train");
  o.schedule = schedule;
  o.on_epoch = [&](const asc::EpochReport& r) {
    log::info(stream + " epoch " + std::to_string(r.epoch) + " loss " + str::format_double(r.loss) +
              (r.embeddings_trainable ? "" : " (embeddings frozen)"));
  };
  asc::train_asc(model, train, labels, o);
  return model;
}

}  // namespace

asc::AscModel train_sentiment_model(const std::vector<text::CleanedTweet>& corpus,
                                    const std::vector<asc::Sentiment>& labels, const RunConfig& cfg) {
  return build_and_train(corpus, corpus, labels, cfg, cfg.penultimate_dim, "asc", std::nullopt);
}

asc::AscModel train_distant_model(const std::vector<text::CleanedTweet>& corpus, const asc::DistantSplit& split,
                                  const RunConfig& cfg) {
  if (split.with.empty() || split.without.empty())
    throw DataError("distant split for " + split.emotion + " has an empty side (" + std::to_string(split.with.size()) +
                    " with, " + std::to_string(split.without.size()) + " without keywords)");
  std::vector<std::size_t> idx;
  std::vector<asc::Sentiment> labels;
  asc::distant_training_set(split, idx, labels);
  std::vector<text::CleanedTweet> train;
  for (auto i : idx) train.push_back(corpus[i]);
  return build_and_train(corpus, train, labels, cfg, cfg.distant_penultimate_dim, "asc_" + split.emotion,
                         asc::DistantSchedule{cfg.frozen_epochs, cfg.trainable_epochs});
}

std::vector<lex::FeatureVector> featurize(const std::vector<text::CleanedTweet>& tweets, const Resources& res,
                                          const FeatureModels& models, const RunConfig& cfg) {
  std::vector<std::vector<lex::FeatureVector>> parts(tweets.size());
  if (cfg.lexical)
    parallel_for(tweets.size(), worker_count(cfg),
                 [&](std::size_t i) { parts[i].push_back(lex::lexical_features(tweets[i], res.lexicons)); });
  auto add = [&](std::vector<lex::FeatureVector> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) parts[i].push_back(std::move(rows[i]));
  };
  if (models.general) add(asc::extract_hidden(*models.general, tweets, asc::HiddenLayer::combiner_hidden, "ASC"));
  for (const auto& [emotion, m] : models.distant) {
    add(asc::extract_hidden(m, tweets, asc::HiddenLayer::combiner_hidden, "ASC_" + emotion));
    for (const auto& sub : m.subs())
      add(asc::extract_hidden(sub, tweets, asc::HiddenLayer::submodel_penultimate, sub.config().slot + "_" + emotion));
  }
  std::vector<lex::FeatureVector> out;
  out.reserve(tweets.size());
  for (auto& p : parts) out.push_back(lex::assemble(p));
  return out;
}

std::vector<std::string> select_features(const lex::FeatureTable& train, std::size_t min_support) {
  std::vector<std::string> keep;
  const auto& m = train.values;
  for (std::size_t c = 0; c < m.cols; ++c) {
    std::size_t nonzero = 0;
    bool varies = false;
    for (std::size_t r = 0; r < m.rows; ++r) {
      nonzero += m(r, c) != 0.0;
      varies |= m(r, c) != m(0, c);
    }
    if (nonzero >= min_support && varies) keep.push_back(train.names[c]);
  }
  if (keep.empty()) throw DataError("no feature survives pruning (min_support " + std::to_string(min_support) + ")");
  return keep;
}

heads::HeadTrainConfig head_config(const TaskSpec& task, const RunConfig& cfg) {
  auto h = task.multilabel() ? heads::HeadTrainConfig::multilabel()
           : task.emotion_task() ? heads::HeadTrainConfig::emotion(task.emotion)
                                 : heads::HeadTrainConfig::valence();
  if (cfg.head_learning_rate > 0.0) h.optimizer.learning_rate = cfg.head_learning_rate;
  if (cfg.head_epochs) h.epochs = cfg.head_epochs;
  if (cfg.head_batch_size) h.batch_size = cfg.head_batch_size;
  h.seed = stream_seed(cfg, "head-train");
  return h;
}

std::vector<std::size_t> align(const lex::FeatureTable& table, const Dataset& gold) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < gold.rows.size(); ++i) index[gold.rows[i].id] = i;
  std::vector<std::size_t> out;
  std::vector<std::string> no_gold;
  std::set<std::string> seen;
  for (const auto& id : table.ids) {
    auto it = index.find(id);
    if (it == index.end()) no_gold.push_back(id);
    else out.push_back(it->second);
    seen.insert(id);
  }
  std::vector<std::string> no_row;
  for (const auto& r : gold.rows)
    if (!seen.count(r.id)) no_row.push_back(r.id);
  if (!no_gold.empty()) throw DataError("ids without gold labels: " + missing_list(no_gold));
  if (!no_row.empty()) throw DataError("gold ids missing from the features/predictions: " + missing_list(no_row));
  return out;
}

HeadBundle train_head(const lex::FeatureTable& train, const Dataset& gold, const TaskSpec& task,
                      const RunConfig& cfg) {
  HeadBundle b;
  b.task = task;
  b.features = select_features(train, cfg.min_support);
  const auto idx = align(train, gold);
  const auto x = train.select(b.features).values;
  b.standardizer = heads::Standardizer::fit(x, b.features);
  const auto z = b.standardizer.transform(x);
  Rng init = Rng::derive(cfg.seed, "head-init");
  const auto hc = head_config(task, cfg);
  if (task.multilabel()) {
    Matrix y(idx.size(), heads::kEmotionLabels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& l = gold.rows[idx[i]].labels;
      std::copy(l.begin(), l.end(), y.row(i).begin());
    }
    b.multilabel.emplace(b.features.size(), init, cfg.copies);
    b.history = b.multilabel->train(z, y, hc);
  } else {
    std::vector<double> y;
    for (auto i : idx) y.push_back(task.class_to_unit(gold.rows[i].label));
    b.voting.emplace(b.features.size(), init, cfg.copies);
    b.history = b.voting->train(z, y, hc);
  }
  return b;
}

void save_bundle(const std::filesystem::path& path, const HeadBundle& b, std::uint64_t seed,
                 const std::string& config_digest) {
  nlohmann::json extra = {{"task", b.task.name()},
                          {"emotion", b.task.emotion},
                          {"features", b.features},
                          {"standardizer", b.standardizer.to_json()},
                          {"config_digest", config_digest}};
  if (b.voting) heads::save_head(path, *b.voting, seed, extra);
  else heads::save_head(path, *b.multilabel, seed, extra);
}

HeadBundle load_bundle(const std::filesystem::path& path) {
  HeadBundle b;
  nlohmann::json extra;
  if (heads::head_kind(path) == "voting") b.voting.emplace(heads::load_voting_head(path, &extra));
  else b.multilabel.emplace(heads::load_multilabel_head(path, &extra));
  try {
    b.task = TaskSpec::make(extra.at("task").get<std::string>(), extra.at("emotion").get<std::string>());
    b.features = extra.at("features").get<std::vector<std::string>>();
    b.standardizer = heads::Standardizer::from_json(extra.at("standardizer"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": head checkpoint lacks its feature record: " + e.what());
  }
  return b;
}

Predictions predict_raw(const HeadBundle& b, const lex::FeatureTable& table) {
  Predictions p;
  p.ids = table.ids;
  const auto z = b.standardizer.transform(table.select(b.features).values);
  if (b.voting) p.scores = b.voting->predict(z);
  else p.flags = b.multilabel->predict(z);
  return p;
}

Predictions finalize(const HeadBundle& b, Predictions raw, const std::optional<calib::CalibrationThresholds>& t) {
  if (b.task.multilabel()) {
    raw.flags = heads::binarize(raw.flags);
  } else if (b.task.ordinal()) {
    if (!t) throw UsageError(b.task.name() + " predictions need calibrated thresholds");
    if (t->class_values != b.task.class_values()) throw DataError("thresholds were calibrated for another class set");
    raw.scores = calib::apply_thresholds(raw.scores, *t);
  }
  return raw;
}

calib::GridSearchResult calibrate(const HeadBundle& b, const lex::FeatureTable& train, const Dataset& gold,
                                  const RunConfig& cfg) {
  if (!b.task.ordinal()) throw UsageError("calibration applies to V-oc and EI-oc only");
  const auto raw = predict_raw(b, train);
  const auto idx = align(train, gold);
  std::vector<double> g;
  for (auto i : idx) g.push_back(gold.rows[i].label);
  calib::GridSearchOptions o;
  o.max_candidates = cfg.max_candidates;
  o.beam_width = cfg.beam_width;
  return calib::grid_search_thresholds(raw.scores, g, b.task.class_values(), o);
}

void write_predictions(const std::filesystem::path& path, const Predictions& p, const TaskSpec& task) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t i = 0; i < p.ids.size(); ++i) {
    out << p.ids[i];
    if (task.multilabel()) {
      for (double v : p.flags.row(i)) out << '\t' << static_cast<int>(v);
    } else if (task.ordinal()) {
      out << '\t' << static_cast<long long>(p.scores[i]);
    } else {
      out << '\t' << str::format_double(p.scores[i]);
    }
    out << '\n';
  }
}

Predictions read_predictions(const std::filesystem::path& path, const TaskSpec& task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Predictions p;
  const std::size_t want = task.multilabel() ? 1 + heads::kEmotionLabels.size() : 2;
  std::vector<double> flags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (str::trim(line).empty()) continue;
    const auto f = str::split(line, '\t');
    if (f.size() != want)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(want) + " fields");
    p.ids.push_back(f[0]);
    try {
      if (task.multilabel())
        for (std::size_t i = 1; i < f.size(); ++i) flags.push_back(str::parse_double(f[i]));
      else
        p.scores.push_back(str::parse_double(f[1]));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (p.ids.empty()) throw DataError(path.string() + ": no predictions");
  if (task.multilabel()) {
    p.flags = Matrix(p.ids.size(), want - 1);
    p.flags.data = std::move(flags);
  }
  return p;
}

Evaluation evaluate(const Predictions& pred, const Dataset& gold, const TaskSpec& task) {
  lex::FeatureTable ids_only;
  ids_only.ids = pred.ids;
  const auto idx = align(ids_only, gold);
  Evaluation e{task.metric(), 0.0, idx.size()};
  if (task.multilabel()) {
    Matrix g(idx.size(), heads::kEmotionLabels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& l = gold.rows[idx[i]].labels;
      std::copy(l.begin(), l.end(), g.row(i).begin());
    }
    e.value = calib::jaccard(g, pred.flags);
  } else {
    std::vector<double> g;
    for (auto i : idx) g.push_back(gold.rows[i].label);
    e.value = calib::pearson(pred.scores, g);
  }
  return e;
}

calib::ImportanceReport importance(const lex::FeatureTable& train, const Dataset& gold, const TaskSpec& task,
                                   std::size_t min_support) {
  if (task.multilabel()) throw UsageError("feature importance is defined for the single-score tasks");
  auto keep = select_features(train, min_support);
  // Exactly collinear columns (e.g. shares that sum to one) have no
  // separable contribution; the fit keeps a pivoted independent subset.
  const auto independent = calib::independent_columns(train.select(keep).values);
  if (independent.size() < keep.size()) {
    std::vector<std::string> kept, dropped;
    std::size_t k = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (k < independent.size() && independent[k] == j) {
        kept.push_back(keep[j]);
        ++k;
      } else {
        dropped.push_back(keep[j]);
      }
    }
    log::warn("importance: dropping linearly dependent features: " + missing_list(dropped));
    keep = std::move(kept);
  }
  const auto idx = align(train, gold);
  std::vector<double> y;
  for (auto i : idx) y.push_back(gold.rows[i].label);
  std::vector<std::string> groups;
  for (const auto& n : keep) {
    auto it = train.groups.find(n);
    groups.push_back(it == train.groups.end() ? n : it->second);
  }
  return calib::pratt_importance(train.select(keep).values, y, keep, groups);
}

}  // namespace ascnet::app

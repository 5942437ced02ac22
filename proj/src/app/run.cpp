#include "ascnet/app/run.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ascnet/asc/persist.hpp"
#include "ascnet/calib/metrics.hpp"
#include "ascnet/common/log.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/lex/features.hpp"

namespace ascnet::app {

namespace fs = std::filesystem;

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".lock") {
  fs::create_directories(dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST)
      throw UsageError("output directory " + dir.string() + " is in use by another run (remove " + path_.string() +
                       " if that run is gone)");
    throw UsageError("cannot lock " + dir.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

namespace {

std::string file_digest(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read back " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest_hex(fnv1a64(buf.str()));
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

Manifest::Manifest(fs::path dir, std::uint64_t seed, std::string config_digest) : dir_(std::move(dir)) {
  const auto path = dir_ / "run_manifest.json";
  if (fs::exists(path)) {
    std::ifstream in(path);
    try {
      doc_ = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
      doc_ = nlohmann::json::object();
    }
    // A different experiment in the same directory starts a fresh record.
    if (doc_.value("seed", std::uint64_t{0}) != seed || doc_.value("config_digest", std::string()) != config_digest)
      doc_ = nlohmann::json::object();
  }
  doc_["seed"] = seed;
  doc_["config_digest"] = config_digest;
  if (!doc_.contains("artifacts")) doc_["artifacts"] = nlohmann::json::object();
}

void Manifest::record(const std::string& name, const fs::path& file) {
  doc_["artifacts"][name] = {{"file", fs::relative(file, dir_).generic_string()}, {"digest", file_digest(file)}};
  flush();
}

void Manifest::note(const std::string& key, const nlohmann::json& value) {
  doc_[key] = value;
  flush();
}

void Manifest::flush() const { write_json(dir_ / "run_manifest.json", doc_); }

Dataset ingest_for(const fs::path& path, const RunConfig& cfg, const TaskSpec& task) {
  const Format f = cfg.format.empty() ? default_format(task) : format_from_string(cfg.format);
  return ingest(path, f, IngestOptions{task, false});
}

Dataset ingest_corpus(const RunConfig& cfg) {
  auto d = ingest(cfg.corpus, Format::three_class, IngestOptions{std::nullopt, cfg.compress_labels});
  log::info("sentiment corpus " + cfg.corpus.string() + "\n" + distribution_report(d));
  return d;
}

namespace {

fs::path general_checkpoint(const RunConfig& cfg) {
  return cfg.asc_checkpoint.empty() ? cfg.out_dir / "asc.ckpt" : cfg.asc_checkpoint;
}

fs::path distant_checkpoint(const RunConfig& cfg, const std::string& emotion) {
  return cfg.out_dir / ("asc_" + emotion + ".ckpt");
}

std::vector<std::string> distant_emotions(const RunConfig& cfg) {
  std::vector<std::string> out;
  const auto path = cfg.distant_keywords.empty() ? asc::default_distant_keywords() : cfg.distant_keywords;
  for (const auto& s : asc::load_distant_keywords(path)) out.push_back(s.emotion);
  return out;
}

}  // namespace

FeatureModels load_feature_models(const RunConfig& cfg) {
  FeatureModels m;
  if (cfg.asc) {
    const auto p = general_checkpoint(cfg);
    if (!fs::exists(p)) throw UsageError("no sentiment model at " + p.string() + "; run train-asc first");
    m.general.emplace(asc::load_asc(p));
  }
  if (cfg.distant)
    for (const auto& e : distant_emotions(cfg)) {
      const auto p = distant_checkpoint(cfg, e);
      if (!fs::exists(p)) throw UsageError("no distant model at " + p.string() + "; run train-asc --distant first");
      m.distant.emplace_back(e, asc::load_asc(p));
    }
  return m;
}

TrainedModels train_sentiment_models(const RunConfig& cfg, bool general, bool distant, Manifest& manifest) {
  TrainedModels out;
  if (!general && !distant) return out;
  if (cfg.corpus.empty()) throw UsageError("training sentiment models needs [data] corpus");
  const auto corpus = ingest_corpus(cfg);
  const auto res = Resources::load(cfg);
  const auto cleaned = clean_tweets(corpus.raw(), res, worker_count(cfg));
  if (general) {
    const auto model = train_sentiment_model(cleaned, corpus_labels(corpus), cfg);
    const auto p = cfg.out_dir / "asc.ckpt";
    asc::save_asc(p, model, cfg.seed);
    manifest.record("asc", p);
    out.general = p;
  }
  if (distant) {
    const auto path = cfg.distant_keywords.empty() ? asc::default_distant_keywords() : cfg.distant_keywords;
    for (const auto& split : asc::build_distant_datasets(cleaned, asc::load_distant_keywords(path))) {
      log::info("distant " + split.emotion + ": " + std::to_string(split.with.size()) + " with keywords, " +
                std::to_string(split.without.size()) + " without");
      const auto model = train_distant_model(cleaned, split, cfg);
      const auto p = distant_checkpoint(cfg, split.emotion);
      asc::save_asc(p, model, cfg.seed);
      manifest.record("asc_" + split.emotion, p);
      out.distant.push_back(p);
    }
  }
  return out;
}

lex::FeatureTable featurize_file(const fs::path& data, const RunConfig& cfg, const Resources& res,
                                 const FeatureModels& models) {
  const auto d = ingest_for(data, cfg, cfg.task_spec());
  const auto cleaned = clean_tweets(d.raw(), res, worker_count(cfg));
  return lex::FeatureTable::from_rows(d.ids(), featurize(cleaned, res, models, cfg));
}

void write_thresholds(const fs::path& path, const calib::GridSearchResult& r, std::uint64_t seed,
                      const std::string& digest) {
  write_json(path, {{"seed", seed},
                    {"config_digest", digest},
                    {"thresholds", r.thresholds.to_json()},
                    {"train_pearson", r.pearson},
                    {"exhaustive", r.exhaustive},
                    {"evaluated", r.evaluated}});
}

calib::CalibrationThresholds read_thresholds(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    auto t = calib::CalibrationThresholds::from_json(nlohmann::json::parse(in).at("thresholds"));
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string EvaluationReport::text() const {
  std::ostringstream out;
  for (const auto& [dim, e] : parts)
    out << dim << '\t' << e.metric << '\t' << str::format_double(e.value) << "\t(" << str::format_double(calib::truncate3(e.value))
        << ", n=" << e.n << ")\n";
  if (macro_average)
    out << "macro-average\t" << str::format_double(*macro_average) << "\t("
        << str::format_double(calib::truncate3(*macro_average)) << ")\n";
  return out.str();
}

EvaluationReport evaluate_files(const std::vector<fs::path>& preds, const std::vector<fs::path>& golds,
                                const RunConfig& cfg) {
  if (preds.empty() || preds.size() != golds.size())
    throw UsageError("evaluate needs matching --pred and --gold lists (" + std::to_string(preds.size()) + " vs " +
                     std::to_string(golds.size()) + ")");
  const auto base = TaskSpec::make(cfg.task, cfg.task == "EI-reg" || cfg.task == "EI-oc" ? "anger" : "");
  EvaluationReport rep;
  std::vector<double> values;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    TaskSpec spec = base;
    if (spec.emotion_task()) {
      // The emotion comes from the file unless one was configured.
      spec.emotion = cfg.emotion;
      if (spec.emotion.empty()) {
        const auto peek = ingest(golds[i], Format::semeval);
        spec = TaskSpec::make(cfg.task, peek.rows.front().dimension);
      }
    }
    const auto gold = ingest_for(golds[i], cfg, spec);
    const auto e = evaluate(read_predictions(preds[i], spec), gold, spec);
    rep.parts.emplace_back(spec.dimension(), e);
    values.push_back(e.value);
  }
  if (base.emotion_task() && values.size() > 1) rep.macro_average = calib::macro_average(values);
  return rep;
}

RunSummary run_pipeline(const RunConfig& cfg) {
  in_stage("config", [&] { cfg.validate(); });
  if (cfg.train.empty()) throw UsageError("config: [data] train is required for a run");
  const TaskSpec task = cfg.task_spec();
  OutputLock lock(cfg.out_dir);
  Manifest manifest(cfg.out_dir, cfg.seed, cfg.digest());
  {
    const auto p = cfg.out_dir / "config.json";
    write_json(p, cfg.to_json());
    manifest.record("config", p);
  }

  std::vector<std::pair<std::string, fs::path>> splits{{"train", cfg.train}};
  if (!cfg.dev.empty()) splits.emplace_back("dev", cfg.dev);
  if (!cfg.test.empty()) splits.emplace_back("test", cfg.test);

  std::map<std::string, Dataset> data;
  in_stage("ingest", [&] {
    for (const auto& [name, path] : splits) {
      data.emplace(name, ingest_for(path, cfg, task));
      log::info(name + " " + path.string() + "\n" + distribution_report(data.at(name)));
    }
  });

  const auto res = in_stage("resources", [&] { return Resources::load(cfg); });
  std::map<std::string, std::vector<text::CleanedTweet>> cleaned;
  in_stage("clean", [&] {
    for (const auto& [name, path] : splits) {
      cleaned.emplace(name, clean_tweets(data.at(name).raw(), res, worker_count(cfg)));
      const auto p = cfg.out_dir / ("cleaned_" + name + ".tsv");
      write_cleaned(p, cleaned.at(name));
      manifest.record("cleaned_" + name, p);
    }
  });

  in_stage("train-asc", [&] {
    train_sentiment_models(cfg, cfg.asc && cfg.asc_checkpoint.empty(), cfg.distant, manifest);
  });
  const auto models = in_stage("load-asc", [&] { return load_feature_models(cfg); });

  std::map<std::string, lex::FeatureTable> tables;
  in_stage("featurize", [&] {
    for (const auto& [name, path] : splits) {
      tables.emplace(name, lex::FeatureTable::from_rows(data.at(name).ids(),
                                                       featurize(cleaned.at(name), res, models, cfg)));
      const auto p = cfg.out_dir / ("features_" + name + ".csv");
      lex::write_csv(p, tables.at(name));
      manifest.record("features_" + name, p);
    }
  });

  const auto bundle = in_stage("train-head", [&] {
    auto b = train_head(tables.at("train"), data.at("train"), task, cfg);
    log::info("head: " + std::to_string(b.features.size()) + " of " + std::to_string(tables.at("train").names.size()) +
              " features kept, final loss " + str::format_double(b.history.empty() ? 0.0 : b.history.back()));
    const auto p = cfg.out_dir / "head.ckpt";
    save_bundle(p, b, cfg.seed, cfg.digest());
    manifest.record("head", p);
    return b;
  });

  std::optional<calib::CalibrationThresholds> thresholds;
  if (task.ordinal())
    in_stage("calibrate", [&] {
      const auto r = calibrate(bundle, tables.at("train"), data.at("train"), cfg);
      log::info("thresholds: train Pearson " + str::format_double(r.pearson) + (r.exhaustive ? " (exhaustive)" : " (beam)"));
      const auto p = cfg.out_dir / "thresholds.json";
      write_thresholds(p, r, cfg.seed, cfg.digest());
      manifest.record("thresholds", p);
      thresholds = r.thresholds;
    });

  RunSummary summary{cfg.out_dir, {}, false};
  in_stage("predict", [&] {
    for (const auto& [name, path] : splits) {
      const auto pred = finalize(bundle, predict_raw(bundle, tables.at(name)), thresholds);
      const auto p = cfg.out_dir / ("predictions_" + name + ".tsv");
      write_predictions(p, pred, task);
      manifest.record("predictions_" + name, p);
      summary.metrics[name] = in_stage("evaluate", [&] { return evaluate(pred, data.at(name), task); });
    }
  });
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [name, e] : summary.metrics) {
    metrics[name] = {{"metric", e.metric}, {"value", e.value}, {"reported", calib::truncate3(e.value)}, {"n", e.n}};
    log::info(name + " " + e.metric + " " + str::format_double(e.value));
  }
  {
    const auto p = cfg.out_dir / "metrics.json";
    write_json(p, {{"seed", cfg.seed}, {"config_digest", cfg.digest()}, {"task", task.name()}, {"metrics", metrics}});
    manifest.record("metrics", p);
  }

  // The importance report is diagnostic: when the training matrix cannot
  // support an OLS fit the run still stands, and the manifest says why.
  if (!task.multilabel()) {
    try {
      const auto rep = importance(tables.at("train"), data.at("train"), task, cfg.min_support);
      rep.write_tsv(cfg.out_dir / "importance.tsv");
      rep.write_groups_tsv(cfg.out_dir / "importance_groups.tsv");
      manifest.record("importance", cfg.out_dir / "importance.tsv");
      manifest.record("importance_groups", cfg.out_dir / "importance_groups.tsv");
      summary.importance_written = true;
    } catch (const Error& e) {
      if (dynamic_cast<const UsageError*>(&e)) throw;
      log::warn(std::string("importance report skipped: ") + e.what());
      manifest.note("importance_skipped", e.what());
    }
  }
  return summary;
}

}  // namespace ascnet::app

// Command-line driver. Exit codes: 0 success, 1 usage, 2 data, 3 numerical.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ascnet/app/run.hpp"
#include "ascnet/common/log.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/lex/feature_table.hpp"

namespace fs = std::filesystem;
using namespace ascnet;
using namespace ascnet::app;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string task, emotion, out_dir;
  std::optional<std::size_t> threads;
  bool verbose = false, quiet = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "INI run configuration")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "override [run] seed");
    app->add_option("--task", task, "V-reg, V-oc, EI-reg, EI-oc or E-c");
    app->add_option("--emotion", emotion, "anger, fear, joy or sadness (EI tasks)");
    app->add_option("--out-dir", out_dir, "output directory");
    app->add_option("--threads", threads, "worker threads for cleaning and featurization");
    app->add_flag("-v,--verbose", verbose, "debug logging");
    app->add_flag("-q,--quiet", quiet, "warnings only");
  }

  RunConfig load() const {
    RunConfig cfg = config.empty() ? RunConfig{} : RunConfig::load(config);
    if (seed) cfg.seed = *seed;
    if (!task.empty()) {
      cfg.task = task;
      cfg.emotion.clear();
    }
    if (!emotion.empty()) cfg.emotion = emotion;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads) cfg.threads = *threads;
    log::set_level(quiet ? log::Level::warn : verbose ? log::Level::debug : log::Level::info);
    return cfg;
  }
};

fs::path or_default(const std::string& given, const fs::path& fallback, const char* what) {
  if (!given.empty()) return given;
  if (fallback.empty()) throw UsageError(std::string("no ") + what + " given and none in the config");
  return fallback;
}

std::string stem(const fs::path& p) { return p.stem().string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ascnet: tweet affect regression and classification"};
  app.require_subcommand(1);
  Common common;

  std::string input, output, format, features, gold, head, thresholds_path, corpus;
  std::vector<std::string> preds, golds;
  bool distant = false;

  auto* clean = app.add_subcommand("clean", "clean tweets into simple and complex token streams");
  clean->add_option("--input", input, "data file (default: [data] train)");
  clean->add_option("--output", output, "cleaned TSV (default: <out>/cleaned_<name>.tsv)");
  clean->add_option("--format", format, "semeval, three_class or multilabel");

  auto* featurize_cmd = app.add_subcommand("featurize", "write the feature CSV for a data file");
  featurize_cmd->add_option("--input", input, "data file (default: [data] train)");
  featurize_cmd->add_option("--output", output, "feature CSV (default: <out>/features_<name>.csv)");

  auto* train_asc = app.add_subcommand("train-asc", "train the sentiment model on the 3-class corpus");
  train_asc->add_flag("--distant", distant, "train the four keyword-supervised models instead");
  train_asc->add_option("--corpus", corpus, "3-class corpus (default: [data] corpus)");

  auto* train_head_cmd = app.add_subcommand("train-head", "fit the task head on a feature CSV");
  train_head_cmd->add_option("--features", features, "training features (default: <out>/features_train.csv)");
  train_head_cmd->add_option("--gold", gold, "training labels (default: [data] train)");
  train_head_cmd->add_option("--output", output, "head checkpoint (default: <out>/head.ckpt)");

  auto* calibrate_cmd = app.add_subcommand("calibrate", "search ordinal thresholds on training scores");
  calibrate_cmd->add_option("--head", head, "head checkpoint (default: <out>/head.ckpt)");
  calibrate_cmd->add_option("--features", features, "training features (default: <out>/features_train.csv)");
  calibrate_cmd->add_option("--gold", gold, "training labels (default: [data] train)");
  calibrate_cmd->add_option("--output", output, "thresholds JSON (default: <out>/thresholds.json)");

  auto* predict_cmd = app.add_subcommand("predict", "predict from a feature CSV");
  predict_cmd->add_option("--head", head, "head checkpoint (default: <out>/head.ckpt)");
  predict_cmd->add_option("--features", features, "feature CSV")->required();
  predict_cmd->add_option("--thresholds", thresholds_path, "thresholds JSON (ordinal tasks; default: <out>/thresholds.json)");
  predict_cmd->add_option("--output", output, "predictions TSV (default: <out>/predictions_<name>.tsv)");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "score predictions against gold files");
  evaluate_cmd->add_option("--pred", preds, "prediction TSV (repeat for several EI emotions)")->required();
  evaluate_cmd->add_option("--gold", golds, "gold file, paired with --pred in order")->required();

  auto* importance_cmd = app.add_subcommand("importance", "Pratt importance of the features");
  importance_cmd->add_option("--features", features, "training features (default: <out>/features_train.csv)");
  importance_cmd->add_option("--gold", gold, "training labels (default: [data] train)");
  importance_cmd->add_option("--output", output, "report prefix (default: <out>/importance)");

  auto* run_cmd = app.add_subcommand("run", "the whole pipeline from one config");

  for (auto* sub : app.get_subcommands({})) common.attach(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = common.load();
    if (!corpus.empty()) cfg.corpus = corpus;

    if (evaluate_cmd->parsed()) {
      std::vector<fs::path> p(preds.begin(), preds.end()), g(golds.begin(), golds.end());
      std::cout << evaluate_files(p, g, cfg).text();
      return 0;
    }
    if (run_cmd->parsed()) {
      const auto s = run_pipeline(cfg);
      for (const auto& [split, e] : s.metrics)
        std::cout << split << '\t' << e.metric << '\t' << str::format_double(e.value) << '\n';
      return 0;
    }

    cfg.validate();
    OutputLock lock(cfg.out_dir);
    Manifest manifest(cfg.out_dir, cfg.seed, cfg.digest());
    const auto task = [&] { return cfg.task_spec(); };

    if (clean->parsed()) {
      const auto in = or_default(input, cfg.train, "input");
      const Format f = !format.empty() ? format_from_string(format)
                       : !cfg.format.empty() ? format_from_string(cfg.format)
                                             : default_format(task());
      const auto d = ingest(in, f, IngestOptions{std::nullopt, cfg.compress_labels});
      std::cerr << distribution_report(d);
      const auto out = output.empty() ? cfg.out_dir / ("cleaned_" + stem(in) + ".tsv") : fs::path(output);
      write_cleaned(out, clean_tweets(d.raw(), Resources::load(cfg), worker_count(cfg)));
      manifest.record(out.stem().string(), out);
    } else if (featurize_cmd->parsed()) {
      const auto in = or_default(input, cfg.train, "input");
      const auto res = Resources::load(cfg);
      const auto table = featurize_file(in, cfg, res, load_feature_models(cfg));
      const auto out = output.empty() ? cfg.out_dir / ("features_" + stem(in) + ".csv") : fs::path(output);
      lex::write_csv(out, table);
      manifest.record(out.stem().string(), out);
    } else if (train_asc->parsed()) {
      train_sentiment_models(cfg, !distant, distant, manifest);
    } else if (train_head_cmd->parsed()) {
      const auto table = lex::read_csv(or_default(features, cfg.out_dir / "features_train.csv", "features"));
      const auto g = ingest_for(or_default(gold, cfg.train, "gold file"), cfg, task());
      const auto b = train_head(table, g, task(), cfg);
      const auto out = output.empty() ? cfg.out_dir / "head.ckpt" : fs::path(output);
      save_bundle(out, b, cfg.seed, cfg.digest());
      manifest.record("head", out);
      std::cerr << b.features.size() << " features, final loss "
                << str::format_double(b.history.empty() ? 0.0 : b.history.back()) << '\n';
    } else if (calibrate_cmd->parsed()) {
      const auto b = load_bundle(or_default(head, cfg.out_dir / "head.ckpt", "head"));
      const auto table = lex::read_csv(or_default(features, cfg.out_dir / "features_train.csv", "features"));
      const auto g = ingest_for(or_default(gold, cfg.train, "gold file"), cfg, b.task);
      const auto r = calibrate(b, table, g, cfg);
      const auto out = output.empty() ? cfg.out_dir / "thresholds.json" : fs::path(output);
      write_thresholds(out, r, cfg.seed, cfg.digest());
      manifest.record("thresholds", out);
      std::cerr << "train Pearson " << str::format_double(r.pearson) << '\n';
    } else if (predict_cmd->parsed()) {
      const auto b = load_bundle(or_default(head, cfg.out_dir / "head.ckpt", "head"));
      const auto table = lex::read_csv(features);
      std::optional<calib::CalibrationThresholds> t;
      if (b.task.ordinal()) t = read_thresholds(or_default(thresholds_path, cfg.out_dir / "thresholds.json", "thresholds"));
      const auto pred = finalize(b, predict_raw(b, table), t);
      auto name = stem(features);
      if (name.rfind("features_", 0) == 0) name = name.substr(9);
      const auto out = output.empty() ? cfg.out_dir / ("predictions_" + name + ".tsv") : fs::path(output);
      write_predictions(out, pred, b.task);
      manifest.record(out.stem().string(), out);
    } else if (importance_cmd->parsed()) {
      const auto table = lex::read_csv(or_default(features, cfg.out_dir / "features_train.csv", "features"));
      const auto g = ingest_for(or_default(gold, cfg.train, "gold file"), cfg, task());
      const auto rep = importance(table, g, task(), cfg.min_support);
      const std::string prefix = output.empty() ? (cfg.out_dir / "importance").string() : output;
      rep.write_tsv(prefix + ".tsv");
      rep.write_groups_tsv(prefix + "_groups.tsv");
      manifest.record("importance", prefix + ".tsv");
      manifest.record("importance_groups", prefix + "_groups.tsv");
      for (const auto& s : rep.shares) std::cout << s.group << '\t' << s.dim << '\t' << str::format_double(s.percent) << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    // Filesystem and parse failures from the standard library land here.
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
}

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ascnet/app/config.hpp"
#include "ascnet/app/stages.hpp"
#include "ascnet/common/error.hpp"

namespace ascnet::app {

// Exclusive claim on an output directory: `.lock` is created with O_EXCL
// and removed on destruction. A second holder gets a UsageError.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

// run_manifest.json in the output directory: seed, config digest and the
// digest of every artifact written under them. No clock values, so two
// identical runs write identical manifests.
class Manifest {
 public:
  Manifest(std::filesystem::path dir, std::uint64_t seed, std::string config_digest);
  // Records (or replaces) an artifact and rewrites the manifest.
  void record(const std::string& name, const std::filesystem::path& file);
  void note(const std::string& key, const nlohmann::json& value);
  const nlohmann::json& json() const { return doc_; }

 private:
  void flush() const;
  std::filesystem::path dir_;
  nlohmann::json doc_;
};

// Re-raises a library error from `fn` with "<stage>: " prepended, keeping
// its type (and so its exit code).
template <class Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn());

// Ingests a labelled file for `task`; EI files take their emotion from the
// dimension column when the task carries none.
Dataset ingest_for(const std::filesystem::path& path, const RunConfig& cfg, const TaskSpec& task);
Dataset ingest_corpus(const RunConfig& cfg);

// Loads sentiment models for featurization: the general model from
// `asc_checkpoint` or <out>/asc.ckpt, distant ones from <out>/asc_<e>.ckpt.
FeatureModels load_feature_models(const RunConfig& cfg);

struct TrainedModels {
  std::optional<std::filesystem::path> general;
  std::vector<std::filesystem::path> distant;
};
// Trains what the feature switches ask for and writes the checkpoints.
TrainedModels train_sentiment_models(const RunConfig& cfg, bool general, bool distant, Manifest& manifest);

lex::FeatureTable featurize_file(const std::filesystem::path& data, const RunConfig& cfg, const Resources& res,
                                 const FeatureModels& models);

void write_thresholds(const std::filesystem::path& path, const calib::GridSearchResult& r, std::uint64_t seed,
                      const std::string& digest);
calib::CalibrationThresholds read_thresholds(const std::filesystem::path& path);

struct EvaluationReport {
  std::vector<std::pair<std::string, Evaluation>> parts;  // by dimension
  std::optional<double> macro_average;                    // EI with several files
  std::string text() const;
};
EvaluationReport evaluate_files(const std::vector<std::filesystem::path>& preds,
                                const std::vector<std::filesystem::path>& golds, const RunConfig& cfg);

struct RunSummary {
  std::filesystem::path out_dir;
  std::map<std::string, Evaluation> metrics;  // by split
  bool importance_written = false;
};

// clean -> sentiment models -> featurize -> prune and standardize -> head
// -> calibrate (-oc) -> predict -> evaluate -> importance.
RunSummary run_pipeline(const RunConfig& cfg);

// ---- implementation ---------------------------------------------------------

template <class Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(stage + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(stage + ": " + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(stage + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(stage + ": " + e.what());
  } catch (const Error& e) {
    throw Error(stage + ": " + e.what());
  }
}

}  // namespace ascnet::app

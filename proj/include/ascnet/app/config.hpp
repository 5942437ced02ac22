#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"
#include "ascnet/app/task.hpp"

namespace ascnet::app {

// One run, read from an INI file with sections; every key is optional and
// unknown sections or keys are rejected. Relative paths resolve against the
// config file's directory.
struct RunConfig {
  // [run]
  std::uint64_t seed = 1;
  std::string task = "V-reg";
  std::string emotion;
  std::filesystem::path out_dir = "out";
  std::size_t threads = 0;  // 0: one per hardware thread

  // [data]
  std::filesystem::path train, dev, test;
  std::string format;                 // empty: from the task
  std::filesystem::path corpus;       // 3-class tweets for the sentiment model
  bool compress_labels = false;       // corpus uses five labels

  // [paths]
  std::filesystem::path dicts, lexicons, affect_lexicon, distant_keywords;
  std::filesystem::path asc_checkpoint;  // reuse instead of training

  // [embeddings] slot -> word vector file
  std::map<std::string, std::filesystem::path> embeddings;

  // [features]
  bool lexical = true;
  bool asc = true;
  bool distant = false;
  std::size_t min_support = 8;

  // [asc]
  std::size_t asc_epochs = 10;
  std::size_t asc_batch_size = 32;
  double asc_learning_rate = 0.01;
  std::size_t seq_len = 40;
  std::size_t gru_hidden = 200;
  std::size_t filters_per_width = 100;
  std::size_t penultimate_dim = 30;
  std::size_t distant_penultimate_dim = 15;
  std::size_t frozen_epochs = 1;
  std::size_t trainable_epochs = 6;
  std::size_t vocab_min_count = 1;

  // [head] zero means the task default
  double head_learning_rate = 0.0;
  std::size_t head_epochs = 0;
  std::size_t head_batch_size = 0;
  std::size_t copies = 300;

  // [calibration]
  std::size_t max_candidates = 200;
  std::size_t beam_width = 1000;

  static RunConfig load(const std::filesystem::path& path);
  TaskSpec task_spec() const { return TaskSpec::make(task, emotion); }
  // Checks values and that referenced input files exist.
  void validate() const;
  nlohmann::json to_json() const;
  // Digest of to_json() with output-only settings (out_dir, threads) left
  // out, so identical experiments share it.
  std::string digest() const;
};

}  // namespace ascnet::app

#include "ascnet/app/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>

#include "ascnet/app/dataset.hpp"
#include "ascnet/asc/submodel.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/common/strings.hpp"

namespace ascnet::app {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&, const std::filesystem::path&)>;

std::size_t to_size(const std::string& v) {
  const long long n = str::parse_int(v);
  if (n < 0) throw DataError("expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& v) {
  const auto s = str::to_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw DataError("expected true/false, got '" + v + "'");
}

std::filesystem::path resolve(const std::string& v, const std::filesystem::path& base) {
  std::filesystem::path p(v);
  return p.is_absolute() || v.empty() ? p : base / p;
}

#define ASCNET_SIZE(field) [](RunConfig& c, const std::string& v, const std::filesystem::path&) { c.field = to_size(v); }
#define ASCNET_BOOL(field) [](RunConfig& c, const std::string& v, const std::filesystem::path&) { c.field = to_bool(v); }
#define ASCNET_REAL(field) [](RunConfig& c, const std::string& v, const std::filesystem::path&) { c.field = str::parse_double(v); }
#define ASCNET_TEXT(field) [](RunConfig& c, const std::string& v, const std::filesystem::path&) { c.field = v; }
#define ASCNET_PATH(field) [](RunConfig& c, const std::string& v, const std::filesystem::path& b) { c.field = resolve(v, b); }

const std::map<std::string, Setter>& schema() {
  static const std::map<std::string, Setter> s = {
      {"run.seed", [](RunConfig& c, const std::string& v, const std::filesystem::path&) {
         const long long n = str::parse_int(v);
         if (n < 0) throw DataError("seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(n);
       }},
      {"run.task", ASCNET_TEXT(task)},
      {"run.emotion", ASCNET_TEXT(emotion)},
      {"run.out_dir", ASCNET_PATH(out_dir)},
      {"run.threads", ASCNET_SIZE(threads)},
      {"data.train", ASCNET_PATH(train)},
      {"data.dev", ASCNET_PATH(dev)},
      {"data.test", ASCNET_PATH(test)},
      {"data.format", ASCNET_TEXT(format)},
      {"data.corpus", ASCNET_PATH(corpus)},
      {"data.compress_labels", ASCNET_BOOL(compress_labels)},
      {"paths.dicts", ASCNET_PATH(dicts)},
      {"paths.lexicons", ASCNET_PATH(lexicons)},
      {"paths.affect_lexicon", ASCNET_PATH(affect_lexicon)},
      {"paths.distant_keywords", ASCNET_PATH(distant_keywords)},
      {"paths.asc_checkpoint", ASCNET_PATH(asc_checkpoint)},
      {"features.lexical", ASCNET_BOOL(lexical)},
      {"features.asc", ASCNET_BOOL(asc)},
      {"features.distant", ASCNET_BOOL(distant)},
      {"features.min_support", ASCNET_SIZE(min_support)},
      {"asc.epochs", ASCNET_SIZE(asc_epochs)},
      {"asc.batch_size", ASCNET_SIZE(asc_batch_size)},
      {"asc.learning_rate", ASCNET_REAL(asc_learning_rate)},
      {"asc.seq_len", ASCNET_SIZE(seq_len)},
      {"asc.gru_hidden", ASCNET_SIZE(gru_hidden)},
      {"asc.filters_per_width", ASCNET_SIZE(filters_per_width)},
      {"asc.penultimate_dim", ASCNET_SIZE(penultimate_dim)},
      {"asc.distant_penultimate_dim", ASCNET_SIZE(distant_penultimate_dim)},
      {"asc.frozen_epochs", ASCNET_SIZE(frozen_epochs)},
      {"asc.trainable_epochs", ASCNET_SIZE(trainable_epochs)},
      {"asc.vocab_min_count", ASCNET_SIZE(vocab_min_count)},
      {"head.learning_rate", ASCNET_REAL(head_learning_rate)},
      {"head.epochs", ASCNET_SIZE(head_epochs)},
      {"head.batch_size", ASCNET_SIZE(head_batch_size)},
      {"head.copies", ASCNET_SIZE(copies)},
      {"calibration.max_candidates", ASCNET_SIZE(max_candidates)},
      {"calibration.beam_width", ASCNET_SIZE(beam_width)},
  };
  return s;
}

#undef ASCNET_SIZE
#undef ASCNET_BOOL
#undef ASCNET_REAL
#undef ASCNET_TEXT
#undef ASCNET_PATH

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw UsageError("cannot read config: " + std::string(e.what()));
  }
  RunConfig c;
  const auto base = path.parent_path();
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) throw UsageError(path.string() + ": key '" + section + "' outside a section");
    for (const auto& [key, value] : keys) {
      const std::string v = value.get_value<std::string>();
      if (section == "embeddings") {
        if (std::find(asc::kSlots.begin(), asc::kSlots.end(), key) == asc::kSlots.end())
          throw UsageError(path.string() + ": unknown embedding slot '" + key + "'");
        c.embeddings[key] = resolve(v, base);
        continue;
      }
      const auto it = schema().find(section + "." + key);
      if (it == schema().end()) throw UsageError(path.string() + ": unknown key [" + section + "] " + key);
      try {
        it->second(c, std::string(str::trim(v)), base);
      } catch (const DataError& e) {
        throw UsageError(path.string() + ": [" + section + "] " + key + ": " + e.what());
      }
    }
  }
  return c;
}

void RunConfig::validate() const {
  const auto spec = task_spec();
  if (!format.empty() && format_from_string(format) == Format::multilabel && !spec.multilabel())
    throw UsageError("multilabel data only fits the E-c task");
  auto need_file = [](const std::filesystem::path& p, const char* what) {
    if (!p.empty() && !std::filesystem::exists(p))
      throw UsageError(std::string(what) + " not found: " + p.string());
  };
  need_file(train, "training data");
  need_file(dev, "dev data");
  need_file(test, "test data");
  need_file(corpus, "sentiment corpus");
  need_file(affect_lexicon, "affect lexicon");
  need_file(distant_keywords, "keyword list");
  need_file(asc_checkpoint, "sentiment model checkpoint");
  if (!dicts.empty() && !std::filesystem::is_directory(dicts)) throw UsageError("dictionary directory not found: " + dicts.string());
  if (!lexicons.empty() && !std::filesystem::is_directory(lexicons)) throw UsageError("lexicon directory not found: " + lexicons.string());
  for (const auto& [slot, p] : embeddings) need_file(p, ("embeddings for " + slot).c_str());
  if (!lexical && !asc && !distant) throw UsageError("every feature family is switched off");
  if (asc && asc_checkpoint.empty() && corpus.empty())
    throw UsageError("sentiment-model features need [data] corpus or [paths] asc_checkpoint");
  if (distant && corpus.empty()) throw UsageError("distant-supervision features need [data] corpus");
  if (asc_batch_size == 0 || copies == 0 || max_candidates == 0 || beam_width == 0)
    throw UsageError("batch sizes, copies and search widths must be positive");
  if (!(asc_learning_rate > 0.0)) throw UsageError("asc learning rate must be positive");
  if (head_learning_rate < 0.0) throw UsageError("head learning rate must not be negative");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json emb = nlohmann::json::object();
  for (const auto& [k, v] : embeddings) emb[k] = v.generic_string();
  return {{"run", {{"seed", seed}, {"task", task}, {"emotion", emotion}, {"out_dir", out_dir.generic_string()}, {"threads", threads}}},
          {"data",
           {{"train", train.generic_string()},
            {"dev", dev.generic_string()},
            {"test", test.generic_string()},
            {"format", format},
            {"corpus", corpus.generic_string()},
            {"compress_labels", compress_labels}}},
          {"paths",
           {{"dicts", dicts.generic_string()},
            {"lexicons", lexicons.generic_string()},
            {"affect_lexicon", affect_lexicon.generic_string()},
            {"distant_keywords", distant_keywords.generic_string()},
            {"asc_checkpoint", asc_checkpoint.generic_string()}}},
          {"embeddings", emb},
          {"features", {{"lexical", lexical}, {"asc", asc}, {"distant", distant}, {"min_support", min_support}}},
          {"asc",
           {{"epochs", asc_epochs},
            {"batch_size", asc_batch_size},
            {"learning_rate", asc_learning_rate},
            {"seq_len", seq_len},
            {"gru_hidden", gru_hidden},
            {"filters_per_width", filters_per_width},
            {"penultimate_dim", penultimate_dim},
            {"distant_penultimate_dim", distant_penultimate_dim},
            {"frozen_epochs", frozen_epochs},
            {"trainable_epochs", trainable_epochs},
            {"vocab_min_count", vocab_min_count}}},
          {"head", {{"learning_rate", head_learning_rate}, {"epochs", head_epochs}, {"batch_size", head_batch_size}, {"copies", copies}}},
          {"calibration", {{"max_candidates", max_candidates}, {"beam_width", beam_width}}}};
}

std::string RunConfig::digest() const {
  auto j = to_json();
  j["run"].erase("out_dir");
  j["run"].erase("threads");
  return digest_hex(fnv1a64(j.dump()));
}

}  // namespace ascnet::app

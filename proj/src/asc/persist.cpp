#include "ascnet/asc/persist.hpp"

#include "ascnet/common/error.hpp"

namespace ascnet::asc {

namespace {

tensor::Checkpoint make(const nlohmann::json& meta, const std::vector<tensor::NamedParam>& params, std::uint64_t seed) {
  tensor::Checkpoint c;
  c.seed = seed;
  c.metadata = meta;
  c.config_digest = digest_hex(fnv1a64(meta.dump()));
  c.tensors = tensor::Checkpoint::capture(params);
  return c;
}

tensor::Checkpoint open(const std::filesystem::path& path, const char* kind) {
  auto c = tensor::load_checkpoint(path);
  if (c.metadata.value("kind", "") != kind)
    throw DataError(path.string() + ": not a " + std::string(kind) + " checkpoint");
  return c;
}

}  // namespace

void save_asc(const std::filesystem::path& path, const AscModel& model, std::uint64_t seed) {
  nlohmann::json meta = {{"kind", "asc"}};
  meta["configs"] = nlohmann::json::array();
  for (const auto& s : model.subs()) {
    meta["configs"].push_back(s.config().to_json());
    meta["vocab"][to_string(s.config().variant)] = s.vocab().words();
  }
  save_checkpoint(path, make(meta, model.params(), seed));
}

AscModel load_asc(const std::filesystem::path& path) {
  auto c = open(path, "asc");
  try {
    std::vector<SubModelConfig> configs;
    for (const auto& j : c.metadata.at("configs")) configs.push_back(SubModelConfig::from_json(j));
    const auto& v = c.metadata.at("vocab");
    auto vocab_of = [&](const char* key) {
      return v.contains(key) ? Vocab::from_words(v.at(key).get<std::vector<std::string>>()) : Vocab();
    };
    Rng rng(c.seed);
    auto model = build_asc(configs, vocab_of("simple"), vocab_of("complex"), rng);
    auto params = model.params();
    c.restore(params);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad model metadata: " + e.what());
  }
}

void save_submodel(const std::filesystem::path& path, const SubModel& model, std::uint64_t seed) {
  nlohmann::json meta = {{"kind", "submodel"}, {"config", model.config().to_json()}, {"vocab", model.vocab().words()}};
  save_checkpoint(path, make(meta, model.params(), seed));
}

SubModel load_submodel(const std::filesystem::path& path) {
  auto c = open(path, "submodel");
  try {
    Rng rng(c.seed);
    SubModel model(SubModelConfig::from_json(c.metadata.at("config")),
                   Vocab::from_words(c.metadata.at("vocab").get<std::vector<std::string>>()), rng);
    auto params = model.params();
    c.restore(params);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad model metadata: " + e.what());
  }
}

}  // namespace ascnet::asc

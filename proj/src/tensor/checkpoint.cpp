#include "ascnet/tensor/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "ascnet/common/error.hpp"

namespace ascnet::tensor {

namespace {

constexpr char kMagic[8] = {'A', 'S', 'C', 'N', 'E', 'T', 'C', 'K'};

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_le(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("checkpoint truncated reading " + what);
  return to_le(v);
}

}  // namespace

const StoredTensor& Checkpoint::tensor(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t;
  throw DataError("checkpoint has no tensor '" + name + "'");
}

void Checkpoint::restore(std::vector<NamedParam>& params) const {
  for (auto& p : params) {
    const StoredTensor& t = tensor(p.name);
    if (t.shape != p.tensor.shape())
      throw DataError("checkpoint tensor '" + p.name + "' has shape " + shape_str(t.shape) + ", model expects " +
                      shape_str(p.tensor.shape()));
    std::copy(t.values.begin(), t.values.end(), p.tensor.mutable_values().begin());
  }
}

std::vector<StoredTensor> Checkpoint::capture(const std::vector<NamedParam>& params) {
  std::vector<StoredTensor> out;
  for (const auto& p : params)
    out.push_back({p.name, p.tensor.shape(), {p.tensor.values().begin(), p.tensor.values().end()}});
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::vector<const StoredTensor*> all;
  std::vector<StoredTensor> opt_tensors;
  for (const auto& t : ckpt.tensors) all.push_back(&t);

  nlohmann::json header;
  header["format_version"] = ckpt.version;
  header["seed"] = ckpt.seed;
  header["config_digest"] = ckpt.config_digest;
  header["metadata"] = ckpt.metadata;
  if (ckpt.optimizer) {
    const auto& o = *ckpt.optimizer;
    header["optimizer"] = {{"kind", to_string(o.config.kind)},
                           {"learning_rate", o.config.learning_rate},
                           {"beta1", o.config.beta1},
                           {"beta2", o.config.beta2},
                           {"epsilon", o.config.epsilon},
                           {"step_count", o.step_count}};
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& s : o.slots) {
      slots.push_back(s.param);
      opt_tensors.push_back({"opt/first/" + s.param, {s.first.size()}, s.first});
      if (!s.second.empty()) opt_tensors.push_back({"opt/second/" + s.param, {s.second.size()}, s.second});
    }
    header["optimizer"]["slots"] = slots;
  }
  for (const auto& t : opt_tensors) all.push_back(&t);

  nlohmann::json table = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto* t : all) {
    if (shape_size(t->shape) != t->values.size())
      throw ShapeError("checkpoint tensor '" + t->name + "' shape/value mismatch");
    table.push_back({{"name", t->name}, {"shape", t->shape}, {"offset", offset}, {"count", t->values.size()}});
    offset += t->values.size();
  }
  header["tensors"] = table;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, ckpt.version);
  put<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto* t : all)
    for (double v : t->values) put<double>(out, v);
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError(path.string() + " is not a checkpoint file");
  Checkpoint ckpt;
  ckpt.version = get<std::uint32_t>(in, "version");
  if (ckpt.version != kCheckpointVersion)
    throw DataError("unsupported checkpoint format version " + std::to_string(ckpt.version));
  const auto len = get<std::uint64_t>(in, "header length");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw DataError("checkpoint header truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  ckpt.seed = header.at("seed").get<std::uint64_t>();
  ckpt.config_digest = header.at("config_digest").get<std::string>();
  ckpt.metadata = header.at("metadata");

  std::vector<StoredTensor> all;
  for (const auto& entry : header.at("tensors")) {
    StoredTensor t;
    t.name = entry.at("name").get<std::string>();
    t.shape = entry.at("shape").get<Shape>();
    const auto count = entry.at("count").get<std::size_t>();
    if (count != shape_size(t.shape)) throw DataError("checkpoint tensor '" + t.name + "' shape/count mismatch");
    t.values.resize(count);
    for (auto& v : t.values) v = get<double>(in, t.name);
    all.push_back(std::move(t));
  }
  for (auto& t : all)
    if (t.name.rfind("opt/", 0) != 0) ckpt.tensors.push_back(std::move(t));

  if (header.contains("optimizer")) {
    const auto& o = header["optimizer"];
    OptimizerState state;
    state.config.kind = optimizer_kind_from_string(o.at("kind").get<std::string>());
    state.config.learning_rate = o.at("learning_rate").get<double>();
    state.config.beta1 = o.at("beta1").get<double>();
    state.config.beta2 = o.at("beta2").get<double>();
    state.config.epsilon = o.at("epsilon").get<double>();
    state.step_count = o.at("step_count").get<std::uint64_t>();
    for (const auto& name : o.at("slots")) {
      OptimizerSlot slot;
      slot.param = name.get<std::string>();
      for (const auto& t : all) {
        if (t.name == "opt/first/" + slot.param) slot.first = t.values;
        if (t.name == "opt/second/" + slot.param) slot.second = t.values;
      }
      state.slots.push_back(std::move(slot));
    }
    ckpt.optimizer = std::move(state);
  }
  return ckpt;
}

}  // namespace ascnet::tensor

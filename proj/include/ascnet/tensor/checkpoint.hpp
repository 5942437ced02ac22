#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ascnet/tensor/optim.hpp"
#include "ascnet/tensor/tensor.hpp"

namespace ascnet::tensor {

// On-disk layout (all integers and doubles little-endian):
//
//   "ASCNETCK"                       8-byte magic
//   u32  format version              (kCheckpointVersion)
//   u64  header length in bytes
//   header                           UTF-8 JSON, keys sorted
//   payload                          float64 values
//
// The header carries the seed, the config digest, free-form metadata, and a
// table of tensors {name, shape, offset, count} whose values live in the
// payload at `offset` (counted in doubles). Optimizer moments are stored as
// payload tensors named "opt/<slot>/<param>".
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct StoredTensor {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  std::uint64_t seed = 0;
  std::string config_digest;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<StoredTensor> tensors;
  std::optional<OptimizerState> optimizer;

  const StoredTensor& tensor(const std::string& name) const;
  // Copies stored values into `params` by name; shapes must match.
  void restore(std::vector<NamedParam>& params) const;
  static std::vector<StoredTensor> capture(const std::vector<NamedParam>& params);
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ascnet::tensor

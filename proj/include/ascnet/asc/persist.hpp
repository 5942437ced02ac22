#pragma once

#include <cstdint>
#include <filesystem>

#include "ascnet/asc/model.hpp"
#include "ascnet/tensor/checkpoint.hpp"

namespace ascnet::asc {

// Checkpoints carry the configurations and vocabularies in their metadata,
// so a model is rebuilt from the file alone.
void save_asc(const std::filesystem::path& path, const AscModel& model, std::uint64_t seed);
AscModel load_asc(const std::filesystem::path& path);

void save_submodel(const std::filesystem::path& path, const SubModel& model, std::uint64_t seed);
SubModel load_submodel(const std::filesystem::path& path);

}  // namespace ascnet::asc

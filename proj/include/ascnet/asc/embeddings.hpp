#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "ascnet/asc/vocab.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/tensor/tensor.hpp"

namespace ascnet::asc {

// Word vectors in the common text format: an optional `count dim` line, then
// one `token v1 ... vd` line per word.
struct EmbeddingFile {
  std::size_t dim = 0;
  std::vector<std::string> words;
  std::vector<double> values;  // words.size() x dim, row-major
  std::unordered_map<std::string, std::size_t> index;

  static EmbeddingFile read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;
};

inline constexpr double kEmbeddingInitScale = 0.05;

// [vocab.size(), dim] table: row 0 zeros, rows found in `pretrained` copied,
// everything else (including the unknown row) Uniform(-0.05, 0.05).
tensor::Tensor init_embedding_table(const Vocab& vocab, std::size_t dim, Rng& rng,
                                    const EmbeddingFile* pretrained = nullptr);

// Dumps a trained table back to the text format (padding row omitted).
EmbeddingFile to_embedding_file(const Vocab& vocab, const tensor::Tensor& table);

}  // namespace ascnet::asc

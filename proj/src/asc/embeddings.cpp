#include "ascnet/asc/embeddings.hpp"

#include <algorithm>
#include <fstream>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/tensor/init.hpp"

namespace ascnet::asc {

EmbeddingFile EmbeddingFile::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  EmbeddingFile f;
  std::string line;
  std::size_t lineno = 0, declared = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto parts = str::split_ws(line);
    if (parts.empty()) continue;
    const std::string at = path.string() + ":" + std::to_string(lineno) + ": ";
    auto digits = [](const std::string& w) { return !w.empty() && std::all_of(w.begin(), w.end(), str::is_ascii_digit); };
    if (lineno == 1 && parts.size() == 2 && digits(parts[0]) && digits(parts[1])) {
      declared = static_cast<std::size_t>(str::parse_int(parts[0]));
      f.dim = static_cast<std::size_t>(str::parse_int(parts[1]));
      have_header = true;
      continue;
    }
    if (parts.size() < 2) throw DataError(at + "expected a token followed by its vector");
    if (f.dim == 0) f.dim = parts.size() - 1;
    if (parts.size() - 1 != f.dim)
      throw DataError(at + "vector has " + std::to_string(parts.size() - 1) + " values, expected " + std::to_string(f.dim));
    if (!f.index.emplace(parts[0], f.words.size()).second) throw DataError(at + "duplicate token '" + parts[0] + "'");
    f.words.push_back(parts[0]);
    for (std::size_t k = 1; k < parts.size(); ++k) f.values.push_back(str::parse_double(parts[k]));
  }
  if (have_header && declared != f.words.size())
    throw DataError(path.string() + ": header declares " + std::to_string(declared) + " vectors, found " +
                    std::to_string(f.words.size()));
  return f;
}

void EmbeddingFile::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << words.size() << ' ' << dim << '\n';
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << words[i];
    for (std::size_t k = 0; k < dim; ++k) out << ' ' << str::format_double(values[i * dim + k]);
    out << '\n';
  }
}

tensor::Tensor init_embedding_table(const Vocab& vocab, std::size_t dim, Rng& rng, const EmbeddingFile* pretrained) {
  if (pretrained && pretrained->dim != dim)
    throw DataError("embedding file has dimension " + std::to_string(pretrained->dim) + ", model expects " +
                    std::to_string(dim));
  auto table = tensor::uniform({vocab.size(), dim}, -kEmbeddingInitScale, kEmbeddingInitScale, rng);
  auto v = table.mutable_values();
  std::fill(v.begin(), v.begin() + static_cast<long>(dim), 0.0);
  if (pretrained)
    for (std::size_t id = 2; id < vocab.size(); ++id) {
      const auto it = pretrained->index.find(vocab.word(id));
      if (it == pretrained->index.end()) continue;
      std::copy_n(pretrained->values.begin() + static_cast<long>(it->second * dim), dim,
                  v.begin() + static_cast<long>(id * dim));
    }
  return table;
}

EmbeddingFile to_embedding_file(const Vocab& vocab, const tensor::Tensor& table) {
  EmbeddingFile f;
  f.dim = table.dim(1);
  const auto v = table.values();
  for (std::size_t id = 1; id < vocab.size(); ++id) {
    f.index.emplace(vocab.word(id), f.words.size());
    f.words.push_back(vocab.word(id));
    f.values.insert(f.values.end(), v.begin() + static_cast<long>(id * f.dim), v.begin() + static_cast<long>((id + 1) * f.dim));
  }
  return f;
}

}  // namespace ascnet::asc

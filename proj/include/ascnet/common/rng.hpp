#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ascnet {

// Seeded generator whose outputs are identical on every platform: the raw
// engine is std::mt19937_64 (fully specified by the standard) and all
// derived draws are computed here instead of through the
// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

  // Independent stream for a named pipeline stage.
  static Rng derive(std::uint64_t seed, std::string_view stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller.
  double normal();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// 64-bit FNV-1a; used for config digests and stream derivation.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// Hex rendering of a 64-bit digest.
std::string digest_hex(std::uint64_t digest);

}  // namespace ascnet

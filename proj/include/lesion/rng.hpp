#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace lesion {

// Seeded generator with fixed-formula conversions so draws are reproducible
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  bool bernoulli(double p) { return uniform() < p; }
  // Unbiased integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t hash_string(std::string_view text);

// Mixes a list of integers into one well-distributed seed. Used to give each
// (seed, sample, epoch, ...) tuple its own independent stream.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace lesion

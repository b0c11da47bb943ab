#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nesa {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded generator with hand-rolled distributions so that draws are
// bit-identical across standard libraries (std::normal_distribution and
// std::shuffle are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal(double mean = 0.0, double stddev = 1.0);

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n); n must be positive.
  std::size_t uniform_int(std::size_t n);

  // Derive an independent generator for a named stream.
  Rng fork(std::uint64_t stream) {
    return Rng(splitmix64(next_u64() ^ splitmix64(stream)));
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      std::size_t j = uniform_int(i + 1);
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Stable stream-seed derivation for (seed, tag, index) triples.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0);

}  // namespace nesa

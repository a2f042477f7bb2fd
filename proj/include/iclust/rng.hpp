#pragma once

#include <cstdint>
#include <random>

namespace iclust {

// Mixes a 64-bit value (splitmix64 finalizer). Used to derive independent
// substream seeds from (master seed, tag...) tuples so that parallel chains
// produce the same draws no matter which thread runs them.
std::uint64_t mix64(std::uint64_t x);

// Seed for substream `(a, b)` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Deterministic random source. The raw engine is std::mt19937_64; all draw
// helpers are hand-rolled on top of next_u64 so that sequences do not depend
// on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1.
  int uniform_int(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<std::uint64_t>(n)) >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (one value per call).
  double normal();

 private:
  std::mt19937_64 gen_;
};

}  // namespace iclust

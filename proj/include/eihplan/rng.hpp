#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eihplan {

// Deterministic random stream. The raw generator is std::mt19937_64 (which is
// bit-exact everywhere), but all value transforms are done by hand because the
// std::*_distribution adapters are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1): 53 mantissa bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with unit mean.
  double exponential() { return -std::log1p(-uniform()); }

  // Derive an independent stream for a tagged sub-task of a seeded run.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace eihplan

#pragma once

#include <cstdint>
#include <random>

namespace d2d {

// Random source with platform-independent variate mappings. The engine
// output of std::mt19937_64 is fully specified by the standard; the
// std::*_distribution adaptors are not, so uniform and normal draws are
// derived here by hand to keep scenarios bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used to derive independent per-cell seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace d2d

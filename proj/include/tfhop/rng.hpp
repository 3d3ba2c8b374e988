#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>

namespace tfhop {

// Deterministic RNG wrapper. All variate transforms are written out explicitly
// so that identical seeds give identical streams across compilers; the standard
// distributions are implementation-defined and avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; pairs are cached.
  double normal();

  // Inverse-CDF sample from an unnormalized nonnegative weight vector.
  int sample_discrete(std::span<const double> weights);

  // Uniform point in the disk of given radius centered at the origin.
  std::array<double, 2> in_disk(double radius);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derive an independent stream seed from a base seed and a stream tag
// (splitmix64 finalizer; stable across platforms).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace tfhop

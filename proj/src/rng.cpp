#include "tfhop/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "tfhop/units.hpp"

namespace tfhop {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1).
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

int Rng::sample_discrete(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("sample_discrete: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("sample_discrete: bad weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("sample_discrete: zero total weight");
  double u = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding can push u past the last partial sum; return the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

std::array<double, 2> Rng::in_disk(double radius) {
  // Rejection sampling keeps the distribution exactly uniform.
  for (;;) {
    double x = uniform(-1.0, 1.0);
    double y = uniform(-1.0, 1.0);
    if (x * x + y * y <= 1.0) return {radius * x, radius * y};
  }
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tfhop

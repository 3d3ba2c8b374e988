#include "tfhop/mixed_strategy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tfhop {

void MixedStrategy::validate(double gamma) const {
  if (probs.empty()) throw std::invalid_argument("MixedStrategy: empty");
  double sum = 0.0;
  double floor = gamma > 0.0 ? gamma / static_cast<double>(probs.size()) : 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("MixedStrategy: negative or non-finite mass");
    if (gamma > 0.0 && p + 1e-12 < floor)
      throw std::invalid_argument("MixedStrategy: mass below exploration floor");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("MixedStrategy: sums to " + std::to_string(sum));
}

MixedStrategy uniform_strategy(int n) {
  if (n < 1) throw std::invalid_argument("uniform_strategy: n must be >= 1");
  MixedStrategy p;
  p.probs.assign(static_cast<std::size_t>(n), 1.0 / n);
  return p;
}

MixedStrategy delta_strategy(int n, int index) {
  if (n < 1 || index < 0 || index >= n) throw std::invalid_argument("delta_strategy: bad index");
  MixedStrategy p;
  p.probs.assign(static_cast<std::size_t>(n), 0.0);
  p.probs[static_cast<std::size_t>(index)] = 1.0;
  return p;
}

int sample_index(const MixedStrategy& p, Rng& rng) {
  return rng.sample_discrete(p.probs);
}

}  // namespace tfhop

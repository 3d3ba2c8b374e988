#pragma once

#include <vector>

#include "tfhop/rng.hpp"

namespace tfhop {

// Probability vector over the strategy set. Entries are >= 0 and sum to 1
// within 1e-12; with exploration gamma active every entry is >= gamma/n.
struct MixedStrategy {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  double operator[](int i) const { return probs[static_cast<std::size_t>(i)]; }

  // Throws if the simplex invariants are violated.
  void validate(double gamma = 0.0) const;
};

MixedStrategy uniform_strategy(int n);
MixedStrategy delta_strategy(int n, int index);  // point mass, index 0-based

// Samples a 0-based index from the strategy.
int sample_index(const MixedStrategy& p, Rng& rng);

}  // namespace tfhop

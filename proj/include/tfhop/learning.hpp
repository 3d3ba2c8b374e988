#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfhop/mixed_strategy.hpp"

namespace tfhop {

// Max-shifted softmax; invariant to uniform score shifts.
std::vector<double> softmax(std::span<const double> scores);

// Importance-weighted one-point utility estimate. With exploration active
// (gamma != 0) the played coordinate gets U/p and the rest 0; the loss-based
// gamma = 0 variant gives 1 everywhere except 1 - (1-U)/p on the played
// coordinate. Requires 0 < u_bar < 1 and p(played) > 0.
std::vector<double> iw_estimate(double u_bar, int played, const MixedStrategy& p, double gamma);

struct ExternalDualState {
  std::vector<double> scores;
  explicit ExternalDualState(int n) : scores(static_cast<std::size_t>(n), 0.0) {}
};

// Entropic score update + softmax + gamma-mixing:
//   z += eta * estimate;  p = (1-gamma) softmax(z) + gamma/n
MixedStrategy external_update(ExternalDualState& state, const std::vector<double>& estimate,
                              double eta, double gamma);

struct InternalDualState {
  std::vector<std::vector<double>> row_scores;  // n x n, source x destination
  std::vector<std::vector<double>> rows;        // assembled row-stochastic Q
  explicit InternalDualState(int n);
  int size() const { return static_cast<int>(row_scores.size()); }
};

// Left fixed point p = pQ by power iteration, warm-started from `warm` when
// given (uniform otherwise). Guarantees ||pQ - p||_1 <= tol on success and
// throws StationaryError carrying the residual when the cap is exhausted.
struct StationaryError : std::runtime_error {
  double residual;
  StationaryError(const std::string& what, double r) : std::runtime_error(what), residual(r) {}
};

MixedStrategy stationary_distribution(const std::vector<std::vector<double>>& q,
                                      const MixedStrategy* warm = nullptr, double tol = 1e-10,
                                      long max_iterations = 1000000);

// Row-wise update z_s(d) += eta p(s) estimate(d), optional positive-part view
// of the scores (accumulated scores stay unclipped), softmax + gamma-mixing per
// row, then the stationary distribution of the assembled matrix.
MixedStrategy internal_update(InternalDualState& state, const std::vector<double>& estimate,
                              const MixedStrategy& p, double eta, double gamma,
                              bool positive_part);

enum class ScheduleRegime { kExplored, kUnexplored };

struct ParamSchedule {
  double eta = 0.0;
  double gamma = 0.0;
};

// Horizon-optimal constants: explored regime gives
//   gamma = (n ln n)^{1/3} / T^{1/3},  eta = (ln n)^{2/3} / (n^{1/3} T^{2/3});
// the unexplored regime gives gamma = 0, eta = sqrt(ln n / (n T)).
// `scale` multiplies eta.
ParamSchedule theoretical_schedule(int n, int horizon, ScheduleRegime regime, double scale = 1.0);

// Expected-regret bound right-hand sides. gamma = 0 selects the
// exploration-free variant log(n)/eta + eta T n.
double regret_bound_external(int n, int horizon, double eta, double gamma,
                             double gamma_max = 0.999);
double regret_bound_internal(int n, int horizon, double eta, double gamma,
                             double gamma_max = 0.999);

// Exploration schedule gamma_tau, linear in the epoch index:
// gamma_1 = start, gamma_T = end.
double linear_decay(double start, double end, int epoch, int horizon);

}  // namespace tfhop

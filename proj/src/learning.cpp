#include "tfhop/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tfhop {

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("softmax: empty scores");
  double zmax = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - zmax);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> iw_estimate(double u_bar, int played, const MixedStrategy& p, double gamma) {
  if (!(u_bar > 0.0 && u_bar <= 1.0))
    throw std::invalid_argument("iw_estimate: utility must lie in (0,1]");
  if (played < 0 || played >= p.size()) throw std::invalid_argument("iw_estimate: bad played index");
  double p_played = p[played];
  if (p_played <= 0.0) throw std::invalid_argument("iw_estimate: played action has zero mass");

  std::vector<double> est;
  if (gamma != 0.0) {
    est.assign(static_cast<std::size_t>(p.size()), 0.0);
    est[static_cast<std::size_t>(played)] = u_bar / p_played;
  } else {
    est.assign(static_cast<std::size_t>(p.size()), 1.0);
    est[static_cast<std::size_t>(played)] = 1.0 - (1.0 - u_bar) / p_played;
  }
  return est;
}

MixedStrategy external_update(ExternalDualState& state, const std::vector<double>& estimate,
                              double eta, double gamma) {
  if (estimate.size() != state.scores.size())
    throw std::invalid_argument("external_update: estimate size mismatch");
  const int n = static_cast<int>(state.scores.size());
  for (std::size_t i = 0; i < state.scores.size(); ++i) state.scores[i] += eta * estimate[i];

  // Uniform re-centering keeps the accumulated scores bounded; softmax output
  // is invariant to the shift.
  double zmax = *std::max_element(state.scores.begin(), state.scores.end());
  if (std::abs(zmax) > 1e6)
    for (double& z : state.scores) z -= zmax;

  std::vector<double> soft = softmax(state.scores);
  MixedStrategy p;
  p.probs.resize(soft.size());
  for (std::size_t i = 0; i < soft.size(); ++i)
    p.probs[i] = (1.0 - gamma) * soft[i] + gamma / n;
  p.validate(gamma);
  return p;
}

InternalDualState::InternalDualState(int n)
    : row_scores(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0)),
      rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0 / n)) {}

MixedStrategy stationary_distribution(const std::vector<std::vector<double>>& q,
                                      const MixedStrategy* warm, double tol,
                                      long max_iterations) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("stationary_distribution: empty matrix");
  for (const auto& row : q) {
    if (row.size() != n) throw std::invalid_argument("stationary_distribution: not square");
    double s = 0.0;
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("stationary_distribution: negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw std::invalid_argument("stationary_distribution: row does not sum to 1");
  }

  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  if (warm) {
    if (warm->size() != static_cast<int>(n))
      throw std::invalid_argument("stationary_distribution: warm start size mismatch");
    p = warm->probs;
  }

  // Iterate p <- pQ; the residual ||pQ - p||_1 of the returned iterate is
  // measured directly. The inner target is well below the contract tolerance
  // so the analytic small cases come out near machine precision.
  const double target = std::min(tol, 1e-13);
  std::vector<double> next(n, 0.0);
  double residual = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (long it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      double ps = p[s];
      if (ps == 0.0) continue;
      const auto& row = q[s];
      for (std::size_t d = 0; d < n; ++d) next[d] += ps * row[d];
    }
    residual = 0.0;
    for (std::size_t d = 0; d < n; ++d) residual += std::abs(next[d] - p[d]);
    if (residual <= target) break;
    if (residual >= best_residual) {
      // No progress: floating-point floor reached.
      if (++stalled >= 8) break;
    } else {
      best_residual = residual;
      stalled = 0;
    }
    p.swap(next);
    // Renormalize to guard against drift.
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
  }
  if (residual > tol)
    throw StationaryError("stationary_distribution: residual " + std::to_string(residual) +
                              " above tolerance after iteration cap",
                          residual);

  MixedStrategy out;
  out.probs = p;
  double sum = 0.0;
  for (double v : out.probs) sum += v;
  for (double& v : out.probs) v /= sum;
  return out;
}

MixedStrategy internal_update(InternalDualState& state, const std::vector<double>& estimate,
                              const MixedStrategy& p, double eta, double gamma,
                              bool positive_part) {
  const int n = state.size();
  if (static_cast<int>(estimate.size()) != n || p.size() != n)
    throw std::invalid_argument("internal_update: size mismatch");

  for (int s = 0; s < n; ++s) {
    double weight = eta * p[s];
    auto& row = state.row_scores[static_cast<std::size_t>(s)];
    for (int d = 0; d < n; ++d) row[static_cast<std::size_t>(d)] += weight * estimate[static_cast<std::size_t>(d)];
  }

  std::vector<double> view;
  for (int s = 0; s < n; ++s) {
    const auto& scores = state.row_scores[static_cast<std::size_t>(s)];
    view.assign(scores.begin(), scores.end());
    if (positive_part)
      for (double& v : view) v = std::max(v, 0.0);  // clipped copy; accumulation unclipped
    std::vector<double> soft = softmax(view);
    auto& row = state.rows[static_cast<std::size_t>(s)];
    for (int d = 0; d < n; ++d)
      row[static_cast<std::size_t>(d)] = (1.0 - gamma) * soft[static_cast<std::size_t>(d)] + gamma / n;
  }

  return stationary_distribution(state.rows, &p);
}

ParamSchedule theoretical_schedule(int n, int horizon, ScheduleRegime regime, double scale) {
  if (n < 2) throw std::invalid_argument("theoretical_schedule: n must be >= 2");
  if (horizon < 1) throw std::invalid_argument("theoretical_schedule: horizon must be >= 1");
  double nn = static_cast<double>(n);
  double tt = static_cast<double>(horizon);
  double logn = std::log(nn);
  ParamSchedule s;
  if (regime == ScheduleRegime::kExplored) {
    s.gamma = std::cbrt(nn * logn) / std::cbrt(tt);
    s.eta = scale * std::pow(logn, 2.0 / 3.0) / (std::cbrt(nn) * std::pow(tt, 2.0 / 3.0));
  } else {
    s.gamma = 0.0;
    s.eta = scale * std::sqrt(logn / (nn * tt));
  }
  return s;
}

double regret_bound_external(int n, int horizon, double eta, double gamma, double gamma_max) {
  if (eta <= 0.0) throw std::invalid_argument("regret_bound_external: eta must be positive");
  if (gamma < 0.0) throw std::invalid_argument("regret_bound_external: gamma must be >= 0");
  double nn = static_cast<double>(n);
  double tt = static_cast<double>(horizon);
  double logn = std::log(nn);
  if (gamma == 0.0) return logn / eta + eta * tt * nn;
  double g = std::min(gamma, gamma_max);
  return logn / eta + eta * tt * nn / g + g * tt;
}

double regret_bound_internal(int n, int horizon, double eta, double gamma, double gamma_max) {
  return n * regret_bound_external(n, horizon, eta, gamma, gamma_max);
}

double linear_decay(double start, double end, int epoch, int horizon) {
  if (horizon <= 1) return end;
  double frac = static_cast<double>(epoch - 1) / static_cast<double>(horizon - 1);
  return start + (end - start) * frac;
}

}  // namespace tfhop

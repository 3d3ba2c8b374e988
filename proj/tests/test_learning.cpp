#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "tfhop/learning.hpp"

using namespace tfhop;

TEST_CASE("importance-weighted estimate, explored branch") {
  MixedStrategy p;
  p.probs = {0.5, 0.5};
  std::vector<double> est = iw_estimate(0.8, 0, p, 0.1);
  CHECK(est[0] == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(est[1] == 0.0);
}

TEST_CASE("importance-weighted estimate, exploration-free branch") {
  MixedStrategy p;
  p.probs = {0.25, 0.75};
  std::vector<double> est = iw_estimate(0.4, 1, p, 0.0);
  CHECK(est[0] == 1.0);
  CHECK(est[1] == doctest::Approx(1.0 - 0.6 / 0.75).epsilon(1e-15));
  // A loss-free round leaves every coordinate at one.
  std::vector<double> free = iw_estimate(1.0, 1, p, 0.0);
  CHECK(free[0] == 1.0);
  CHECK(free[1] == 1.0);
  CHECK_THROWS(iw_estimate(0.0, 0, p, 0.0));
  CHECK_THROWS(iw_estimate(0.5, 0, MixedStrategy{{0.0, 1.0}}, 0.0));
}

TEST_CASE("both estimator branches are unbiased under the played distribution") {
  // Exact enumeration: sum_played p(played) * est(sigma) = U(sigma) requires
  // the true utility to be the same across actions for the gamma = 0 branch;
  // per-coordinate unbiasedness in general is Monte Carlo tested below.
  MixedStrategy p;
  p.probs = {0.2, 0.3, 0.5};
  double u_const = 0.37;
  for (double gamma : {0.0, 0.05}) {
    std::vector<double> mean(3, 0.0);
    for (int played = 0; played < 3; ++played) {
      std::vector<double> est = iw_estimate(u_const, played, p, gamma);
      for (int s = 0; s < 3; ++s) mean[s] += p[played] * est[s];
    }
    for (int s = 0; s < 3; ++s) CHECK(mean[s] == doctest::Approx(u_const).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo unbiasedness for a non-constant utility vector") {
  MixedStrategy p;
  p.probs = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> truth = {0.2, 0.9, 0.5, 0.7};
  const int n_draws = 200000;
  for (double gamma : {0.0, 0.1}) {
    Rng rng(77);
    std::vector<double> sum(4, 0.0), sumsq(4, 0.0);
    for (int t = 0; t < n_draws; ++t) {
      int played = rng.sample_discrete(p.probs);
      std::vector<double> est = iw_estimate(truth[played], played, p, gamma);
      for (int s = 0; s < 4; ++s) {
        sum[s] += est[s];
        sumsq[s] += est[s] * est[s];
      }
    }
    for (int s = 0; s < 4; ++s) {
      double mean = sum[s] / n_draws;
      double var = sumsq[s] / n_draws - mean * mean;
      double se = std::sqrt(var / n_draws);
      CHECK(std::abs(mean - truth[s]) <= 3.0 * se);
    }
  }
}

TEST_CASE("external update: zero scores give the uniform strategy") {
  ExternalDualState state(5);
  std::vector<double> zero(5, 0.0);
  MixedStrategy p = external_update(state, zero, 0.1, 0.0);
  for (double v : p.probs) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("external update is invariant to uniform score shifts") {
  std::vector<double> est = {0.4, 0.0, 1.3, 0.0};
  ExternalDualState a(4), b(4);
  for (std::size_t i = 0; i < 4; ++i) b.scores[i] += 1234.5;  // constant shift
  MixedStrategy pa = external_update(a, est, 0.7, 0.05);
  MixedStrategy pb = external_update(b, est, 0.7, 0.05);
  for (int i = 0; i < 4; ++i) CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-12));
}

TEST_CASE("two-action closed form matches the logistic") {
  // One unit-estimate update at the reported step size.
  const double eta = 0.1252;
  ExternalDualState state(2);
  MixedStrategy p = external_update(state, {1.0, 0.0}, eta, 0.0);
  double logistic = 1.0 / (1.0 + std::exp(-eta));
  CHECK(p[0] == doctest::Approx(logistic).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 - logistic).epsilon(1e-12));
}

TEST_CASE("exploration floor is respected") {
  ExternalDualState state(4);
  MixedStrategy p = external_update(state, {50.0, 0.0, 0.0, 0.0}, 10.0, 0.2);
  for (double v : p.probs) CHECK(v >= 0.2 / 4 - 1e-15);
  CHECK(p[0] > 0.9 * (1.0 - 0.2));
}

TEST_CASE("internal update: zero scores give uniform rows and uniform strategy") {
  InternalDualState state(4);
  MixedStrategy p = uniform_strategy(4);
  std::vector<double> zero(4, 0.0);
  MixedStrategy next = internal_update(state, zero, p, 0.5, 0.0, false);
  for (const auto& row : state.rows)
    for (double v : row) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  for (double v : next.probs) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("internal update row arithmetic matches the scalar oracle") {
  InternalDualState state(3);
  MixedStrategy p;
  p.probs = {0.5, 0.3, 0.2};
  std::vector<double> est = {0.0, 0.0, 2.0};
  internal_update(state, est, p, 0.5, 0.0, false);
  // Row scores: eta * p(s) * est(d).
  CHECK(state.row_scores[0][2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(state.row_scores[1][2] == doctest::Approx(0.3 * 0.5 * 2.0).epsilon(1e-15));
  CHECK(state.row_scores[2][2] == doctest::Approx(0.2 * 0.5 * 2.0).epsilon(1e-15));
  // Row distributions: softmax of (0, 0, z).
  auto row_expected = [](double z) {
    double denom = 2.0 + std::exp(z);
    return std::array<double, 2>{1.0 / denom, std::exp(z) / denom};
  };
  auto r0 = row_expected(0.5);
  CHECK(state.rows[0][0] == doctest::Approx(r0[0]).epsilon(1e-12));
  CHECK(state.rows[0][2] == doctest::Approx(r0[1]).epsilon(1e-12));
  auto r1 = row_expected(0.3);
  CHECK(state.rows[1][1] == doctest::Approx(r1[0]).epsilon(1e-12));
  CHECK(state.rows[1][2] == doctest::Approx(r1[1]).epsilon(1e-12));
  auto r2 = row_expected(0.2);
  CHECK(state.rows[2][2] == doctest::Approx(r2[1]).epsilon(1e-12));
}

TEST_CASE("positive-part thresholding clips the strategy view, not the accumulator") {
  InternalDualState state(2);
  MixedStrategy p;
  p.probs = {1.0, 0.0};
  // Strongly negative estimate on action 0.
  std::vector<double> est = {-10.0, 0.0};
  internal_update(state, est, p, 1.0, 0.0, true);
  CHECK(state.row_scores[0][0] == doctest::Approx(-10.0));  // accumulator unclipped
  // Clipped view makes the row uniform: max(-10, 0) = 0 for both entries.
  CHECK(state.rows[0][0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stationary distribution") {
  SUBCASE("rank-one chain returns the common row") {
    std::vector<std::vector<double>> q(3, {0.2, 0.5, 0.3});
    MixedStrategy p = stationary_distribution(q);
    CHECK(p[0] == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p[2] == doctest::Approx(0.3).epsilon(1e-10));
  }

  SUBCASE("two-state analytic fixed point to 1e-12") {
    std::vector<std::vector<double>> q = {{0.7, 0.3}, {0.1, 0.9}};
    MixedStrategy p = stationary_distribution(q);
    CHECK(std::abs(p[0] - 0.25) <= 1e-12);
    CHECK(std::abs(p[1] - 0.75) <= 1e-12);
  }

  SUBCASE("uniform 21x21 matrix gives the uniform distribution") {
    std::vector<std::vector<double>> q(21, std::vector<double>(21, 1.0 / 21));
    MixedStrategy p = stationary_distribution(q);
    for (double v : p.probs) CHECK(v == doctest::Approx(1.0 / 21).epsilon(1e-12));
  }

  SUBCASE("identity chain returns the warm start") {
    std::vector<std::vector<double>> q = {{1.0, 0.0}, {0.0, 1.0}};
    MixedStrategy warm;
    warm.probs = {0.6, 0.4};
    MixedStrategy p = stationary_distribution(q, &warm);
    CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.4).epsilon(1e-12));
  }

  SUBCASE("residual contract on random row-stochastic matrices") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::vector<double>> q(21, std::vector<double>(21, 0.0));
      for (auto& row : q) {
        double sum = 0.0;
        for (double& v : row) {
          v = rng.uniform01() + 1e-6;
          sum += v;
        }
        for (double& v : row) v /= sum;
      }
      MixedStrategy p = stationary_distribution(q);
      double residual = 0.0;
      for (int d = 0; d < 21; ++d) {
        double next = 0.0;
        for (int s = 0; s < 21; ++s) next += p[s] * q[s][d];
        residual += std::abs(next - p[d]);
      }
      CHECK(residual <= 1e-10);
    }
  }

  SUBCASE("malformed rows are rejected") {
    CHECK_THROWS(stationary_distribution({{0.5, 0.4}, {0.5, 0.5}}));
    CHECK_THROWS(stationary_distribution({{1.2, -0.2}, {0.5, 0.5}}));
  }
}

TEST_CASE("theoretical parameter schedules") {
  ParamSchedule unexplored = theoretical_schedule(21, 15, ScheduleRegime::kUnexplored);
  CHECK(unexplored.gamma == 0.0);
  CHECK(unexplored.eta == doctest::Approx(std::sqrt(std::log(21.0) / (21.0 * 15.0))).epsilon(1e-15));

  // The explored-regime step size at (n=21, T=15) reproduces the reported
  // constant 0.1252.
  ParamSchedule explored = theoretical_schedule(21, 15, ScheduleRegime::kExplored);
  CHECK(explored.eta == doctest::Approx(0.1252).epsilon(1e-3));
  CHECK(explored.eta == doctest::Approx(0.12518304610245765).epsilon(1e-12));

  // gamma decays monotonically in the horizon.
  double prev = 10.0;
  for (int horizon : {10, 100, 1000, 10000, 100000}) {
    double g = theoretical_schedule(21, horizon, ScheduleRegime::kExplored).gamma;
    CHECK(g < prev);
    prev = g;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("regret bound evaluators") {
  const int n = 21;
  // gamma = 0 with the optimal step size collapses to 2 sqrt(T n log n).
  for (int horizon : {15, 100, 500}) {
    double eta = theoretical_schedule(n, horizon, ScheduleRegime::kUnexplored).eta;
    double bound = regret_bound_external(n, horizon, eta, 0.0);
    CHECK(bound ==
          doctest::Approx(2.0 * std::sqrt(horizon * n * std::log(static_cast<double>(n))))
              .epsilon(1e-12));
    CHECK(regret_bound_internal(n, horizon, eta, 0.0) == doctest::Approx(n * bound).epsilon(1e-12));
  }
  // Explored-regime bound: three stated terms.
  double b = regret_bound_external(10, 100, 0.01, 0.2);
  CHECK(b == doctest::Approx(std::log(10.0) / 0.01 + 0.01 * 100 * 10 / 0.2 + 0.2 * 100).epsilon(1e-12));
  // Average regret (bound / T) shrinks with the horizon under the schedule.
  double prev = 1e18;
  for (int horizon : {10, 100, 1000, 10000}) {
    double eta = theoretical_schedule(n, horizon, ScheduleRegime::kUnexplored).eta;
    double avg = regret_bound_external(n, horizon, eta, 0.0) / horizon;
    CHECK(avg < prev);
    prev = avg;
  }
}

TEST_CASE("linear exploration decay spans start to end") {
  CHECK(linear_decay(0.1, 0.0, 1, 15) == doctest::Approx(0.1));
  CHECK(linear_decay(0.1, 0.0, 15, 15) == doctest::Approx(0.0));
  CHECK(linear_decay(0.1, 0.0, 8, 15) == doctest::Approx(0.05));
}

TEST_CASE("emitted strategies stay on the simplex across a learning run") {
  Rng rng(31);
  const int n = 21;
  ExternalDualState ext(n);
  InternalDualState internal(n);
  MixedStrategy p_ext = uniform_strategy(n);
  MixedStrategy p_int = uniform_strategy(n);
  for (int tau = 1; tau <= 60; ++tau) {
    double gamma = linear_decay(0.1, 0.0, tau, 60);
    double u = 0.05 + 0.9 * rng.uniform01();
    int played = rng.sample_discrete(p_ext.probs);
    p_ext = external_update(ext, iw_estimate(u, played, p_ext, gamma), 0.1252, gamma);
    p_ext.validate(gamma);

    played = rng.sample_discrete(p_int.probs);
    p_int = internal_update(internal, iw_estimate(u, played, p_int, 0.0), p_int, 0.5, 0.0, true);
    p_int.validate(0.0);
  }
}

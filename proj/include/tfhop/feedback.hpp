#pragma once

#include <map>
#include <vector>

#include "tfhop/wavesim.hpp"

namespace tfhop {

// Saturating utility u(s) = s^beta / (s^beta + s0^beta) on linear SINR.
// Strictly increasing, u(s0) = 1/2, range (0, 1).
struct UtilityMap {
  double beta = 2.0;
  double s0_linear = 1.0;  // "half-good" SINR
  double operator()(double s) const;
};

double saturating_utility(double s, const UtilityMap& map);

// Half-good point for a scenario: the interference-free SNR of a nominal
// target at `nominal_range_m`, scaled by `s0_scale`.
UtilityMap scenario_utility_map(const Scenario& scenario, double beta = 2.0,
                                double s0_scale = 1.0, double nominal_range_m = 25.0);

enum class UtilityAggregation {
  kChirpMean,    // u(mean over chirps of per-chirp SINR)
  kPowerRatio,   // u(CPI aggregate power ratio P_S / (P_I + P_N))
};

// Per-chirp component powers measured from a component-tracked ADC matrix.
std::vector<ChirpPowers> chirp_powers_from_adc(const AdcMatrix& adc);

// Empirical per-action SINR: for each used (f,t) pair, the average over its
// chirps of P(clean)/(P(interference)+P(noise)). Unused actions are absent.
std::map<int, double> estimate_per_action_sinr(const std::vector<ChirpPowers>& powers,
                                               const ChirpSchedule& schedule,
                                               const ActionSpace& space);

// Per-action SNR over interference-free chirps only: average of
// P(total)/N0 with the known noise power. Pairs with no clean chirp are absent.
std::map<int, double> estimate_per_action_snr(const std::vector<ChirpPowers>& powers,
                                              const ChirpSchedule& schedule,
                                              const ActionSpace& space, double noise_mw);

// Mean over chirps of the per-chirp SINR (linear).
double chirp_mean_sinr(const std::vector<ChirpPowers>& powers);

// CPI aggregate ratio sum(P_S) / (sum(P_I) + sum(P_N)) (linear).
double cpi_power_ratio_sinr(const std::vector<ChirpPowers>& powers);

// Bounded scalar CPI utility u(mean over chirps of per-chirp SINR).
double cpi_utility(const std::vector<ChirpPowers>& powers, const UtilityMap& map);

struct CpiFeedback {
  std::map<int, double> sinr;  // flat action -> linear SINR
  std::map<int, double> snr;   // flat action -> linear SNR
  double utility = 0.0;        // in (0,1)
  double chirp_mean_sinr_linear = 0.0;
  double power_ratio_sinr_linear = 0.0;
  int cpi_index = 0;
};

CpiFeedback make_cpi_feedback(const std::vector<ChirpPowers>& powers, const ChirpSchedule& schedule,
                              const ActionSpace& space, double noise_mw, const UtilityMap& map,
                              int cpi_index, UtilityAggregation agg);

}  // namespace tfhop

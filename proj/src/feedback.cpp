#include "tfhop/feedback.hpp"

#include <cmath>
#include <stdexcept>

namespace tfhop {

double UtilityMap::operator()(double s) const {
  if (s < 0.0) throw std::invalid_argument("UtilityMap: negative SINR");
  if (s == 0.0) return 0.0;
  double num = std::pow(s, beta);
  double den = num + std::pow(s0_linear, beta);
  return num / den;
}

double saturating_utility(double s, const UtilityMap& map) { return map(s); }

UtilityMap scenario_utility_map(const Scenario& scenario, double beta, double s0_scale,
                                double nominal_range_m) {
  if (scenario.radars.empty()) throw std::invalid_argument("scenario_utility_map: no radars");
  Target nominal;
  nominal.range_m = nominal_range_m;
  nominal.velocity_mps = 0.0;
  nominal.rcs_dbsm = scenario.targets.empty() || scenario.targets[0].empty()
                         ? 20.0
                         : scenario.targets[0][0].rcs_dbsm;
  double snr = radar_received_power_mw(scenario.radars[0], nominal) / scenario.noise_mw();
  UtilityMap map;
  map.beta = beta;
  map.s0_linear = snr * s0_scale;
  return map;
}

std::vector<ChirpPowers> chirp_powers_from_adc(const AdcMatrix& adc) {
  const int k_count = adc.chirp_count();
  const int n_t = adc.fast_time_samples();
  Eigen::MatrixXcd interf = adc.interference_sum();
  Eigen::MatrixXcd total = adc.clean + interf + adc.noise;
  std::vector<ChirpPowers> out(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    ChirpPowers& cp = out[static_cast<std::size_t>(k)];
    cp.signal_mw = adc.clean.col(k).squaredNorm() / n_t;
    cp.interference_mw = interf.col(k).squaredNorm() / n_t;
    cp.noise_mw = adc.noise.col(k).squaredNorm() / n_t;
    cp.total_mw = total.col(k).squaredNorm() / n_t;
  }
  return out;
}

namespace {

void check_sizes(const std::vector<ChirpPowers>& powers, const ChirpSchedule& schedule) {
  if (powers.empty()) throw std::invalid_argument("feedback: empty CPI");
  if (static_cast<int>(powers.size()) != schedule.size())
    throw std::invalid_argument("feedback: power rows != schedule length");
}

}  // namespace

std::map<int, double> estimate_per_action_sinr(const std::vector<ChirpPowers>& powers,
                                               const ChirpSchedule& schedule,
                                               const ActionSpace& space) {
  check_sizes(powers, schedule);
  std::map<int, double> sum;
  std::map<int, int> count;
  for (int k = 1; k <= schedule.size(); ++k) {
    const ChirpEntry& e = schedule.at(k);
    int flat = space.flat_index(e.a, e.b);
    sum[flat] += powers[static_cast<std::size_t>(k) - 1].sinr();
    count[flat] += 1;
  }
  std::map<int, double> out;
  for (const auto& [flat, s] : sum) out[flat] = s / count[flat];
  return out;
}

std::map<int, double> estimate_per_action_snr(const std::vector<ChirpPowers>& powers,
                                              const ChirpSchedule& schedule,
                                              const ActionSpace& space, double noise_mw) {
  check_sizes(powers, schedule);
  if (noise_mw <= 0.0) throw std::invalid_argument("feedback: noise power must be positive");
  std::map<int, double> sum;
  std::map<int, int> count;
  for (int k = 1; k <= schedule.size(); ++k) {
    const ChirpPowers& cp = powers[static_cast<std::size_t>(k) - 1];
    if (cp.interference_mw != 0.0) continue;  // interference-free chirps only
    const ChirpEntry& e = schedule.at(k);
    int flat = space.flat_index(e.a, e.b);
    sum[flat] += cp.total_mw / noise_mw;
    count[flat] += 1;
  }
  std::map<int, double> out;
  for (const auto& [flat, s] : sum) out[flat] = s / count[flat];
  return out;
}

double chirp_mean_sinr(const std::vector<ChirpPowers>& powers) {
  if (powers.empty()) throw std::invalid_argument("feedback: empty CPI");
  double acc = 0.0;
  for (const ChirpPowers& cp : powers) acc += cp.sinr();
  return acc / static_cast<double>(powers.size());
}

double cpi_power_ratio_sinr(const std::vector<ChirpPowers>& powers) {
  if (powers.empty()) throw std::invalid_argument("feedback: empty CPI");
  double s = 0.0, i = 0.0, n = 0.0;
  for (const ChirpPowers& cp : powers) {
    s += cp.signal_mw;
    i += cp.interference_mw;
    n += cp.noise_mw;
  }
  return s / (i + n);
}

double cpi_utility(const std::vector<ChirpPowers>& powers, const UtilityMap& map) {
  return map(chirp_mean_sinr(powers));
}

CpiFeedback make_cpi_feedback(const std::vector<ChirpPowers>& powers, const ChirpSchedule& schedule,
                              const ActionSpace& space, double noise_mw, const UtilityMap& map,
                              int cpi_index, UtilityAggregation agg) {
  CpiFeedback fb;
  fb.sinr = estimate_per_action_sinr(powers, schedule, space);
  fb.snr = estimate_per_action_snr(powers, schedule, space, noise_mw);
  fb.chirp_mean_sinr_linear = chirp_mean_sinr(powers);
  fb.power_ratio_sinr_linear = cpi_power_ratio_sinr(powers);
  fb.utility = agg == UtilityAggregation::kChirpMean ? map(fb.chirp_mean_sinr_linear)
                                                     : map(fb.power_ratio_sinr_linear);
  fb.cpi_index = cpi_index;
  return fb;
}

}  // namespace tfhop

#include "tfhop/wavesim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "tfhop/rng.hpp"
#include "tfhop/units.hpp"

namespace tfhop {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};
}

double radar_received_power_mw(const RadarParams& radar, const Target& target) {
  double p_t = dbm_to_mw(radar.p_t_dbm);
  double gain = db_to_lin(radar.antenna_gain_dbi);
  double lambda = radar.wavelength_m();
  double sigma = db_to_lin(target.rcs_dbsm);  // dBsm -> m^2
  double r = target.range_m;
  double four_pi = 4.0 * kPi;
  return p_t * gain * gain * lambda * lambda * sigma / (four_pi * four_pi * four_pi * r * r * r * r);
}

double interference_received_power_mw(const RadarParams& victim, const RadarParams& aggressor,
                                      double distance_m) {
  double p_t = dbm_to_mw(aggressor.p_t_dbm);
  double g_tx = db_to_lin(aggressor.antenna_gain_dbi);
  double g_rx = db_to_lin(victim.antenna_gain_dbi);
  double lambda = victim.wavelength_m();
  double four_pi = 4.0 * kPi;
  return p_t * g_tx * g_rx * lambda * lambda / (four_pi * four_pi * distance_m * distance_m);
}

OverlapWindow overlap_detect(const ChirpEntry& victim_entry, const RadarParams& victim,
                             const ChirpEntry& aggressor_entry, const RadarParams& aggressor,
                             double delay_s) {
  // Swept bands [f, f+B]; heterogeneous bandwidths make this an interval
  // intersection rather than a start-frequency equality test.
  double f_lo = std::max(victim_entry.f_hz, aggressor_entry.f_hz);
  double f_hi = std::min(victim_entry.f_hz + victim.b_hz, aggressor_entry.f_hz + aggressor.b_hz);
  if (f_hi - f_lo <= 0.0) return {};

  double v0 = victim_entry.t_s;
  double v1 = v0 + victim.t_a_s;
  double o0 = aggressor_entry.t_s + delay_s;
  double o1 = o0 + aggressor.t_a_s;
  double t_lo = std::max(v0, o0);
  double t_hi = std::min(v1, o1);
  if (t_hi - t_lo <= 0.0) return {};
  return {true, t_lo, t_hi};
}

Eigen::MatrixXcd AdcMatrix::interference_sum() const {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(clean.rows(), clean.cols());
  for (const auto& [id, m] : interference) sum += m;
  return sum;
}

Eigen::MatrixXcd AdcMatrix::total() const { return clean + interference_sum() + noise; }

Eigen::VectorXcd target_beat_signal(const RadarParams& radar, const Target& target,
                                    const ChirpSchedule& schedule, int chirp_index,
                                    double phase_rad) {
  const int n_t = radar.fast_time_samples();
  const ChirpEntry& entry = schedule.at(chirp_index);
  const double t1 = schedule.at(1).t_s;
  const double dt_k = entry.t_s - t1;
  const double df_k = entry.f_hz - radar.f_c_hz;
  const double slow_time = (chirp_index - 1) * radar.t_pri_s + dt_k;

  const double f_r = radar.slope() * 2.0 * target.range_m / kSpeedOfLight;
  const double f_d = radar.f_c_hz * 2.0 * target.velocity_mps / kSpeedOfLight;
  const double tau_k =
      2.0 / kSpeedOfLight * (target.range_m + target.velocity_mps * slow_time);

  const double amp = std::sqrt(radar_received_power_mw(radar, target));
  const std::complex<double> coeff = amp * std::exp(kJ * phase_rad);
  const double chirp_phase = kTwoPi * (f_d * slow_time + df_k * tau_k);

  Eigen::VectorXcd out(n_t);
  for (int n = 0; n < n_t; ++n) {
    double t = n / radar.adc_rate_hz;
    out(n) = coeff * std::exp(kJ * (kTwoPi * f_r * t + chirp_phase));
  }
  return out;
}

Eigen::VectorXcd interference_beat_signal(const RadarParams& victim, const RadarParams& aggressor,
                                          const ChirpEntry& victim_entry,
                                          const ChirpEntry& aggressor_entry, double delay_s,
                                          double amplitude_mw, double phase_rad) {
  const int n_t = victim.fast_time_samples();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_t);
  OverlapWindow w = overlap_detect(victim_entry, victim, aggressor_entry, aggressor, delay_s);
  if (!w.overlaps) return out;

  // Sample window inside the victim chirp, clamped to [0, N_t).
  double rel0 = (w.start_s - victim_entry.t_s) * victim.adc_rate_hz;
  double rel1 = (w.end_s - victim_entry.t_s) * victim.adc_rate_hz;
  int n0 = std::max(0, static_cast<int>(std::ceil(rel0)));
  int n1 = std::min(n_t, static_cast<int>(std::ceil(rel1)));

  const double slope_diff = victim.slope() - aggressor.slope();
  const std::complex<double> coeff = std::sqrt(amplitude_mw) * std::exp(kJ * phase_rad);
  for (int n = n0; n < n1; ++n) {
    double t = n / victim.adc_rate_hz;
    out(n) = coeff * std::exp(kJ * (kPi * slope_diff * t * t));
  }
  return out;
}

std::vector<AdcMatrix> synthesize_cpi_adc(const Scenario& scenario,
                                          const std::vector<ChirpSchedule>& schedules, Rng& rng) {
  const int count = scenario.radar_count();
  if (static_cast<int>(schedules.size()) != count)
    throw std::invalid_argument("synthesize_cpi_adc: one schedule per radar required");

  // Per-CPI random phases, fixed within the CPI. Drawn up front in a fixed
  // order so the noise stream is independent of the graph topology.
  std::vector<std::vector<double>> target_phase(static_cast<std::size_t>(count));
  std::vector<std::map<int, double>> interferer_phase(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    for (std::size_t l = 0; l < scenario.targets[static_cast<std::size_t>(i)].size(); ++l)
      target_phase[static_cast<std::size_t>(i)].push_back(rng.uniform(0.0, kTwoPi));
    for (int o : scenario.graph.interferers_of(i + 1))
      interferer_phase[static_cast<std::size_t>(i)][o] = rng.uniform(0.0, kTwoPi);
  }

  std::vector<AdcMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  const double noise_mw = scenario.noise_mw();
  const double noise_sigma = std::sqrt(noise_mw / 2.0);

  for (int i = 0; i < count; ++i) {
    const RadarParams& radar = scenario.radars[static_cast<std::size_t>(i)];
    const ChirpSchedule& sched = schedules[static_cast<std::size_t>(i)];
    if (sched.size() != radar.chirps_per_cpi)
      throw std::invalid_argument("synthesize_cpi_adc: schedule length != K");
    const int n_t = radar.fast_time_samples();
    const int k_count = radar.chirps_per_cpi;

    AdcMatrix adc;
    adc.sample_rate_hz = radar.adc_rate_hz;
    adc.clean = Eigen::MatrixXcd::Zero(n_t, k_count);
    adc.noise = Eigen::MatrixXcd::Zero(n_t, k_count);

    for (int k = 1; k <= k_count; ++k) {
      for (std::size_t l = 0; l < scenario.targets[static_cast<std::size_t>(i)].size(); ++l) {
        adc.clean.col(k - 1) += target_beat_signal(
            radar, scenario.targets[static_cast<std::size_t>(i)][l], sched, k,
            target_phase[static_cast<std::size_t>(i)][l]);
      }
    }

    for (int o : scenario.graph.interferers_of(i + 1)) {
      const RadarParams& aggressor = scenario.radars[static_cast<std::size_t>(o) - 1];
      double delay = scenario.graph.delay(o, i + 1).value_or(0.0);
      double power =
          interference_received_power_mw(radar, aggressor, scenario.radar_distance_m(i + 1, o));
      Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n_t, k_count);
      const ChirpSchedule& osched = schedules[static_cast<std::size_t>(o) - 1];
      for (int k = 1; k <= k_count; ++k) {
        comp.col(k - 1) = interference_beat_signal(radar, aggressor, sched.at(k), osched.at(k),
                                                   delay, power,
                                                   interferer_phase[static_cast<std::size_t>(i)][o]);
      }
      adc.interference[o] = std::move(comp);
    }

    for (int k = 0; k < k_count; ++k)
      for (int n = 0; n < n_t; ++n)
        adc.noise(n, k) = std::complex<double>(noise_sigma * rng.normal(), noise_sigma * rng.normal());

    out.push_back(std::move(adc));
  }
  return out;
}

std::vector<std::vector<ChirpPowers>> fast_power_sim(const Scenario& scenario,
                                                     const std::vector<ChirpSchedule>& schedules) {
  const int count = scenario.radar_count();
  if (static_cast<int>(schedules.size()) != count)
    throw std::invalid_argument("fast_power_sim: one schedule per radar required");
  const double noise_mw = scenario.noise_mw();

  std::vector<std::vector<ChirpPowers>> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const RadarParams& radar = scenario.radars[static_cast<std::size_t>(i)];
    const ChirpSchedule& sched = schedules[static_cast<std::size_t>(i)];
    if (sched.size() != radar.chirps_per_cpi)
      throw std::invalid_argument("fast_power_sim: schedule length != K");

    double signal = 0.0;
    for (const Target& t : scenario.targets[static_cast<std::size_t>(i)])
      signal += radar_received_power_mw(radar, t);

    struct Neighbor {
      const RadarParams* params;
      const ChirpSchedule* schedule;
      double delay_s;
      double power_mw;
    };
    std::vector<Neighbor> neighbors;
    for (int o : scenario.graph.interferers_of(i + 1)) {
      neighbors.push_back({&scenario.radars[static_cast<std::size_t>(o) - 1],
                           &schedules[static_cast<std::size_t>(o) - 1],
                           scenario.graph.delay(o, i + 1).value_or(0.0),
                           interference_received_power_mw(
                               radar, scenario.radars[static_cast<std::size_t>(o) - 1],
                               scenario.radar_distance_m(i + 1, o))});
    }

    auto& rows = out[static_cast<std::size_t>(i)];
    rows.resize(static_cast<std::size_t>(radar.chirps_per_cpi));
    for (int k = 1; k <= radar.chirps_per_cpi; ++k) {
      double interf = 0.0;
      for (const Neighbor& nb : neighbors) {
        OverlapWindow w =
            overlap_detect(sched.at(k), radar, nb.schedule->at(k), *nb.params, nb.delay_s);
        if (w.overlaps) interf += nb.power_mw * (w.duration() / radar.t_a_s);
      }
      // Expected composite power of the echo + interference part; the noise
      // realization is not modeled in this mode.
      ChirpPowers& cp = rows[static_cast<std::size_t>(k) - 1];
      cp.signal_mw = signal;
      cp.interference_mw = interf;
      cp.noise_mw = noise_mw;
      cp.total_mw = signal + interf;
    }
  }
  return out;
}

void write_adc_matrix(std::ostream& os, const Eigen::MatrixXcd& m, double sample_rate_hz) {
  os << "tfhop-adc " << m.rows() << ' ' << m.cols() << ' ';
  os.precision(17);
  os << sample_rate_hz << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double re = m(r, c).real();
      double im = m(r, c).imag();
      os.write(reinterpret_cast<const char*>(&re), sizeof(double));
      os.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  }
}

Eigen::MatrixXcd read_adc_matrix(std::istream& is, double* sample_rate_hz) {
  std::string magic;
  Eigen::Index rows = 0, cols = 0;
  double fs = 0.0;
  is >> magic >> rows >> cols >> fs;
  if (magic != "tfhop-adc" || rows <= 0 || cols <= 0)
    throw std::runtime_error("read_adc_matrix: bad header");
  is.ignore(1);  // newline after the header
  if (sample_rate_hz) *sample_rate_hz = fs;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double re = 0.0, im = 0.0;
      is.read(reinterpret_cast<char*>(&re), sizeof(double));
      is.read(reinterpret_cast<char*>(&im), sizeof(double));
      m(r, c) = {re, im};
    }
  }
  if (!is) throw std::runtime_error("read_adc_matrix: truncated payload");
  return m;
}

}  // namespace tfhop

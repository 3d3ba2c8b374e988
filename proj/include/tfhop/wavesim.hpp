#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <map>
#include <vector>

#include "tfhop/scenario.hpp"
#include "tfhop/schedule.hpp"

namespace tfhop {

// Two-way radar equation, received power in mW:
//   P_r = P_t G^2 lambda^2 sigma / ((4 pi)^3 r^4)
double radar_received_power_mw(const RadarParams& radar, const Target& target);

// One-way link budget for direct radar-to-radar coupling, in mW:
//   P_r = P_t G_tx G_rx lambda^2 / ((4 pi)^2 d^2)
double interference_received_power_mw(const RadarParams& victim, const RadarParams& aggressor,
                                      double distance_m);

struct OverlapWindow {
  bool overlaps = false;
  double start_s = 0.0;  // on the victim's PRI time axis
  double end_s = 0.0;
  double duration() const { return overlaps ? end_s - start_s : 0.0; }
};

// True iff the swept bands intersect AND the active windows intersect, with
// the aggressor shifted by the edge delay. Returns the time intersection.
OverlapWindow overlap_detect(const ChirpEntry& victim_entry, const RadarParams& victim,
                             const ChirpEntry& aggressor_entry, const RadarParams& aggressor,
                             double delay_s);

// Component-tracked dechirped baseband for one CPI: N_t fast-time rows by K
// chirp columns. The total is exactly clean + sum(interference) + noise.
struct AdcMatrix {
  Eigen::MatrixXcd clean;
  std::map<int, Eigen::MatrixXcd> interference;  // aggressor id -> component
  Eigen::MatrixXcd noise;
  double sample_rate_hz = 0.0;

  int fast_time_samples() const { return static_cast<int>(clean.rows()); }
  int chirp_count() const { return static_cast<int>(clean.cols()); }
  Eigen::MatrixXcd interference_sum() const;
  Eigen::MatrixXcd total() const;
};

// Beat signal of one target over one chirp (length N_t):
//   a * exp(j 2 pi [f_R t + f_D (k T_pri - T_pri + dt_k) + df_k tau_k])
// with f_R = alpha 2 r / c, f_D = f_c 2 v / c, tau_k the round-trip delay,
// df_k = f_k - f_c and dt_k = t_k - t_1. Amplitude from the radar equation.
Eigen::VectorXcd target_beat_signal(const RadarParams& radar, const Target& target,
                                    const ChirpSchedule& schedule, int chirp_index,
                                    double phase_rad = 0.0);

// Dechirped interference from one aggressor chirp: a chirp of slope
// (alpha_i - alpha_o) gated to the overlap window, zero without overlap.
// `amplitude_mw` is the received one-way power.
Eigen::VectorXcd interference_beat_signal(const RadarParams& victim, const RadarParams& aggressor,
                                          const ChirpEntry& victim_entry,
                                          const ChirpEntry& aggressor_entry, double delay_s,
                                          double amplitude_mw, double phase_rad = 0.0);

// Full-CPI synthesis for every radar: target beats + per-neighbor interference
// + circular complex Gaussian noise at the scenario noise power. Target and
// interferer phases are drawn once per CPI.
std::vector<AdcMatrix> synthesize_cpi_adc(const Scenario& scenario,
                                          const std::vector<ChirpSchedule>& schedules, Rng& rng);

// Closed-form per-chirp power levels; `total_mw` is the expected power of the
// composite signal. Used for Monte Carlo sweeps and the regret oracles.
struct ChirpPowers {
  double signal_mw = 0.0;
  double interference_mw = 0.0;
  double noise_mw = 0.0;
  double total_mw = 0.0;
  double sinr() const { return signal_mw / (interference_mw + noise_mw); }
};

std::vector<std::vector<ChirpPowers>> fast_power_sim(const Scenario& scenario,
                                                     const std::vector<ChirpSchedule>& schedules);

// Binary dump: one text header line "tfhop-adc N_t K f_s" then row-major
// little-endian float64 (re, im) pairs.
void write_adc_matrix(std::ostream& os, const Eigen::MatrixXcd& m, double sample_rate_hz);
Eigen::MatrixXcd read_adc_matrix(std::istream& is, double* sample_rate_hz = nullptr);

}  // namespace tfhop

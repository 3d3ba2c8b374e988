#include "tfhop/rdproc.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "tfhop/units.hpp"

namespace tfhop {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};

// Slow-time offset of chirp k (1-based): (k-1) T_pri + (t_k - t_1).
double slow_time_offset(const ChirpSchedule& schedule, const RadarParams& radar, int k) {
  return (k - 1) * radar.t_pri_s + (schedule.at(k).t_s - schedule.at(1).t_s);
}
}  // namespace

RdGrids make_grids(const RadarParams& radar, int fine_count) {
  if (fine_count < 1) throw std::invalid_argument("make_grids: fine grid must be nonempty");
  RdGrids g;
  const int n_t = radar.fast_time_samples();
  const int k = radar.chirps_per_cpi;

  // Beat bin m maps to range via f_R = alpha 2 r / c on the DFT frequency grid.
  const double bin_hz = radar.adc_rate_hz / n_t;
  const double range_per_bin = bin_hz * kSpeedOfLight / (2.0 * radar.slope());
  g.range_m.resize(static_cast<std::size_t>(n_t));
  for (int m = 0; m < n_t; ++m) g.range_m[static_cast<std::size_t>(m)] = m * range_per_bin;

  // Doppler bin q maps to f_D = q / (K T_pri); the upper half aliases to
  // negative (approaching) velocities.
  g.velocity_mps.resize(static_cast<std::size_t>(k));
  const double v_per_bin = kSpeedOfLight / (2.0 * radar.f_c_hz * k * radar.t_pri_s);
  for (int q = 0; q < k; ++q) {
    int q_signed = q <= k / 2 ? q : q - k;
    g.velocity_mps[static_cast<std::size_t>(q)] = q_signed * v_per_bin;
  }

  const double eps_max = kSpeedOfLight / (4.0 * radar.b_hz);
  g.fine_range_m.resize(static_cast<std::size_t>(fine_count));
  if (fine_count == 1) {
    g.fine_range_m[0] = 0.0;
  } else {
    for (int p = 0; p < fine_count; ++p)
      g.fine_range_m[static_cast<std::size_t>(p)] =
          -eps_max + 2.0 * eps_max * p / (fine_count - 1);
  }
  return g;
}

Eigen::MatrixXcd coarse_range_transform(const Eigen::MatrixXcd& adc) {
  const Eigen::Index n_t = adc.rows();
  Eigen::MatrixXcd r(n_t, n_t);
  for (Eigen::Index n = 0; n < n_t; ++n)
    for (Eigen::Index m = 0; m < n_t; ++m)
      r(m, n) = std::exp(-kJ * (kTwoPi * static_cast<double>(n * m) / static_cast<double>(n_t)));
  return r * adc;
}

Eigen::MatrixXcd hop_time_compensate(const Eigen::MatrixXcd& coarse, const ChirpSchedule& schedule,
                                     const RadarParams& radar, const std::vector<double>& range_m,
                                     double eps_m, double v_mps) {
  const Eigen::Index n_bins = coarse.rows();
  const Eigen::Index k_count = coarse.cols();
  if (static_cast<Eigen::Index>(range_m.size()) != n_bins)
    throw std::invalid_argument("hop_time_compensate: range grid size mismatch");
  if (schedule.size() != static_cast<int>(k_count))
    throw std::invalid_argument("hop_time_compensate: schedule length mismatch");

  Eigen::MatrixXcd out(n_bins, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double df_k = schedule.at(static_cast<int>(k) + 1).f_hz - radar.f_c_hz;
    const double phi_k = slow_time_offset(schedule, radar, static_cast<int>(k) + 1);
    const double vel_term = 2.0 * v_mps * phi_k / kSpeedOfLight;
    for (Eigen::Index m = 0; m < n_bins; ++m) {
      double phase = kTwoPi * df_k *
                     (2.0 * (range_m[static_cast<std::size_t>(m)] + eps_m) / kSpeedOfLight + vel_term);
      out(m, k) = coarse(m, k) * std::exp(-kJ * phase);
    }
  }
  return out;
}

Eigen::MatrixXcd nonuniform_steering_matrix(const ChirpSchedule& schedule, const RadarParams& radar) {
  const int k_count = schedule.size();
  Eigen::MatrixXcd d(k_count, k_count);
  const double cpi_s = k_count * radar.t_pri_s;
  for (int k = 1; k <= k_count; ++k) {
    const double phi_k = slow_time_offset(schedule, radar, k);
    for (int q = 0; q < k_count; ++q)
      d(k - 1, q) = std::exp(-kJ * (kTwoPi * phi_k * q / cpi_s));
  }
  return d;
}

RdCube nonuniform_slow_time_transform(const std::vector<Eigen::MatrixXcd>& compensated,
                                      const ChirpSchedule& schedule, const RadarParams& radar,
                                      const RdGrids& grids) {
  if (compensated.empty()) throw std::invalid_argument("nonuniform_slow_time_transform: no slices");
  Eigen::MatrixXcd d = nonuniform_steering_matrix(schedule, radar);
  RdCube cube;
  cube.grids = grids;
  cube.slices.reserve(compensated.size());
  for (const auto& slice : compensated) {
    if (slice.cols() != d.rows())
      throw std::invalid_argument("nonuniform_slow_time_transform: chirp axis mismatch");
    cube.slices.push_back(slice * d);
  }
  return cube;
}

RdCube process_cpi(const Eigen::MatrixXcd& adc_total, const ChirpSchedule& schedule,
                   const RadarParams& radar, int fine_count) {
  RdGrids grids = make_grids(radar, fine_count);
  Eigen::MatrixXcd coarse = coarse_range_transform(adc_total);
  const int k_count = static_cast<int>(coarse.cols());
  const double cpi_s = k_count * radar.t_pri_s;

  // Velocity compensation and Doppler steering both depend only on (k, q), so
  // they fold into one matrix; per fine-range slice the remaining factor
  // depends on (m, k) and the cube follows from a single product.
  Eigen::MatrixXcd steer(k_count, k_count);
  for (int k = 1; k <= k_count; ++k) {
    const double df_k = schedule.at(k).f_hz - radar.f_c_hz;
    const double phi_k = slow_time_offset(schedule, radar, k);
    for (int q = 0; q < k_count; ++q) {
      const double v_q = grids.velocity_mps[static_cast<std::size_t>(q)];
      double phase = kTwoPi * (df_k * 2.0 * v_q * phi_k / kSpeedOfLight + phi_k * q / cpi_s);
      steer(k - 1, q) = std::exp(-kJ * phase);
    }
  }

  RdCube cube;
  cube.grids = grids;
  cube.slices.reserve(static_cast<std::size_t>(fine_count));
  Eigen::MatrixXcd ranged(coarse.rows(), coarse.cols());
  for (int p = 0; p < fine_count; ++p) {
    const double eps = grids.fine_range_m[static_cast<std::size_t>(p)];
    for (int k = 1; k <= k_count; ++k) {
      const double df_k = schedule.at(k).f_hz - radar.f_c_hz;
      for (Eigen::Index m = 0; m < coarse.rows(); ++m) {
        double phase = kTwoPi * df_k * 2.0 *
                       (grids.range_m[static_cast<std::size_t>(m)] + eps) / kSpeedOfLight;
        ranged(m, k - 1) = coarse(m, k - 1) * std::exp(-kJ * phase);
      }
    }
    cube.slices.push_back(ranged * steer);
  }
  return cube;
}

PeakDetection detect_peak(const RdCube& cube) {
  if (cube.slices.empty() || cube.slices[0].size() == 0)
    throw std::invalid_argument("detect_peak: empty cube");
  PeakDetection best;
  double best_mag2 = -1.0;
  // (m, q, p) scan order makes the tie rule "smallest flat index".
  for (int m = 0; m < cube.coarse_bins(); ++m)
    for (int q = 0; q < cube.doppler_bins(); ++q)
      for (int p = 0; p < cube.fine_bins(); ++p) {
        double mag2 = std::norm(cube.slices[static_cast<std::size_t>(p)](m, q));
        if (mag2 > best_mag2) {
          best_mag2 = mag2;
          best.m = m;
          best.q = q;
          best.p = p;
        }
      }
  best.range_m = cube.grids.range_m[static_cast<std::size_t>(best.m)] +
                 cube.grids.fine_range_m[static_cast<std::size_t>(best.p)];
  best.velocity_mps = cube.grids.velocity_mps[static_cast<std::size_t>(best.q)];
  best.magnitude = std::sqrt(best_mag2);
  return best;
}

void write_rd_cube_csv(std::ostream& os, const RdCube& cube) {
  os << "m,q,p,magnitude_db\n";
  os.precision(9);
  for (int m = 0; m < cube.coarse_bins(); ++m)
    for (int q = 0; q < cube.doppler_bins(); ++q)
      for (int p = 0; p < cube.fine_bins(); ++p) {
        double mag2 = std::norm(cube.slices[static_cast<std::size_t>(p)](m, q));
        os << m << ',' << q << ',' << p << ',' << 10.0 * std::log10(mag2 + 1e-300) << '\n';
      }
}

void write_rd_cube_meta(std::ostream& os, const RdCube& cube,
                        std::optional<double> truth_range_m,
                        std::optional<double> truth_velocity_mps) {
  nlohmann::json meta;
  meta["range_m"] = cube.grids.range_m;
  meta["velocity_mps"] = cube.grids.velocity_mps;
  meta["fine_range_m"] = cube.grids.fine_range_m;
  if (truth_range_m) meta["truth_range_m"] = *truth_range_m;
  if (truth_velocity_mps) meta["truth_velocity_mps"] = *truth_velocity_mps;
  os << meta.dump(2) << '\n';
}

}  // namespace tfhop

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tfhop/scenario.hpp"
#include "tfhop/schedule.hpp"

namespace tfhop {

struct RdGrids {
  std::vector<double> range_m;       // coarse-range bin centers, one per fast-time bin
  std::vector<double> velocity_mps;  // signed velocity per Doppler bin
  std::vector<double> fine_range_m;  // fine-range hypotheses in [-c/4B, c/4B]
};

RdGrids make_grids(const RadarParams& radar, int fine_count = 16);

// Coarse-range / Doppler / fine-range cube, indexed [m, q, p].
struct RdCube {
  std::vector<Eigen::MatrixXcd> slices;  // one (m x q) matrix per fine-range p
  RdGrids grids;

  int coarse_bins() const { return slices.empty() ? 0 : static_cast<int>(slices[0].rows()); }
  int doppler_bins() const { return slices.empty() ? 0 : static_cast<int>(slices[0].cols()); }
  int fine_bins() const { return static_cast<int>(slices.size()); }
};

// Unnormalized fast-time DFT per chirp: out[m,k] = sum_n e^{-j 2 pi n m / N_t} in[n,k].
Eigen::MatrixXcd coarse_range_transform(const Eigen::MatrixXcd& adc);

// Joint frequency-time compensation for one (eps, v) hypothesis: multiplies
// entry [m,k] by exp(-j 2 pi df_k (2(r_m + eps)/c + 2 v (k T_pri - T_pri + dt_k)/c)),
// aligning the inter-chirp phases introduced by hopping and shifting.
Eigen::MatrixXcd hop_time_compensate(const Eigen::MatrixXcd& coarse, const ChirpSchedule& schedule,
                                     const RadarParams& radar, const std::vector<double>& range_m,
                                     double eps_m, double v_mps);

// Nonuniform slow-time steering matrix D[k,q] = e^{-j 2 pi (k T_pri - T_pri + dt_k) q / (K T_pri)}.
Eigen::MatrixXcd nonuniform_steering_matrix(const ChirpSchedule& schedule, const RadarParams& radar);

// Contracts compensated slices over the chirp axis with the steering matrix.
// With all dt_k = 0 this is exactly the uniform K-point slow-time DFT.
RdCube nonuniform_slow_time_transform(const std::vector<Eigen::MatrixXcd>& compensated,
                                      const ChirpSchedule& schedule, const RadarParams& radar,
                                      const RdGrids& grids);

// Full pipeline with the velocity hypothesis of the compensation tied to the
// Doppler bin being formed.
RdCube process_cpi(const Eigen::MatrixXcd& adc_total, const ChirpSchedule& schedule,
                   const RadarParams& radar, int fine_count = 16);

struct PeakDetection {
  int m = 0, q = 0, p = 0;
  double range_m = 0.0;
  double velocity_mps = 0.0;
  double magnitude = 0.0;
};

// Global argmax of |Y|; r_hat = r_m + eps_p, v_hat from the Doppler grid.
// Ties break toward the smallest (m, q, p) flat index.
PeakDetection detect_peak(const RdCube& cube);

// CSV export (m,q,p,magnitude_db) plus a JSON metadata sidecar with the grids
// and an optional ground-truth annotation.
void write_rd_cube_csv(std::ostream& os, const RdCube& cube);
void write_rd_cube_meta(std::ostream& os, const RdCube& cube,
                        std::optional<double> truth_range_m = std::nullopt,
                        std::optional<double> truth_velocity_mps = std::nullopt);

}  // namespace tfhop

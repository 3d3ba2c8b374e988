#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "tfhop/feedback.hpp"
#include "tfhop/scenario.hpp"
#include "tfhop/schedule.hpp"

namespace tfhop {

// One CPI of logged play: realized pure strategies (flat 1-based), the full
// per-chirp schedules, and the fast-mode utilities.
struct EpochRecord {
  std::vector<int> played;
  std::vector<std::vector<int>> schedules;
  std::vector<double> utilities;
};

struct PlayHistory {
  Scenario scenario;
  UtilityMap umap;
  UtilityAggregation agg = UtilityAggregation::kPowerRatio;
  int block_len = 1;
  std::vector<EpochRecord> epochs;

  int epoch_count() const { return static_cast<int>(epochs.size()); }
};

// Empirical joint-play distribution: exact counts over joint profiles.
struct EmpiricalDistribution {
  std::map<std::vector<int>, int> counts;
  int total = 0;
  double mass(const std::vector<int>& profile) const;
};

EmpiricalDistribution empirical_distribution(const std::vector<std::vector<int>>& profiles);
EmpiricalDistribution empirical_distribution(const PlayHistory& history);

// Counterfactual utilities for regret evaluation, one row per epoch. The
// regret oracles are pure functions of this table so small-instance tests can
// feed hand-built games.
struct RegretInput {
  std::vector<std::vector<double>> counterfactual;  // [epoch][action], 0-based actions
  std::vector<int> played;                          // 0-based
  std::vector<double> realized;
};

// Cumulative external regret over history prefixes:
//   R(T') = max_sigma sum_{tau<=T'} (U(sigma) - U(played)).
std::vector<double> external_regret_series(const RegretInput& in);

// Cumulative swap regret; the max over swap maps decomposes per source action.
std::vector<double> swap_regret_series(const RegretInput& in);

// Fast-power counterfactual replay over a logged history. Radar ids 1-based,
// epochs 1-based, actions flat 1-based.
class FastReplay {
 public:
  explicit FastReplay(const PlayHistory& history);

  // Replays one epoch with the radar forced to a fixed strategy (deterministic
  // round-robin unroll), all others on their logged schedules.
  double counterfactual_utility(int epoch, int radar_id, int forced_flat) const;
  std::vector<double> counterfactual_vector(int epoch, int radar_id) const;

  // Replay with the logged schedule; matches the logged utility.
  double replayed_utility(int epoch, int radar_id) const;

  RegretInput regret_input(int radar_id) const;

 private:
  double utility_for_schedule(int epoch, int radar_id, const std::vector<int>& cells) const;

  const PlayHistory& history_;
  int action_count_ = 0;
  std::vector<double> signal_mw_;                              // per radar
  std::vector<std::vector<int>> neighbors_;                    // per radar, aggressor ids
  std::vector<std::vector<double>> neighbor_power_mw_;         // aligned with neighbors_
  std::vector<std::vector<std::vector<double>>> overlap_frac_; // per (victim, neighbor idx): n x n
  std::vector<std::vector<int>> forced_cells_;                 // per flat action: unrolled schedule
};

struct EquilibriumCertificate {
  std::vector<double> eps_ext;  // per player, R_ext(T)/T
  std::vector<double> eps_int;  // per player, R_int(T)/T
  double eps_ext_max = 0.0;
  double eps_int_max = 0.0;
};

struct RegretReport {
  EquilibriumCertificate certificate;
  std::vector<std::vector<double>> external_series;  // per radar
  std::vector<std::vector<double>> internal_series;
};

EquilibriumCertificate certify(const PlayHistory& history);
RegretReport regret_report(const PlayHistory& history);

// Fraction of transmissions (one per radar per chirp) whose (a,b) cell is also
// selected by some other radar at the same chirp.
double collision_rate(const std::vector<ChirpSchedule>& schedules, const ActionSpace& space);

// Fraction of chirps with at least one shared cell among the radars.
double chirp_collision_fraction(const std::vector<ChirpSchedule>& schedules,
                                const ActionSpace& space);

void write_history_json(std::ostream& os, const PlayHistory& history);
PlayHistory read_history_json(std::istream& is);

void write_certificates_json(std::ostream& os, const std::vector<RegretReport>& reports);

}  // namespace tfhop

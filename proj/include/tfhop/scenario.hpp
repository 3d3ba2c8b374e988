#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfhop/actions.hpp"
#include "tfhop/units.hpp"

namespace tfhop {

struct RadarParams {
  int id = 1;                       // 1-based
  double f_c_hz = 77e9;             // carrier
  double b_hz = 150e6;              // sweep bandwidth
  double t_a_s = 8.89e-6;           // active chirp duration
  double t_pri_s = 29.99e-6;        // pulse repetition interval
  int chirps_per_cpi = 256;
  double p_t_dbm = 13.0;
  std::array<double, 2> position_m = {0.0, 0.0};
  double antenna_gain_dbi = 20.0;   // identical TX/RX
  double adc_rate_hz = 10e6;

  double slope() const { return b_hz / t_a_s; }                      // alpha = B/T_a
  double wavelength_m() const { return kSpeedOfLight / f_c_hz; }
  int fast_time_samples() const { return static_cast<int>(t_a_s * adc_rate_hz); }
};

struct Target {
  double range_m = 25.0;
  double velocity_mps = 0.0;   // negative = approaching
  double rcs_dbsm = 20.0;
};

struct InterferenceEdge {
  int from = 0;   // aggressor id
  int to = 0;     // victim id
  double delay_s = 0.0;
};

// Directed interference graph, CPI-invariant. An edge (o -> i) means radar o's
// waveform reaches radar i with the stated delay.
class InterferenceGraph {
 public:
  void add_edge(int from, int to, double delay_s);
  const std::vector<InterferenceEdge>& edges() const { return edges_; }
  std::vector<int> interferers_of(int victim_id) const;
  std::optional<double> delay(int from, int to) const;

 private:
  std::vector<InterferenceEdge> edges_;
};

struct Scenario {
  std::vector<RadarParams> radars;
  std::vector<std::vector<Target>> targets;   // per radar
  InterferenceGraph graph;
  ActionSpace action_space;                   // shared by all radars
  double noise_dbm = -88.0;
  double max_unambiguous_range_m = 200.0;
  int epochs = 15;
  std::uint64_t seed = 1;

  int radar_count() const { return static_cast<int>(radars.size()); }
  double noise_mw() const { return dbm_to_mw(noise_dbm); }
  double radar_distance_m(int id_a, int id_b) const;
};

// Parse/validation failure; the message names the offending field.
struct ScenarioError : std::runtime_error {
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// Parsed configuration document. Fields marked "random" in the config stay
// unresolved here and are drawn from the seed at realization time.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  int epochs = 15;
  double noise_dbm = -88.0;
  double max_unambiguous_range_m = 200.0;

  int a_f = 3;
  double delta_f_hz = 150e6;
  int a_t = 7;
  double delta_t_s = 3e-6;

  int radar_count = 4;
  double f_c_hz = 77e9;
  std::optional<double> b_hz;                 // nullopt = random
  std::array<double, 2> b_random_range_hz = {110e6, 150e6};
  double t_a_s = 8.89e-6;
  double t_pri_s = 29.99e-6;
  int chirps_per_cpi = 256;
  double p_t_dbm = 13.0;
  double antenna_gain_dbi = 20.0;
  double adc_rate_hz = 10e6;
  std::optional<std::vector<std::array<double, 2>>> radar_positions_m;  // nullopt = random
  double placement_ring_radius_m = 25.0;
  double placement_jitter_radius_m = 5.0;

  std::optional<std::array<double, 2>> target_position_m;  // nullopt = random
  double target_placement_radius_m = 5.0;
  double target_rcs_dbsm = 20.0;
  std::optional<double> target_velocity_mps;               // nullopt = random
  std::array<double, 2> velocity_random_range_mps = {-25.0, 25.0};

  bool full_graph = true;
  double full_graph_delay_s = 0.0;
  std::vector<InterferenceEdge> explicit_edges;
};

ScenarioConfig parse_scenario_config(const std::string& json_text);

// Pure function of (config, seed): identical inputs give identical scenarios.
Scenario realize_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

// Convenience: realize with the seed stored in the config document.
Scenario load_scenario(const std::string& json_text);

// Canonical experiment configuration document (JSON text).
std::string table1_config_json(int radar_count = 4, std::uint64_t seed = 1, int epochs = 15);

// Round-trip of a realized scenario (no residual randomness), used by the
// history files so certification is self-contained.
std::string scenario_to_json_text(const Scenario& sc);
Scenario scenario_from_json_text(const std::string& text);

}  // namespace tfhop

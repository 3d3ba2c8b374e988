#include "tfhop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "tfhop/wavesim.hpp"

namespace tfhop {

using nlohmann::json;

double EmpiricalDistribution::mass(const std::vector<int>& profile) const {
  auto it = counts.find(profile);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / total;
}

EmpiricalDistribution empirical_distribution(const std::vector<std::vector<int>>& profiles) {
  if (profiles.empty()) throw std::invalid_argument("empirical_distribution: empty history");
  EmpiricalDistribution d;
  for (const auto& p : profiles) {
    d.counts[p] += 1;
    d.total += 1;
  }
  return d;
}

EmpiricalDistribution empirical_distribution(const PlayHistory& history) {
  std::vector<std::vector<int>> profiles;
  profiles.reserve(history.epochs.size());
  for (const auto& e : history.epochs) profiles.push_back(e.played);
  return empirical_distribution(profiles);
}

std::vector<double> external_regret_series(const RegretInput& in) {
  const std::size_t t_count = in.counterfactual.size();
  if (in.played.size() != t_count || in.realized.size() != t_count)
    throw std::invalid_argument("external_regret_series: ragged input");
  if (t_count == 0) return {};
  const std::size_t n = in.counterfactual[0].size();
  std::vector<double> cum(n, 0.0);
  std::vector<double> series(t_count, 0.0);
  for (std::size_t tau = 0; tau < t_count; ++tau) {
    for (std::size_t s = 0; s < n; ++s) cum[s] += in.counterfactual[tau][s] - in.realized[tau];
    series[tau] = *std::max_element(cum.begin(), cum.end());
  }
  return series;
}

std::vector<double> swap_regret_series(const RegretInput& in) {
  const std::size_t t_count = in.counterfactual.size();
  if (in.played.size() != t_count || in.realized.size() != t_count)
    throw std::invalid_argument("swap_regret_series: ragged input");
  if (t_count == 0) return {};
  const std::size_t n = in.counterfactual[0].size();
  // cum[s][d]: gain of redirecting source s to destination d over the prefix.
  std::vector<std::vector<double>> cum(n, std::vector<double>(n, 0.0));
  std::vector<double> series(t_count, 0.0);
  for (std::size_t tau = 0; tau < t_count; ++tau) {
    int src = in.played[tau];
    if (src < 0 || static_cast<std::size_t>(src) >= n)
      throw std::invalid_argument("swap_regret_series: played index out of range");
    auto& row = cum[static_cast<std::size_t>(src)];
    for (std::size_t d = 0; d < n; ++d) row[d] += in.counterfactual[tau][d] - in.realized[tau];
    // The destination of a never-played source stays at the zero row, so the
    // map max decomposes as the sum of per-source row maxima (sigma' = sigma
    // is always available).
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s)
      total += *std::max_element(cum[s].begin(), cum[s].end());
    series[tau] = total;
  }
  return series;
}

FastReplay::FastReplay(const PlayHistory& history) : history_(history) {
  const Scenario& sc = history.scenario;
  const int count = sc.radar_count();
  action_count_ = sc.action_space.size();
  signal_mw_.resize(static_cast<std::size_t>(count), 0.0);
  neighbors_.resize(static_cast<std::size_t>(count));
  neighbor_power_mw_.resize(static_cast<std::size_t>(count));
  overlap_frac_.resize(static_cast<std::size_t>(count));

  for (int i = 0; i < count; ++i) {
    const RadarParams& victim = sc.radars[static_cast<std::size_t>(i)];
    for (const Target& t : sc.targets[static_cast<std::size_t>(i)])
      signal_mw_[static_cast<std::size_t>(i)] += radar_received_power_mw(victim, t);

    for (int o : sc.graph.interferers_of(i + 1)) {
      const RadarParams& aggressor = sc.radars[static_cast<std::size_t>(o) - 1];
      neighbors_[static_cast<std::size_t>(i)].push_back(o);
      neighbor_power_mw_[static_cast<std::size_t>(i)].push_back(interference_received_power_mw(
          victim, aggressor, sc.radar_distance_m(i + 1, o)));

      // Cell-vs-cell fractional overlap table for this ordered pair.
      double delay = sc.graph.delay(o, i + 1).value_or(0.0);
      std::vector<double> table(static_cast<std::size_t>(action_count_) * action_count_, 0.0);
      for (int av = 1; av <= action_count_; ++av) {
        const JointAction& va = sc.action_space.at(av);
        ChirpEntry ve{va.a, va.b, va.f_hz, va.t_s};
        for (int ao = 1; ao <= action_count_; ++ao) {
          const JointAction& oa = sc.action_space.at(ao);
          ChirpEntry oe{oa.a, oa.b, oa.f_hz, oa.t_s};
          OverlapWindow w = overlap_detect(ve, victim, oe, aggressor, delay);
          if (w.overlaps)
            table[static_cast<std::size_t>(av - 1) * action_count_ + (ao - 1)] =
                w.duration() / victim.t_a_s;
        }
      }
      overlap_frac_[static_cast<std::size_t>(i)].push_back(std::move(table));
    }
  }

  // Forced schedules: the deterministic round-robin unroll of each pure
  // strategy, shared by every epoch.
  const int k_count = sc.radars.empty() ? 0 : sc.radars[0].chirps_per_cpi;
  forced_cells_.resize(static_cast<std::size_t>(action_count_));
  for (int flat = 1; flat <= action_count_; ++flat) {
    ChirpSchedule s = cyclic_schedule(flat, sc.action_space, history.block_len, k_count);
    forced_cells_[static_cast<std::size_t>(flat - 1)] = flat_actions(s, sc.action_space);
  }
}

double FastReplay::utility_for_schedule(int epoch, int radar_id, const std::vector<int>& cells) const {
  const Scenario& sc = history_.scenario;
  const EpochRecord& rec = history_.epochs[static_cast<std::size_t>(epoch) - 1];
  const std::size_t i = static_cast<std::size_t>(radar_id) - 1;
  const double noise = sc.noise_mw();
  const double signal = signal_mw_[i];
  const int k_count = static_cast<int>(cells.size());

  double sinr_sum = 0.0;       // mean over chirps of per-chirp SINR
  double interf_sum = 0.0;     // CPI aggregate interference
  for (int k = 0; k < k_count; ++k) {
    double interf = 0.0;
    int cell_v = cells[static_cast<std::size_t>(k)];
    for (std::size_t nb = 0; nb < neighbors_[i].size(); ++nb) {
      int o = neighbors_[i][nb];
      int cell_o = rec.schedules[static_cast<std::size_t>(o) - 1][static_cast<std::size_t>(k)];
      double frac = overlap_frac_[i][nb][static_cast<std::size_t>(cell_v - 1) * action_count_ +
                                         (cell_o - 1)];
      interf += neighbor_power_mw_[i][nb] * frac;
    }
    sinr_sum += signal / (interf + noise);
    interf_sum += interf;
  }
  double sinr = history_.agg == UtilityAggregation::kChirpMean
                    ? sinr_sum / k_count
                    : signal / (interf_sum / k_count + noise);
  return history_.umap(sinr);
}

double FastReplay::counterfactual_utility(int epoch, int radar_id, int forced_flat) const {
  if (epoch < 1 || epoch > history_.epoch_count())
    throw std::invalid_argument("counterfactual_utility: epoch out of range");
  if (forced_flat < 1 || forced_flat > action_count_)
    throw std::invalid_argument("counterfactual_utility: action out of range");
  return utility_for_schedule(epoch, radar_id, forced_cells_[static_cast<std::size_t>(forced_flat) - 1]);
}

std::vector<double> FastReplay::counterfactual_vector(int epoch, int radar_id) const {
  std::vector<double> out(static_cast<std::size_t>(action_count_), 0.0);
  for (int flat = 1; flat <= action_count_; ++flat)
    out[static_cast<std::size_t>(flat) - 1] = counterfactual_utility(epoch, radar_id, flat);
  return out;
}

double FastReplay::replayed_utility(int epoch, int radar_id) const {
  const EpochRecord& rec = history_.epochs[static_cast<std::size_t>(epoch) - 1];
  return utility_for_schedule(epoch, radar_id, rec.schedules[static_cast<std::size_t>(radar_id) - 1]);
}

RegretInput FastReplay::regret_input(int radar_id) const {
  RegretInput in;
  const int t_count = history_.epoch_count();
  in.counterfactual.reserve(static_cast<std::size_t>(t_count));
  for (int tau = 1; tau <= t_count; ++tau) {
    in.counterfactual.push_back(counterfactual_vector(tau, radar_id));
    const EpochRecord& rec = history_.epochs[static_cast<std::size_t>(tau) - 1];
    in.played.push_back(rec.played[static_cast<std::size_t>(radar_id) - 1] - 1);
    in.realized.push_back(rec.utilities[static_cast<std::size_t>(radar_id) - 1]);
  }
  return in;
}

RegretReport regret_report(const PlayHistory& history) {
  if (history.epochs.empty()) throw std::invalid_argument("regret_report: empty history");
  FastReplay replay(history);
  const int count = history.scenario.radar_count();
  const double t_count = static_cast<double>(history.epoch_count());
  RegretReport report;
  for (int i = 1; i <= count; ++i) {
    RegretInput in = replay.regret_input(i);
    report.external_series.push_back(external_regret_series(in));
    report.internal_series.push_back(swap_regret_series(in));
    report.certificate.eps_ext.push_back(report.external_series.back().back() / t_count);
    report.certificate.eps_int.push_back(report.internal_series.back().back() / t_count);
  }
  report.certificate.eps_ext_max =
      *std::max_element(report.certificate.eps_ext.begin(), report.certificate.eps_ext.end());
  report.certificate.eps_int_max =
      *std::max_element(report.certificate.eps_int.begin(), report.certificate.eps_int.end());
  return report;
}

EquilibriumCertificate certify(const PlayHistory& history) {
  return regret_report(history).certificate;
}

double collision_rate(const std::vector<ChirpSchedule>& schedules, const ActionSpace& space) {
  if (schedules.empty()) throw std::invalid_argument("collision_rate: no schedules");
  const int count = static_cast<int>(schedules.size());
  const int k_count = schedules[0].size();
  for (const auto& s : schedules)
    if (s.size() != k_count) throw std::invalid_argument("collision_rate: misaligned schedules");

  long collisions = 0;
  std::vector<int> cells(static_cast<std::size_t>(count));
  for (int k = 1; k <= k_count; ++k) {
    for (int i = 0; i < count; ++i) {
      const ChirpEntry& e = schedules[static_cast<std::size_t>(i)].at(k);
      cells[static_cast<std::size_t>(i)] = space.flat_index(e.a, e.b);
    }
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j)
        if (j != i && cells[static_cast<std::size_t>(j)] == cells[static_cast<std::size_t>(i)]) {
          ++collisions;
          break;
        }
  }
  return static_cast<double>(collisions) / (static_cast<double>(count) * k_count);
}

double chirp_collision_fraction(const std::vector<ChirpSchedule>& schedules,
                                const ActionSpace& space) {
  if (schedules.empty()) throw std::invalid_argument("chirp_collision_fraction: no schedules");
  const int count = static_cast<int>(schedules.size());
  const int k_count = schedules[0].size();
  for (const auto& s : schedules)
    if (s.size() != k_count)
      throw std::invalid_argument("chirp_collision_fraction: misaligned schedules");

  int colliding_chirps = 0;
  std::vector<int> cells(static_cast<std::size_t>(count));
  for (int k = 1; k <= k_count; ++k) {
    for (int i = 0; i < count; ++i) {
      const ChirpEntry& e = schedules[static_cast<std::size_t>(i)].at(k);
      cells[static_cast<std::size_t>(i)] = space.flat_index(e.a, e.b);
    }
    bool collided = false;
    for (int i = 0; i < count && !collided; ++i)
      for (int j = i + 1; j < count && !collided; ++j)
        collided = cells[static_cast<std::size_t>(i)] == cells[static_cast<std::size_t>(j)];
    colliding_chirps += collided ? 1 : 0;
  }
  return static_cast<double>(colliding_chirps) / k_count;
}

void write_history_json(std::ostream& os, const PlayHistory& history) {
  json root;
  root["scenario"] = json::parse(scenario_to_json_text(history.scenario));
  root["utility_map"] = {{"beta", history.umap.beta}, {"s0_linear", history.umap.s0_linear}};
  root["utility_aggregation"] =
      history.agg == UtilityAggregation::kChirpMean ? "chirp_mean" : "power_ratio";
  root["block_len"] = history.block_len;
  json epochs = json::array();
  for (const auto& e : history.epochs) {
    epochs.push_back({{"played", e.played}, {"schedules", e.schedules}, {"utilities", e.utilities}});
  }
  root["epochs"] = epochs;
  os << root.dump() << '\n';
}

PlayHistory read_history_json(std::istream& is) {
  json root;
  try {
    is >> root;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("history: ") + e.what());
  }
  PlayHistory h;
  h.scenario = scenario_from_json_text(root.at("scenario").dump());
  h.umap.beta = root.at("utility_map").at("beta").get<double>();
  h.umap.s0_linear = root.at("utility_map").at("s0_linear").get<double>();
  h.agg = root.at("utility_aggregation").get<std::string>() == "chirp_mean"
              ? UtilityAggregation::kChirpMean
              : UtilityAggregation::kPowerRatio;
  h.block_len = root.at("block_len").get<int>();
  for (const auto& e : root.at("epochs")) {
    EpochRecord rec;
    rec.played = e.at("played").get<std::vector<int>>();
    rec.schedules = e.at("schedules").get<std::vector<std::vector<int>>>();
    rec.utilities = e.at("utilities").get<std::vector<double>>();
    h.epochs.push_back(std::move(rec));
  }
  return h;
}

void write_certificates_json(std::ostream& os, const std::vector<RegretReport>& reports) {
  json root;
  json trials = json::array();
  for (std::size_t t = 0; t < reports.size(); ++t) {
    const RegretReport& r = reports[t];
    trials.push_back({{"trial", t},
                      {"eps_ext_per_player", r.certificate.eps_ext},
                      {"eps_int_per_player", r.certificate.eps_int},
                      {"eps_ext", r.certificate.eps_ext_max},
                      {"eps_int", r.certificate.eps_int_max},
                      {"external_regret_series", r.external_series},
                      {"internal_regret_series", r.internal_series}});
  }
  root["trials"] = trials;
  os << root.dump(2) << '\n';
}

}  // namespace tfhop

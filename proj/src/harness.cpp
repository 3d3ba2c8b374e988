#include "tfhop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "tfhop/units.hpp"
#include "tfhop/wavesim.hpp"

namespace tfhop {

using nlohmann::json;

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "random") return Algorithm::kRandom;
  if (name == "nash") return Algorithm::kNash;
  if (name == "external") return Algorithm::kExternal;
  if (name == "internal") return Algorithm::kInternal;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kRandom: return "random";
    case Algorithm::kNash: return "nash";
    case Algorithm::kExternal: return "external";
    case Algorithm::kInternal: return "internal";
  }
  return "?";
}

EpochState::EpochState(const ExperimentSpec& spec, Scenario sc, std::uint64_t stream_seed)
    : scenario(std::move(sc)),
      umap(scenario_utility_map(scenario, spec.utility_beta, spec.utility_s0_scale)),
      rng(stream_seed) {
  const int count = scenario.radar_count();
  const int n = scenario.action_space.size();
  for (int i = 0; i < count; ++i) {
    strategies.push_back(uniform_strategy(n));
    external_states.emplace_back(n);
    internal_states.emplace_back(n);
  }
  history.scenario = scenario;
  history.umap = umap;
  history.agg = spec.agg;
  history.block_len = spec.block_len;
}

namespace {

// Strategy actually used by an algorithm at this epoch, for the trace export.
MixedStrategy displayed_strategy(const ExperimentSpec& spec, const EpochState& state, int radar0) {
  const int n = state.scenario.action_space.size();
  switch (spec.algo) {
    case Algorithm::kRandom: return uniform_strategy(n);
    case Algorithm::kNash:
      return delta_strategy(n, nash_assignment_flat(radar0 + 1, n) - 1);
    default: return state.strategies[static_cast<std::size_t>(radar0)];
  }
}

double utility_from_powers(const std::vector<ChirpPowers>& powers, const UtilityMap& umap,
                           UtilityAggregation agg) {
  double sinr = agg == UtilityAggregation::kChirpMean ? chirp_mean_sinr(powers)
                                                      : cpi_power_ratio_sinr(powers);
  return umap(sinr);
}

}  // namespace

EpochMetrics run_epoch(EpochState& state, const ExperimentSpec& spec, TrialResult* collect,
                       std::vector<AdcMatrix>* keep_adc) {
  const Scenario& sc = state.scenario;
  const int count = sc.radar_count();
  const int n = sc.action_space.size();
  const int epoch = state.completed_epochs + 1;
  const double gamma_tau = spec.algo == Algorithm::kExternal
                               ? linear_decay(spec.learner.gamma_start, spec.learner.gamma_end,
                                              epoch, spec.epochs)
                               : spec.learner.gamma_internal;

  // Transmission scheduling. Learning variants sample one pure strategy per
  // CPI and unroll it deterministically; the random baseline resamples its
  // start pair every block.
  std::vector<ChirpSchedule> schedules(static_cast<std::size_t>(count));
  std::vector<int> played(static_cast<std::size_t>(count), 1);
  for (int i = 0; i < count; ++i) {
    const int k_count = sc.radars[static_cast<std::size_t>(i)].chirps_per_cpi;
    switch (spec.algo) {
      case Algorithm::kRandom: {
        schedules[static_cast<std::size_t>(i)] = stochastic_round_robin(
            uniform_strategy(n), sc.action_space, spec.block_len, k_count, state.rng);
        const ChirpEntry& first = schedules[static_cast<std::size_t>(i)].at(1);
        played[static_cast<std::size_t>(i)] = sc.action_space.flat_index(first.a, first.b);
        break;
      }
      case Algorithm::kNash: {
        int flat = nash_assignment_flat(i + 1, n);
        schedules[static_cast<std::size_t>(i)] =
            cyclic_schedule(flat, sc.action_space, spec.block_len, k_count);
        played[static_cast<std::size_t>(i)] = flat;
        break;
      }
      case Algorithm::kExternal:
      case Algorithm::kInternal: {
        int sigma = sample_index(state.strategies[static_cast<std::size_t>(i)], state.rng) + 1;
        schedules[static_cast<std::size_t>(i)] =
            cyclic_schedule(sigma, sc.action_space, spec.block_len, k_count);
        played[static_cast<std::size_t>(i)] = sigma;
        break;
      }
    }
  }

  // Simulation. Fast powers are always computed: they feed the logged history
  // so counterfactual replay is exact in both fidelities.
  std::vector<std::vector<ChirpPowers>> fast_powers = fast_power_sim(sc, schedules);
  std::vector<std::vector<ChirpPowers>> fidelity_powers;
  if (spec.fidelity == Fidelity::kWaveform) {
    std::vector<AdcMatrix> adc = synthesize_cpi_adc(sc, schedules, state.rng);
    fidelity_powers.reserve(adc.size());
    for (const AdcMatrix& m : adc) fidelity_powers.push_back(chirp_powers_from_adc(m));
    if (keep_adc) *keep_adc = std::move(adc);
  } else {
    fidelity_powers = fast_powers;
  }

  EpochMetrics metrics;
  metrics.epoch = epoch;
  metrics.collision_chirp_fraction = chirp_collision_fraction(schedules, sc.action_space);
  metrics.collision_per_transmission = collision_rate(schedules, sc.action_space);

  EpochRecord record;
  record.played = played;

  std::vector<std::vector<double>> trace_row;
  for (int i = 0; i < count; ++i) {
    const auto& powers = fidelity_powers[static_cast<std::size_t>(i)];
    CpiFeedback fb = make_cpi_feedback(powers, schedules[static_cast<std::size_t>(i)],
                                       sc.action_space, sc.noise_mw(), state.umap, epoch, spec.agg);
    metrics.sinr_db.push_back(lin_to_db(fb.power_ratio_sinr_linear));
    metrics.utility.push_back(fb.utility);

    record.schedules.push_back(flat_actions(schedules[static_cast<std::size_t>(i)], sc.action_space));
    record.utilities.push_back(
        utility_from_powers(fast_powers[static_cast<std::size_t>(i)], state.umap, spec.agg));

    if (collect) {
      trace_row.push_back(displayed_strategy(spec, state, i).probs);
      for (const auto& [flat, sinr] : fb.sinr) {
        const JointAction& act = sc.action_space.at(flat);
        FeedbackRow row;
        row.epoch = epoch;
        row.radar = i + 1;
        row.a = act.a;
        row.b = act.b;
        row.sinr_db = lin_to_db(sinr);
        auto snr_it = fb.snr.find(flat);
        row.snr_db = snr_it == fb.snr.end() ? std::nan("") : lin_to_db(snr_it->second);
        row.utility = fb.utility;
        collect->feedback.push_back(row);
      }
    }

    // Strategy update (disabled for the baselines).
    if (spec.algo == Algorithm::kExternal || spec.algo == Algorithm::kInternal) {
      std::vector<double> est =
          iw_estimate(fb.utility, played[static_cast<std::size_t>(i)] - 1,
                      state.strategies[static_cast<std::size_t>(i)], gamma_tau);
      if (spec.algo == Algorithm::kExternal) {
        state.strategies[static_cast<std::size_t>(i)] = external_update(
            state.external_states[static_cast<std::size_t>(i)], est, spec.learner.eta_external,
            gamma_tau);
      } else {
        state.strategies[static_cast<std::size_t>(i)] = internal_update(
            state.internal_states[static_cast<std::size_t>(i)], est,
            state.strategies[static_cast<std::size_t>(i)], spec.learner.eta_internal, gamma_tau,
            spec.learner.positive_part);
      }
    }
  }

  if (collect) collect->strategy_trace.push_back(std::move(trace_row));
  state.history.epochs.push_back(std::move(record));
  state.completed_epochs = epoch;
  return metrics;
}

TrialResult run_trial(const ExperimentSpec& spec, int trial) {
  Scenario sc = realize_scenario(spec.scenario, mix_seed(spec.seed, static_cast<std::uint64_t>(trial)));
  EpochState state(spec, std::move(sc),
                   mix_seed(spec.seed, 0x1000 + static_cast<std::uint64_t>(trial)));
  TrialResult result;
  result.trial = trial;
  for (int epoch = 1; epoch <= spec.epochs; ++epoch)
    result.metrics.push_back(run_epoch(state, spec, &result));
  result.history = std::move(state.history);
  return result;
}

namespace {

std::vector<TrialResult> run_all_trials(const ExperimentSpec& spec) {
  int workers = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, spec.trials));
  std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
  if (workers == 1) {
    for (int t = 0; t < spec.trials; ++t) results[static_cast<std::size_t>(t)] = run_trial(spec, t);
    return results;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int t = next.fetch_add(1);
      if (t >= spec.trials) return;
      results[static_cast<std::size_t>(t)] = run_trial(spec, t);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

void run_experiment(const ExperimentSpec& spec) {
  if (spec.epochs < 1 || spec.trials < 1)
    throw std::invalid_argument("run_experiment: epochs and trials must be >= 1");
  std::filesystem::create_directories(spec.out_dir);
  std::vector<TrialResult> results = run_all_trials(spec);

  {
    std::ofstream os(spec.out_dir / "metrics.csv");
    os << "trial,epoch,radar,algo,sinr_db,utility,collision_chirp_fraction,collision_per_transmission\n";
    os.precision(12);
    for (const TrialResult& tr : results)
      for (const EpochMetrics& em : tr.metrics)
        for (std::size_t i = 0; i < em.sinr_db.size(); ++i)
          os << tr.trial << ',' << em.epoch << ',' << i + 1 << ',' << to_string(spec.algo) << ','
             << em.sinr_db[i] << ',' << em.utility[i] << ',' << em.collision_chirp_fraction << ','
             << em.collision_per_transmission << '\n';
  }

  {
    std::ofstream os(spec.out_dir / "strategies.csv");
    os << "trial,epoch,radar,action,probability\n";
    os.precision(12);
    for (const TrialResult& tr : results)
      for (std::size_t e = 0; e < tr.strategy_trace.size(); ++e)
        for (std::size_t i = 0; i < tr.strategy_trace[e].size(); ++i)
          for (std::size_t s = 0; s < tr.strategy_trace[e][i].size(); ++s)
            os << tr.trial << ',' << e + 1 << ',' << i + 1 << ',' << s + 1 << ','
               << tr.strategy_trace[e][i][s] << '\n';
  }

  {
    std::ofstream os(spec.out_dir / "feedback.csv");
    os << "trial,epoch,radar,a,b,sinr_db,snr_db,utility\n";
    os.precision(12);
    for (const TrialResult& tr : results)
      for (const FeedbackRow& row : tr.feedback)
        os << tr.trial << ',' << row.epoch << ',' << row.radar << ',' << row.a << ',' << row.b
           << ',' << row.sinr_db << ',' << row.snr_db << ',' << row.utility << '\n';
  }

  {
    std::ofstream os(spec.out_dir / "history.json");
    os << "{\"trials\":[";
    for (std::size_t t = 0; t < results.size(); ++t) {
      if (t) os << ',';
      std::ostringstream one;
      write_history_json(one, results[t].history);
      std::string text = one.str();
      while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
      os << text;
    }
    os << "]}\n";
  }

  std::vector<RegretReport> reports;
  reports.reserve(results.size());
  for (const TrialResult& tr : results) reports.push_back(regret_report(tr.history));
  {
    std::ofstream os(spec.out_dir / "certificates.json");
    write_certificates_json(os, reports);
  }

  {
    std::vector<double> final_collision, final_sinr_db, per_trial_sinr_mean;
    std::vector<double> eps_ext, eps_int;
    for (std::size_t t = 0; t < results.size(); ++t) {
      const EpochMetrics& last = results[t].metrics.back();
      final_collision.push_back(last.collision_chirp_fraction);
      for (double s : last.sinr_db) final_sinr_db.push_back(s);
      per_trial_sinr_mean.push_back(mean(last.sinr_db));
      eps_ext.push_back(reports[t].certificate.eps_ext_max);
      eps_int.push_back(reports[t].certificate.eps_int_max);
    }
    json summary;
    summary["algo"] = to_string(spec.algo);
    summary["trials"] = spec.trials;
    summary["epochs"] = spec.epochs;
    summary["final_collision_chirp_fraction"] = {{"mean", mean(final_collision)},
                                                 {"median", median(final_collision)},
                                                 {"std", stddev(final_collision)}};
    summary["final_sinr_db"] = {{"mean", mean(final_sinr_db)},
                                {"per_trial_mean_std", stddev(per_trial_sinr_mean)}};
    summary["eps_ext"] = {{"mean", mean(eps_ext)}, {"max", *std::max_element(eps_ext.begin(), eps_ext.end())}};
    summary["eps_int"] = {{"mean", mean(eps_int)}, {"max", *std::max_element(eps_int.begin(), eps_int.end())}};
    std::ofstream os(spec.out_dir / "summary.json");
    os << summary.dump(2) << '\n';
  }
}

std::filesystem::path export_rd_cube(const ExperimentSpec& spec, int radar_id, int epoch) {
  if (spec.fidelity != Fidelity::kWaveform)
    throw std::invalid_argument("export_rd_cube: requires waveform fidelity");
  if (epoch < 1 || epoch > spec.epochs)
    throw std::invalid_argument("export_rd_cube: epoch out of range");

  Scenario sc = realize_scenario(spec.scenario, mix_seed(spec.seed, 0));
  if (radar_id < 1 || radar_id > sc.radar_count())
    throw std::invalid_argument("export_rd_cube: radar id out of range");
  EpochState state(spec, sc, mix_seed(spec.seed, 0x1000));
  std::vector<AdcMatrix> adc;
  for (int e = 1; e <= epoch; ++e) {
    std::vector<AdcMatrix> this_epoch;
    run_epoch(state, spec, nullptr, &this_epoch);
    if (e == epoch) adc = std::move(this_epoch);
  }

  const RadarParams& radar = sc.radars[static_cast<std::size_t>(radar_id) - 1];
  const AdcMatrix& m = adc[static_cast<std::size_t>(radar_id) - 1];
  ChirpSchedule sched = schedule_from_flat(
      state.history.epochs[static_cast<std::size_t>(epoch) - 1]
          .schedules[static_cast<std::size_t>(radar_id) - 1],
      sc.action_space);
  RdCube cube = process_cpi(m.total(), sched, radar);

  std::filesystem::create_directories(spec.out_dir);
  std::ostringstream stem;
  stem << "rdcube_radar" << radar_id << "_epoch" << epoch;
  std::filesystem::path csv_path = spec.out_dir / (stem.str() + ".csv");
  std::filesystem::path meta_path = spec.out_dir / (stem.str() + "_meta.json");
  const Target& truth = sc.targets[static_cast<std::size_t>(radar_id) - 1][0];
  {
    std::ofstream os(csv_path);
    write_rd_cube_csv(os, cube);
  }
  {
    std::ofstream os(meta_path);
    write_rd_cube_meta(os, cube, truth.range_m, truth.velocity_mps);
  }
  return csv_path;
}

void certify_history_file(const std::filesystem::path& history_file,
                          const std::filesystem::path& out_file) {
  std::ifstream is(history_file);
  if (!is) throw std::runtime_error("certify: cannot open " + history_file.string());
  json root;
  is >> root;
  std::vector<RegretReport> reports;
  auto one = [&](const json& h) {
    std::istringstream buf(h.dump());
    PlayHistory history = read_history_json(buf);
    reports.push_back(regret_report(history));
  };
  if (root.contains("trials")) {
    for (const auto& h : root["trials"]) one(h);
  } else {
    one(root);
  }
  std::ofstream os(out_file);
  if (!os) throw std::runtime_error("certify: cannot open " + out_file.string());
  write_certificates_json(os, reports);
}

}  // namespace tfhop

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfhop/harness.hpp"

using namespace tfhop;

namespace {

ExperimentSpec small_spec(Algorithm algo) {
  ExperimentSpec spec;
  spec.scenario = parse_scenario_config(table1_config_json());
  spec.algo = algo;
  spec.epochs = 5;
  spec.trials = 2;
  spec.seed = 7;
  return spec;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("baseline strategies never change across epochs") {
  TrialResult nash = run_trial(small_spec(Algorithm::kNash), 0);
  TrialResult random = run_trial(small_spec(Algorithm::kRandom), 0);
  for (std::size_t e = 1; e < nash.strategy_trace.size(); ++e) {
    CHECK(nash.strategy_trace[e] == nash.strategy_trace[0]);
    CHECK(random.strategy_trace[e] == random.strategy_trace[0]);
  }
  // Nash plays its assigned action; random stays uniform.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(nash.strategy_trace[0][i][i] == 1.0);  // radar i+1 -> flat i+1 (21 actions, I=4)
    for (double v : random.strategy_trace[0][i]) CHECK(v == doctest::Approx(1.0 / 21));
  }
  // And the nash baseline repeats the same schedule every epoch.
  for (int e = 1; e < 5; ++e) CHECK(nash.history.epochs[e].schedules == nash.history.epochs[0].schedules);
}

TEST_CASE("learners move probability mass away from uniform") {
  TrialResult internal = run_trial(small_spec(Algorithm::kInternal), 0);
  const auto& last = internal.strategy_trace.back();
  double max_mass = 0.0;
  for (const auto& radar_probs : last)
    for (double v : radar_probs) max_mass = std::max(max_mass, v);
  CHECK(max_mass > 1.0 / 21 + 1e-3);
}

TEST_CASE("fixed seed reruns are identical in memory") {
  ExperimentSpec spec = small_spec(Algorithm::kExternal);
  TrialResult a = run_trial(spec, 1);
  TrialResult b = run_trial(spec, 1);
  REQUIRE(a.metrics.size() == b.metrics.size());
  for (std::size_t e = 0; e < a.metrics.size(); ++e) {
    CHECK(a.metrics[e].sinr_db == b.metrics[e].sinr_db);
    CHECK(a.metrics[e].utility == b.metrics[e].utility);
    CHECK(a.metrics[e].collision_chirp_fraction == b.metrics[e].collision_chirp_fraction);
  }
  for (std::size_t e = 0; e < a.history.epochs.size(); ++e) {
    CHECK(a.history.epochs[e].played == b.history.epochs[e].played);
    CHECK(a.history.epochs[e].schedules == b.history.epochs[e].schedules);
    CHECK(a.history.epochs[e].utilities == b.history.epochs[e].utilities);
  }
}

TEST_CASE("logged utilities equal replay recomputation within 1e-9") {
  TrialResult result = run_trial(small_spec(Algorithm::kExternal), 0);
  FastReplay replay(result.history);
  for (int epoch = 1; epoch <= result.history.epoch_count(); ++epoch)
    for (int radar = 1; radar <= 4; ++radar)
      CHECK(replay.replayed_utility(epoch, radar) ==
            doctest::Approx(result.history.epochs[epoch - 1].utilities[radar - 1]).epsilon(1e-9));
}

TEST_CASE("experiment outputs are deterministic and schema-stable") {
  ExperimentSpec spec = small_spec(Algorithm::kInternal);
  auto out_a = std::filesystem::temp_directory_path() / "tfhop_test_out_a";
  auto out_b = std::filesystem::temp_directory_path() / "tfhop_test_out_b";
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
  spec.out_dir = out_a;
  spec.threads = 1;
  run_experiment(spec);
  spec.out_dir = out_b;
  spec.threads = 4;  // worker pool must not change results
  run_experiment(spec);

  for (const char* name : {"metrics.csv", "strategies.csv", "feedback.csv", "history.json",
                           "certificates.json", "summary.json"}) {
    CAPTURE(name);
    std::string a = slurp(out_a / name);
    std::string b = slurp(out_b / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }

  std::string metrics = slurp(out_a / "metrics.csv");
  CHECK(metrics.rfind("trial,epoch,radar,algo,sinr_db,utility,collision_chirp_fraction,"
                      "collision_per_transmission\n",
                      0) == 0);
  std::string strategies = slurp(out_a / "strategies.csv");
  CHECK(strategies.rfind("trial,epoch,radar,action,probability\n", 0) == 0);
  std::string feedback = slurp(out_a / "feedback.csv");
  CHECK(feedback.rfind("trial,epoch,radar,a,b,sinr_db,snr_db,utility\n", 0) == 0);

  // certify CLI path consumes the history file.
  certify_history_file(out_a / "history.json", out_a / "recertified.json");
  CHECK(!slurp(out_a / "recertified.json").empty());

  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
}

TEST_CASE("waveform fidelity runs the full chain") {
  ExperimentSpec spec = small_spec(Algorithm::kExternal);
  spec.epochs = 2;
  spec.trials = 1;
  spec.fidelity = Fidelity::kWaveform;
  TrialResult result = run_trial(spec, 0);
  REQUIRE(result.metrics.size() == 2);
  for (const EpochMetrics& em : result.metrics) {
    REQUIRE(em.sinr_db.size() == 4);
    for (double u : em.utility) {
      CHECK(u > 0.0);
      CHECK(u < 1.0);
    }
  }
}

TEST_CASE("RD cube export requires waveform fidelity and writes the files") {
  ExperimentSpec spec = small_spec(Algorithm::kNash);
  spec.epochs = 1;
  spec.trials = 1;
  CHECK_THROWS(export_rd_cube(spec, 1, 1));

  spec.fidelity = Fidelity::kWaveform;
  spec.out_dir = std::filesystem::temp_directory_path() / "tfhop_test_rdmap";
  std::filesystem::remove_all(spec.out_dir);
  auto csv = export_rd_cube(spec, 1, 1);
  CHECK(std::filesystem::exists(csv));
  CHECK(std::filesystem::exists(spec.out_dir / "rdcube_radar1_epoch1_meta.json"));
  std::string meta = slurp(spec.out_dir / "rdcube_radar1_epoch1_meta.json");
  CHECK(meta.find("truth_range_m") != std::string::npos);
  CHECK_THROWS(export_rd_cube(spec, 99, 1));
  std::filesystem::remove_all(spec.out_dir);
}

TEST_CASE("run_epoch propagates context in errors") {
  ExperimentSpec spec = small_spec(Algorithm::kExternal);
  Scenario sc = realize_scenario(spec.scenario, 1);
  EpochState state(spec, sc, 2);
  // Valid epoch runs cleanly.
  CHECK_NOTHROW(run_epoch(state, spec));
  CHECK(state.completed_epochs == 1);
}

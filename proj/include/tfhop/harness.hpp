#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tfhop/analysis.hpp"
#include "tfhop/learning.hpp"
#include "tfhop/rdproc.hpp"

namespace tfhop {

enum class Algorithm { kRandom, kNash, kExternal, kInternal };
enum class Fidelity { kFast, kWaveform };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);

struct LearnerConfig {
  // External learner, constant step with linearly decayed exploration.
  double eta_external = 0.1252;
  double gamma_start = 0.1;
  double gamma_end = 0.0;
  // Internal learner, exploration-free with positive-part thresholding.
  double eta_internal = 0.5;
  double gamma_internal = 0.0;
  bool positive_part = true;
};

struct ExperimentSpec {
  ScenarioConfig scenario;
  Algorithm algo = Algorithm::kInternal;
  int epochs = 15;
  int trials = 1;
  std::uint64_t seed = 1;
  Fidelity fidelity = Fidelity::kFast;
  LearnerConfig learner;
  int block_len = 1;
  double utility_beta = 2.0;
  double utility_s0_scale = 1.0;
  UtilityAggregation agg = UtilityAggregation::kPowerRatio;
  std::filesystem::path out_dir;
  int threads = 0;  // 0 = hardware concurrency
};

struct EpochMetrics {
  int epoch = 0;
  std::vector<double> sinr_db;   // per radar, CPI power-ratio SINR
  std::vector<double> utility;   // per radar, fidelity utility
  double collision_chirp_fraction = 0.0;
  double collision_per_transmission = 0.0;
};

struct FeedbackRow {
  int epoch = 0, radar = 0, a = 0, b = 0;
  double sinr_db = 0.0;
  double snr_db = 0.0;  // NaN when no interference-free chirp
  double utility = 0.0;
};

// Mutable per-trial state threaded through run_epoch.
struct EpochState {
  Scenario scenario;
  UtilityMap umap;
  std::vector<MixedStrategy> strategies;
  std::vector<ExternalDualState> external_states;
  std::vector<InternalDualState> internal_states;
  PlayHistory history;
  Rng rng;
  int completed_epochs = 0;

  EpochState(const ExperimentSpec& spec, Scenario sc, std::uint64_t stream_seed);
};

struct TrialResult {
  int trial = 0;
  std::vector<EpochMetrics> metrics;
  std::vector<std::vector<std::vector<double>>> strategy_trace;  // [epoch][radar][action]
  std::vector<FeedbackRow> feedback;
  PlayHistory history;
};

// One CPI of Algorithm 1: schedule, simulate, estimate feedback, update.
// Keeps the AdcMatrix of the epoch when `keep_adc` is set (waveform only).
EpochMetrics run_epoch(EpochState& state, const ExperimentSpec& spec,
                       TrialResult* collect = nullptr,
                       std::vector<AdcMatrix>* keep_adc = nullptr);

TrialResult run_trial(const ExperimentSpec& spec, int trial);

// Full experiment: trials in a worker pool, outputs under spec.out_dir
// (metrics.csv, strategies.csv, feedback.csv, history.json, certificates.json,
// summary.json). Deterministic function of (spec, seed).
void run_experiment(const ExperimentSpec& spec);

// Re-runs trial 0 at waveform fidelity up to `epoch` and writes the RD cube
// export for one radar (rdcube CSV + metadata sidecar with the ground truth).
// Rejects fast-fidelity specs.
std::filesystem::path export_rd_cube(const ExperimentSpec& spec, int radar_id, int epoch);

// Certification entry point for the CLI: reads a history file (single history
// or {"trials": [...]}) and writes certificates JSON.
void certify_history_file(const std::filesystem::path& history_file,
                          const std::filesystem::path& out_file);

}  // namespace tfhop

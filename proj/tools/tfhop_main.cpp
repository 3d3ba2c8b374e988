// Command-line front end: run experiments, certify logged histories, export
// range-Doppler cubes.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tfhop/harness.hpp"

namespace {

tfhop::ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario config: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return tfhop::parse_scenario_config(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized no-regret time-frequency scheduling for FMCW radars"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a scheduling experiment");
  std::string spec_path, algo = "internal", fidelity = "fast", out_dir = "out", agg = "power_ratio";
  int epochs = 15, trials = 1, block_len = 1, threads = 0;
  std::uint64_t seed = 1;
  double eta_external = 0.1252, gamma_start = 0.1, gamma_end = 0.0;
  double eta_internal = 0.5;
  double beta = 2.0, s0_scale = 1.0;
  run->add_option("--spec", spec_path, "Scenario config (JSON)")->required();
  run->add_option("--algo", algo, "random|nash|external|internal");
  run->add_option("--epochs", epochs, "CPIs per trial");
  run->add_option("--trials", trials, "Monte Carlo trials");
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--fidelity", fidelity, "fast|waveform");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--block-length", block_len, "Round-robin block length");
  run->add_option("--eta-external", eta_external, "External learner step size");
  run->add_option("--gamma-start", gamma_start, "External exploration at epoch 1");
  run->add_option("--gamma-end", gamma_end, "External exploration at the last epoch");
  run->add_option("--eta-internal", eta_internal, "Internal learner step size");
  run->add_option("--beta", beta, "Utility exponent");
  run->add_option("--s0-scale", s0_scale, "Half-good SINR scale relative to the clean SNR");
  run->add_option("--utility-agg", agg, "power_ratio|chirp_mean");
  run->add_option("--threads", threads, "Worker threads (0 = auto)");

  // certify
  auto* certify = app.add_subcommand("certify", "Equilibrium certificates from a logged history");
  std::string history_path, cert_out = "certificates.json";
  certify->add_option("--history", history_path, "history.json from a run")->required();
  certify->add_option("--out", cert_out, "Output file");

  // rdmap
  auto* rdmap = app.add_subcommand("rdmap", "Export the range-Doppler cube of one radar");
  std::string rd_spec, rd_algo = "internal", rd_out = "out";
  int rd_radar = 1, rd_epoch = 15, rd_epochs = 15, rd_block = 1;
  std::uint64_t rd_seed = 1;
  rdmap->add_option("--spec", rd_spec, "Scenario config (JSON)")->required();
  rdmap->add_option("--radar", rd_radar, "Radar id (1-based)")->required();
  rdmap->add_option("--algo", rd_algo, "random|nash|external|internal");
  rdmap->add_option("--epoch", rd_epoch, "Epoch to export");
  rdmap->add_option("--epochs", rd_epochs, "Total epochs to run");
  rdmap->add_option("--seed", rd_seed, "Base seed");
  rdmap->add_option("--block-length", rd_block, "Round-robin block length");
  rdmap->add_option("--out", rd_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      tfhop::ExperimentSpec spec;
      spec.scenario = load_config_file(spec_path);
      spec.algo = tfhop::algorithm_from_string(algo);
      spec.epochs = epochs;
      spec.trials = trials;
      spec.seed = seed;
      if (fidelity == "fast") {
        spec.fidelity = tfhop::Fidelity::kFast;
      } else if (fidelity == "waveform") {
        spec.fidelity = tfhop::Fidelity::kWaveform;
      } else {
        throw std::runtime_error("unknown fidelity: " + fidelity);
      }
      spec.learner.eta_external = eta_external;
      spec.learner.gamma_start = gamma_start;
      spec.learner.gamma_end = gamma_end;
      spec.learner.eta_internal = eta_internal;
      spec.block_len = block_len;
      spec.utility_beta = beta;
      spec.utility_s0_scale = s0_scale;
      if (agg == "power_ratio") {
        spec.agg = tfhop::UtilityAggregation::kPowerRatio;
      } else if (agg == "chirp_mean") {
        spec.agg = tfhop::UtilityAggregation::kChirpMean;
      } else {
        throw std::runtime_error("unknown utility aggregation: " + agg);
      }
      spec.out_dir = out_dir;
      spec.threads = threads;
      tfhop::run_experiment(spec);
      std::cout << "wrote " << out_dir << "/{metrics.csv,strategies.csv,feedback.csv,history.json,"
                << "certificates.json,summary.json}\n";
    } else if (certify->parsed()) {
      tfhop::certify_history_file(history_path, cert_out);
      std::cout << "wrote " << cert_out << "\n";
    } else if (rdmap->parsed()) {
      tfhop::ExperimentSpec spec;
      spec.scenario = load_config_file(rd_spec);
      spec.algo = tfhop::algorithm_from_string(rd_algo);
      spec.epochs = rd_epochs;
      spec.trials = 1;
      spec.seed = rd_seed;
      spec.fidelity = tfhop::Fidelity::kWaveform;
      spec.block_len = rd_block;
      spec.out_dir = rd_out;
      auto path = tfhop::export_rd_cube(spec, rd_radar, rd_epoch);
      std::cout << "wrote " << path.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// Command-line front end: simulate | bounds | chains | region.
// All randomness flows from --seed; DMESIM_THREADS controls trial
// parallelism (output is identical for any thread count).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dme/errors.hpp"
#include "dme/harness.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<std::string> out;
  std::optional<std::string> strategy;
  std::optional<std::string> combiner;
  std::optional<std::string> region_mode;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "experiment config file (key = value)");
  cmd->add_option("--seed", ov.seed, "master seed");
  cmd->add_option("--trials", ov.trials, "Monte Carlo trials per estimator");
  cmd->add_option("--out", ov.out, "output path (default stdout)");
  cmd->add_option("--strategy", ov.strategy, "wz|alg1|alg2|file");
  cmd->add_option("--combiner", ov.combiner, "scaled|plain");
  cmd->add_option("--region-mode", ov.region_mode, "eq15|strict-eq17");
}

dme::ExperimentConfig build_config(const Overrides& ov) {
  dme::ExperimentConfig cfg;
  if (!ov.config_path.empty()) {
    cfg = dme::load_config_file(ov.config_path);
  }
  // CLI flags override config file values; re-parse through the same
  // validators so error messages stay uniform.
  std::string patch;
  if (ov.strategy) patch += "strategy = " + *ov.strategy + "\n";
  if (ov.combiner) patch += "combiner = " + *ov.combiner + "\n";
  if (ov.region_mode) patch += "region_mode = " + *ov.region_mode + "\n";
  if (!patch.empty()) {
    const dme::ExperimentConfig parsed = dme::parse_config_text(patch);
    if (ov.strategy) cfg.strategy = parsed.strategy;
    if (ov.combiner) cfg.combiner = parsed.combiner;
    if (ov.region_mode) cfg.region_mode = parsed.region_mode;
  }
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.trials) cfg.trials = *ov.trials;
  if (ov.out) cfg.out = *ov.out;
  return cfg;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed mean estimation with side information: quantizer "
               "simulator and bound calculator"};
  app.require_subcommand(1);

  Overrides sim_ov, bounds_ov, chains_ov;
  bool bounds_kv = false;
  bool chains_validate = false;

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo comparison, CSV output");
  add_common_flags(sim_cmd, sim_ov);

  auto* bounds_cmd = app.add_subcommand("bounds", "bound report without simulation");
  add_common_flags(bounds_cmd, bounds_ov);
  bounds_cmd->add_flag("--kv", bounds_kv, "flat key = value output");

  auto* chains_cmd = app.add_subcommand("chains", "print the selected chains");
  add_common_flags(chains_cmd, chains_ov);
  chains_cmd->add_flag("--validate", chains_validate, "run the chain validator");

  int region_n = 16;
  double region_delta_t = 1.0;
  double region_delta_ti = 1.0;
  double region_lo = 0.0;
  double region_hi = 8.0;
  int region_steps = 33;
  std::string region_out;
  auto* region_cmd = app.add_subcommand("region", "sweep the improvement region");
  region_cmd->add_option("--n", region_n, "client count");
  region_cmd->add_option("--delta-t", region_delta_t, "head side distance");
  region_cmd->add_option("--delta-ti", region_delta_ti, "head-to-client distance");
  region_cmd->add_option("--delta-i-min", region_lo, "sweep start");
  region_cmd->add_option("--delta-i-max", region_hi, "sweep end");
  region_cmd->add_option("--steps", region_steps, "sweep points");
  region_cmd->add_option("--out", region_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) {
      const dme::ExperimentConfig cfg = build_config(sim_ov);
      return emit(dme::run_simulate(cfg), cfg.out);
    }
    if (bounds_cmd->parsed()) {
      const dme::ExperimentConfig cfg = build_config(bounds_ov);
      return emit(dme::run_bounds(cfg, bounds_kv), cfg.out);
    }
    if (chains_cmd->parsed()) {
      const dme::ExperimentConfig cfg = build_config(chains_ov);
      return emit(dme::run_chains(cfg, chains_validate), cfg.out);
    }
    if (region_cmd->parsed()) {
      return emit(dme::run_region(region_n, region_delta_t, region_delta_ti,
                                  region_lo, region_hi, region_steps),
                  region_out);
    }
  } catch (const dme::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

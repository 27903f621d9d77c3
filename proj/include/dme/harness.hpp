#pragma once

// Experiment front end shared by the CLI and the test suites: flat key-value
// configs, strategy wiring, and deterministic CSV emission.

#include <cstdint>
#include <map>
#include <string>

#include "dme/sim.hpp"

namespace dme {

enum class Strategy { wz, alg1, alg2, file };

struct ExperimentConfig {
  int n = 16;
  int d = 256;
  int r = 64;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  int instances = 1;
  Strategy strategy = Strategy::wz;
  CombinerMode combiner = CombinerMode::scaled;
  RegionMode region_mode = RegionMode::eq15;
  std::string out;          // empty = stdout
  std::string chains_file;  // required for Strategy::file
  double loose_factor = 1.0;
  bool allow_out_of_regime = false;
  InstanceSpec instance;

  // Range/consistency checks; throws ConfigError naming the field.
  void validate() const;
};

// Layer 1: "key = value" lines, '#' comments, blank lines ignored.
// Duplicate keys are errors.
std::map<std::string, std::string> parse_kv(const std::string& text);

// Layer 2: config from kv text; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical kv dump; parse_config_text(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& config);

// Value with 12 significant digits, stable across runs and platforms that
// share a libc printf. Used for every number the harness emits.
std::string format_sig(double value);

inline constexpr const char* kSimulateCsvHeader =
    "estimator,n,d,r,k,trials,mse_empirical,mse_stderr,bound,ratio_emp_bound,"
    "sum_D,sum_delta_sq,improvement_region,seed";

// One CSV row per (estimator, instance). For strategies other than wz the
// matching wz rows are emitted first so runs are directly comparable.
std::string run_simulate(const ExperimentConfig& config);

// Bound report without simulation; kv = flat key-value output, otherwise an
// aligned table.
std::string run_bounds(const ExperimentConfig& config, bool kv);

// Chain listing with per-chain weight and chain constant; optionally runs
// the validator and reports the first violation.
std::string run_chains(const ExperimentConfig& config, bool validate);

// Region sweep over delta_i at fixed (delta_t, delta_ti); reports the chain
// constant and membership under both region modes.
std::string run_region(int n, double delta_t, double delta_ti, double delta_i_lo,
                       double delta_i_hi, int steps);

// Builds the planning table (loose_factor applied) and the chain plan for
// the configured strategy.
ChainPlan plan_for_strategy(const ExperimentConfig& config, const DeltaTable& table);

}  // namespace dme

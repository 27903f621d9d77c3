#pragma once

// End-to-end protocol execution: instance generation under the distance
// constraints, per-trial shared-randomness setup, ordered chained decoding,
// and Monte Carlo aggregation of the mean-estimation error.

#include <cstdint>
#include <vector>

#include "dme/bounds.hpp"
#include "dme/chains.hpp"
#include "dme/codec.hpp"

namespace dme {

struct Instance {
  int n = 0;
  int d = 0;
  std::vector<std::vector<double>> x;  // client vectors
  std::vector<std::vector<double>> y;  // server side information
  DeltaTable table;                    // realized (tight) distances
  std::vector<double> true_mean;
};

enum class InstanceMode { derive, star };

struct InstanceSpec {
  InstanceMode mode = InstanceMode::derive;
  // derive: x_i = center-point + spread * u_i, y_i = x_i + noise * v_i with
  // random unit directions; the table records the realized distances.
  double center = 1.0;
  double spread = 1.0;
  double noise = 1.0;
  // star: client `head` at the hub; x_j = x_head + delta_spoke * u_j,
  // y_head = x_head + delta_head * v, y_j = x_j + delta_side * v_j. Targeted
  // distances hold with equality, so region membership can be engineered.
  int head = 0;
  double delta_head = 1.0;
  double delta_spoke = 1.0;
  double delta_side = 10.0;
};

Instance generate_instance(int n, int d, const InstanceSpec& spec,
                           std::uint64_t seed);

// Checks the supplied vectors against a declared table; throws
// ConstraintViolation naming the pair and the slack on failure.
Instance verify_instance(std::vector<std::vector<double>> x,
                         std::vector<std::vector<double>> y,
                         DeltaTable declared);

struct TrialResult {
  std::vector<double> estimate;              // decoded mean, length d
  double sq_error = 0.0;                     // ||estimate - true_mean||^2
  std::vector<double> per_client_sq_errors;  // ||xhat_i - x_i||^2
  std::int64_t bits_sent = 0;
};

// One protocol round: encode every client, decode in plan order with each
// chain's predecessor estimate as side information, average. Rotations and
// coordinate subsets are fresh per (trial, client).
TrialResult run_trial(const Instance& instance, const ChainPlan& plan,
                      const CodecParams& params, std::uint64_t master_seed,
                      std::int64_t trial_id, CombinerMode mode);

struct MseReport {
  double mse_mean = 0.0;
  double mse_stderr = 0.0;                // sample std of sq_error / sqrt(trials)
  std::vector<double> per_client_mse;     // per-client mean squared errors
  std::vector<double> mean_estimate;      // average decoded mean over trials
  std::int64_t trials = 0;
  std::int64_t bits_sent_per_trial = 0;
  BoundReport bounds;
};

// Runs trials 0..trials-1 (parallel when threads != 1) with deterministic,
// trial-ordered aggregation. threads == 0 resolves from DMESIM_THREADS or
// the hardware. bound_table defaults to instance.table.
MseReport monte_carlo(const Instance& instance, const ChainPlan& plan,
                      const CodecParams& params, std::int64_t trials,
                      std::uint64_t master_seed, CombinerMode mode,
                      int threads = 0, const DeltaTable* bound_table = nullptr);

int resolve_thread_count(int requested, std::int64_t trials);

}  // namespace dme

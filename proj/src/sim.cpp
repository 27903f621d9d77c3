#include "dme/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "dme/errors.hpp"
#include "dme/rng.hpp"

namespace dme {

namespace {

std::vector<double> unit_direction(RandomStream& stream, int d) {
  std::vector<double> v(d);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (double& c : v) {
      c = stream.next_gaussian();
      norm_sq += c * c;
    }
  } while (norm_sq == 0.0);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& c : v) c *= inv;
  return v;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

void fill_realized_table(Instance& inst) {
  inst.table = DeltaTable(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    inst.table.set_side(i, distance(inst.x[i], inst.y[i]));
    for (int j = i + 1; j < inst.n; ++j) {
      inst.table.set_cross(i, j, distance(inst.x[i], inst.x[j]));
    }
  }
}

void fill_true_mean(Instance& inst) {
  inst.true_mean.assign(inst.d, 0.0);
  for (const auto& xi : inst.x) {
    for (int c = 0; c < inst.d; ++c) inst.true_mean[c] += xi[c];
  }
  for (double& c : inst.true_mean) c /= inst.n;
}

}  // namespace

Instance generate_instance(int n, int d, const InstanceSpec& spec,
                           std::uint64_t seed) {
  if (n < 2 || d < 1) {
    throw DimensionError("instance requires n >= 2 and d >= 1");
  }
  Instance inst;
  inst.n = n;
  inst.d = d;
  inst.x.resize(n);
  inst.y.resize(n);

  if (spec.mode == InstanceMode::derive) {
    RandomStream stream(derive_seed(seed, "gen/derive"));
    std::vector<double> center(d, 0.0);
    if (spec.center != 0.0) {
      center = unit_direction(stream, d);
      for (double& c : center) c *= spec.center;
    }
    for (int i = 0; i < n; ++i) {
      const std::vector<double> u = unit_direction(stream, d);
      inst.x[i].resize(d);
      for (int c = 0; c < d; ++c) inst.x[i][c] = center[c] + spec.spread * u[c];
      const std::vector<double> v = unit_direction(stream, d);
      inst.y[i].resize(d);
      for (int c = 0; c < d; ++c) inst.y[i][c] = inst.x[i][c] + spec.noise * v[c];
    }
  } else {
    if (spec.head < 0 || spec.head >= n) {
      throw DimensionError("star head index out of range");
    }
    RandomStream stream(derive_seed(seed, "gen/star"));
    std::vector<double> hub(d, 0.0);
    if (spec.center != 0.0) {
      hub = unit_direction(stream, d);
      for (double& c : hub) c *= spec.center;
    }
    for (int i = 0; i < n; ++i) {
      if (i == spec.head) {
        inst.x[i] = hub;
      } else {
        const std::vector<double> u = unit_direction(stream, d);
        inst.x[i].resize(d);
        for (int c = 0; c < d; ++c) inst.x[i][c] = hub[c] + spec.delta_spoke * u[c];
      }
      const double side = (i == spec.head) ? spec.delta_head : spec.delta_side;
      const std::vector<double> v = unit_direction(stream, d);
      inst.y[i].resize(d);
      for (int c = 0; c < d; ++c) inst.y[i][c] = inst.x[i][c] + side * v[c];
    }
  }

  fill_realized_table(inst);
  fill_true_mean(inst);
  return inst;
}

Instance verify_instance(std::vector<std::vector<double>> x,
                         std::vector<std::vector<double>> y,
                         DeltaTable declared) {
  const int n = declared.n();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n || n < 1) {
    throw DimensionError("vector count != table n");
  }
  const int d = static_cast<int>(x[0].size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(x[i].size()) != d || static_cast<int>(y[i].size()) != d) {
      throw DimensionError("ragged instance vectors");
    }
  }
  for (int i = 0; i < n; ++i) {
    const double dist = distance(x[i], y[i]);
    const double allowed = declared.side(i);
    if (dist > allowed + 1e-12 * std::max(1.0, allowed)) {
      throw ConstraintViolation("||x_" + std::to_string(i + 1) + " - y_" +
                                std::to_string(i + 1) + "|| = " + std::to_string(dist) +
                                " exceeds " + std::to_string(allowed) + " by " +
                                std::to_string(dist - allowed));
    }
    for (int j = i + 1; j < n; ++j) {
      const double cross = distance(x[i], x[j]);
      const double limit = declared.cross(i, j);
      if (cross > limit + 1e-12 * std::max(1.0, limit)) {
        throw ConstraintViolation("||x_" + std::to_string(i + 1) + " - x_" +
                                  std::to_string(j + 1) + "|| = " +
                                  std::to_string(cross) + " exceeds " +
                                  std::to_string(limit) + " by " +
                                  std::to_string(cross - limit));
      }
    }
  }
  Instance inst;
  inst.n = n;
  inst.d = d;
  inst.x = std::move(x);
  inst.y = std::move(y);
  inst.table = std::move(declared);
  fill_true_mean(inst);
  return inst;
}

TrialResult run_trial(const Instance& instance, const ChainPlan& plan,
                      const CodecParams& params, std::uint64_t master_seed,
                      std::int64_t trial_id, CombinerMode mode) {
  const int n = instance.n;
  if (params.n != n || params.d != instance.d ||
      static_cast<int>(plan.chains.size()) != n ||
      static_cast<int>(plan.decode_order.size()) != n) {
    throw DimensionError("plan/params inconsistent with the instance");
  }

  std::vector<std::vector<double>> estimates(n);
  std::vector<char> decoded(n, 0);

  for (const int client : plan.decode_order) {
    const Chain& chain = plan.chains[client];
    const Rotation rot =
        sample_rotation(instance.d, master_seed, rotation_label(trial_id, client));
    const std::vector<int> coords = select_coords(
        params.dim, params.sample_count, master_seed, coords_label(trial_id, client));
    RandomStream coins(derive_seed(master_seed, coins_label(trial_id, client)));
    const ChainWeights weights = make_chain_weights(chain, instance.d, n, params.k);

    const Message msg =
        encode_client(instance.x[client], weights, params, rot, coords, coins);

    const std::vector<double>* h = &instance.y[client];
    if (chain.nodes.size() > 1) {
      const int pred = chain.nodes[chain.nodes.size() - 2];
      if (!decoded[pred]) {
        throw OrderViolation("chain for client " + std::to_string(client + 1) +
                             " needs client " + std::to_string(pred + 1) +
                             " which has not been decoded yet");
      }
      h = &estimates[pred];
    }
    estimates[client] = decode_client(msg, *h, instance.y[client], weights, params,
                                      rot, coords, mode);
    decoded[client] = 1;
  }

  TrialResult result;
  result.estimate.assign(instance.d, 0.0);
  result.per_client_sq_errors.resize(n);
  for (int i = 0; i < n; ++i) {
    double err = 0.0;
    for (int c = 0; c < instance.d; ++c) {
      result.estimate[c] += estimates[i][c];
      const double diff = estimates[i][c] - instance.x[i][c];
      err += diff * diff;
    }
    result.per_client_sq_errors[i] = err;
  }
  for (double& c : result.estimate) c /= n;
  double sq = 0.0;
  for (int c = 0; c < instance.d; ++c) {
    const double diff = result.estimate[c] - instance.true_mean[c];
    sq += diff * diff;
  }
  result.sq_error = sq;
  result.bits_sent =
      static_cast<std::int64_t>(n) * params.sample_count * params.log_k;
  return result;
}

int resolve_thread_count(int requested, std::int64_t trials) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("DMESIM_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (threads < 1) threads = 1;
  if (trials < threads) threads = static_cast<int>(trials);
  return threads;
}

MseReport monte_carlo(const Instance& instance, const ChainPlan& plan,
                      const CodecParams& params, std::int64_t trials,
                      std::uint64_t master_seed, CombinerMode mode, int threads,
                      const DeltaTable* bound_table) {
  if (trials < 1) {
    throw ConditionViolated("monte_carlo requires trials >= 1");
  }
  if (const auto violation = validate_chains(plan.chains, plan.decode_order)) {
    throw OrderViolation(*violation);
  }

  std::vector<double> sq_errors(trials, 0.0);
  std::vector<std::vector<double>> per_client(trials);
  std::vector<std::vector<double>> estimates(trials);

  const int worker_count = resolve_thread_count(threads, trials);
  auto work = [&](std::int64_t t) {
    TrialResult tr = run_trial(instance, plan, params, master_seed, t, mode);
    sq_errors[t] = tr.sq_error;
    per_client[t] = std::move(tr.per_client_sq_errors);
    estimates[t] = std::move(tr.estimate);
  };

  if (worker_count <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) work(t);
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::int64_t t = next.fetch_add(1);
          if (t >= trials) return;
          try {
            work(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  // Reductions run in trial order so results do not depend on thread count.
  MseReport report;
  report.trials = trials;
  double sum = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) sum += sq_errors[t];
  report.mse_mean = sum / trials;
  double var = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const double diff = sq_errors[t] - report.mse_mean;
    var += diff * diff;
  }
  report.mse_stderr =
      (trials > 1) ? std::sqrt(var / (trials - 1)) / std::sqrt(double(trials)) : 0.0;

  report.per_client_mse.assign(instance.n, 0.0);
  for (std::int64_t t = 0; t < trials; ++t) {
    for (int i = 0; i < instance.n; ++i) report.per_client_mse[i] += per_client[t][i];
  }
  for (double& v : report.per_client_mse) v /= trials;

  report.mean_estimate.assign(instance.d, 0.0);
  for (std::int64_t t = 0; t < trials; ++t) {
    for (int c = 0; c < instance.d; ++c) report.mean_estimate[c] += estimates[t][c];
  }
  for (double& v : report.mean_estimate) v /= trials;

  report.bits_sent_per_trial =
      static_cast<std::int64_t>(instance.n) * params.sample_count * params.log_k;
  report.bounds = proposed_bound(plan.chains,
                                 bound_table ? *bound_table : instance.table, params);
  return report;
}

}  // namespace dme

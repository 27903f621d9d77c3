#include "dme/harness.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "dme/errors.hpp"
#include "dme/rng.hpp"

namespace dme {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an unsigned integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key, "expected true/false, got '" + value + "'");
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::wz: return "wz";
    case Strategy::alg1: return "alg1";
    case Strategy::alg2: return "alg2";
    case Strategy::file: return "file";
  }
  return "wz";
}

Strategy parse_strategy(const std::string& value) {
  if (value == "wz") return Strategy::wz;
  if (value == "alg1") return Strategy::alg1;
  if (value == "alg2") return Strategy::alg2;
  if (value == "file") return Strategy::file;
  throw ConfigError("strategy", "expected wz|alg1|alg2|file, got '" + value + "'");
}

std::string combiner_name(CombinerMode m) {
  return m == CombinerMode::scaled ? "scaled" : "plain";
}

CombinerMode parse_combiner(const std::string& value) {
  if (value == "scaled") return CombinerMode::scaled;
  if (value == "plain") return CombinerMode::plain;
  throw ConfigError("combiner", "expected scaled|plain, got '" + value + "'");
}

std::string region_mode_name(RegionMode m) {
  return m == RegionMode::eq15 ? "eq15" : "strict-eq17";
}

RegionMode parse_region_mode(const std::string& value) {
  if (value == "eq15") return RegionMode::eq15;
  if (value == "strict-eq17") return RegionMode::strict_eq17;
  throw ConfigError("region_mode", "expected eq15|strict-eq17, got '" + value + "'");
}

std::string instance_mode_name(InstanceMode m) {
  return m == InstanceMode::derive ? "derive" : "star";
}

InstanceMode parse_instance_mode(const std::string& value) {
  if (value == "derive") return InstanceMode::derive;
  if (value == "star") return InstanceMode::star;
  throw ConfigError("instance_mode", "expected derive|star, got '" + value + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n", "need at least 2 clients");
  if (d < 1) throw ConfigError("d", "need d >= 1");
  if (r < 1) throw ConfigError("r", "need r >= 1");
  if (trials < 1) throw ConfigError("trials", "need trials >= 1");
  if (instances < 1) throw ConfigError("instances", "need instances >= 1");
  if (loose_factor < 1.0) throw ConfigError("loose_factor", "must be >= 1");
  const int floor = 2 * resolution_bits(n);
  if (r < floor) {
    throw ConfigError("r", "bit budget below the floor " + std::to_string(floor) +
                               " required for n = " + std::to_string(n));
  }
  if (r > d && !allow_out_of_regime) {
    throw ConfigError("r", "r > d is outside the bound regime; set "
                           "allow_out_of_regime = true to proceed");
  }
  if (strategy == Strategy::file) {
    if (chains_file.empty()) {
      throw ConfigError("chains_file", "required when strategy = file");
    }
    std::ifstream in(chains_file);
    if (!in) throw ConfigError("chains_file", "cannot open '" + chains_file + "'");
  }
  if (instance.head < 0 || instance.head >= n) {
    throw ConfigError("head", "star head out of range 1.." + std::to_string(n));
  }
  if (instance.spread < 0 || instance.noise < 0 || instance.delta_head < 0 ||
      instance.delta_spoke < 0 || instance.delta_side < 0) {
    throw ConfigError("instance", "distances must be nonnegative");
  }
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no), "empty key");
    }
    if (kv.count(key)) {
      throw ConfigError(key, "duplicate key");
    }
    kv[key] = value;
  }
  return kv;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : parse_kv(text)) {
    if (key == "n") cfg.n = parse_int(key, value);
    else if (key == "d") cfg.d = parse_int(key, value);
    else if (key == "r") cfg.r = parse_int(key, value);
    else if (key == "trials") cfg.trials = parse_i64(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "instances") cfg.instances = parse_int(key, value);
    else if (key == "strategy") cfg.strategy = parse_strategy(value);
    else if (key == "combiner") cfg.combiner = parse_combiner(value);
    else if (key == "region_mode") cfg.region_mode = parse_region_mode(value);
    else if (key == "out") cfg.out = value;
    else if (key == "chains_file") cfg.chains_file = value;
    else if (key == "loose_factor") cfg.loose_factor = parse_double(key, value);
    else if (key == "allow_out_of_regime") cfg.allow_out_of_regime = parse_bool(key, value);
    else if (key == "instance_mode") cfg.instance.mode = parse_instance_mode(value);
    else if (key == "center") cfg.instance.center = parse_double(key, value);
    else if (key == "spread") cfg.instance.spread = parse_double(key, value);
    else if (key == "noise") cfg.instance.noise = parse_double(key, value);
    else if (key == "head") cfg.instance.head = parse_int(key, value) - 1;
    else if (key == "delta_head") cfg.instance.delta_head = parse_double(key, value);
    else if (key == "delta_spoke") cfg.instance.delta_spoke = parse_double(key, value);
    else if (key == "delta_side") cfg.instance.delta_side = parse_double(key, value);
    else throw ConfigError(key, "unknown config key");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config", "cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n = " << c.n << "\n";
  out << "d = " << c.d << "\n";
  out << "r = " << c.r << "\n";
  out << "trials = " << c.trials << "\n";
  out << "seed = " << c.seed << "\n";
  out << "instances = " << c.instances << "\n";
  out << "strategy = " << strategy_name(c.strategy) << "\n";
  out << "combiner = " << combiner_name(c.combiner) << "\n";
  out << "region_mode = " << region_mode_name(c.region_mode) << "\n";
  if (!c.out.empty()) out << "out = " << c.out << "\n";
  if (!c.chains_file.empty()) out << "chains_file = " << c.chains_file << "\n";
  out << "loose_factor = " << format_sig(c.loose_factor) << "\n";
  out << "allow_out_of_regime = " << (c.allow_out_of_regime ? "true" : "false") << "\n";
  out << "instance_mode = " << instance_mode_name(c.instance.mode) << "\n";
  out << "center = " << format_sig(c.instance.center) << "\n";
  out << "spread = " << format_sig(c.instance.spread) << "\n";
  out << "noise = " << format_sig(c.instance.noise) << "\n";
  out << "head = " << c.instance.head + 1 << "\n";
  out << "delta_head = " << format_sig(c.instance.delta_head) << "\n";
  out << "delta_spoke = " << format_sig(c.instance.delta_spoke) << "\n";
  out << "delta_side = " << format_sig(c.instance.delta_side) << "\n";
  return out.str();
}

std::string format_sig(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

ChainPlan plan_for_strategy(const ExperimentConfig& config, const DeltaTable& table) {
  switch (config.strategy) {
    case Strategy::wz:
      return wz_chains(table);
    case Strategy::alg1:
      return algorithm1(table, config.d);
    case Strategy::alg2:
      return algorithm2(table, config.region_mode);
    case Strategy::file: {
      std::ifstream in(config.chains_file);
      if (!in) {
        throw ConfigError("chains_file", "cannot open '" + config.chains_file + "'");
      }
      ChainPlan plan;
      plan.chains.resize(table.n());
      std::vector<bool> seen(table.n(), false);
      std::string line;
      while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        Chain chain = chain_from_string(line, table);
        if (chain.client < 0 || chain.client >= table.n()) {
          throw ConfigError("chains_file", "client index out of range in '" + line + "'");
        }
        if (seen[chain.client]) {
          throw ConfigError("chains_file", "duplicate chain for client " +
                                               std::to_string(chain.client + 1));
        }
        seen[chain.client] = true;
        plan.decode_order.push_back(chain.client);  // file order = decode order
        plan.chains[chain.client] = std::move(chain);
      }
      plan.weights.assign(table.n(), 0.0);
      for (int i = 0; i < table.n(); ++i) {
        if (!seen[i]) {
          throw ConfigError("chains_file",
                            "no chain for client " + std::to_string(i + 1));
        }
        for (double hop : plan.chains[i].hop_deltas) plan.weights[i] += hop;
      }
      if (const auto violation = validate_chains(plan.chains, plan.decode_order)) {
        throw ConfigError("chains_file", *violation);
      }
      return plan;
    }
  }
  throw ConfigError("strategy", "unhandled strategy");
}

namespace {

std::string csv_row(const std::string& estimator, const ExperimentConfig& cfg,
                    const CodecParams& params, const MseReport& report, double bound,
                    std::uint64_t row_seed) {
  std::ostringstream out;
  out << estimator << ',' << cfg.n << ',' << cfg.d << ',' << cfg.r << ',' << params.k
      << ',' << report.trials << ',' << format_sig(report.mse_mean) << ','
      << format_sig(report.mse_stderr) << ',' << format_sig(bound) << ','
      << format_sig(bound > 0.0 ? report.mse_mean / bound : 0.0) << ','
      << format_sig(report.bounds.sum_d) << ',' << format_sig(report.bounds.sum_delta_sq)
      << ',' << (report.bounds.improvement_region ? 1 : 0) << ',' << row_seed << '\n';
  return out.str();
}

}  // namespace

std::string run_simulate(const ExperimentConfig& config) {
  config.validate();
  const CodecParams params = derive_codec_params(config.n, config.d, config.r);
  std::string csv = std::string(kSimulateCsvHeader) + "\n";

  for (int idx = 0; idx < config.instances; ++idx) {
    const std::uint64_t iseed = derive_seed(config.seed, instance_label(idx));
    const Instance inst = generate_instance(config.n, config.d, config.instance, iseed);
    const DeltaTable planning =
        (config.loose_factor == 1.0) ? inst.table
                                     : scale_table(inst.table, config.loose_factor);

    const ChainPlan wz = wz_chains(planning);
    const MseReport wz_report = monte_carlo(inst, wz, params, config.trials, iseed,
                                            config.combiner, 0, &planning);
    csv += csv_row("wz", config, params, wz_report, wz_report.bounds.baseline, iseed);

    if (config.strategy != Strategy::wz) {
      const ChainPlan plan = plan_for_strategy(config, planning);
      const MseReport report = monte_carlo(inst, plan, params, config.trials, iseed,
                                           config.combiner, 0, &planning);
      csv += csv_row("pro_" + strategy_name(config.strategy), config, params, report,
                     report.bounds.proposed, iseed);
    }
  }
  return csv;
}

std::string run_bounds(const ExperimentConfig& config, bool kv) {
  config.validate();
  const CodecParams params = derive_codec_params(config.n, config.d, config.r);
  std::ostringstream out;
  if (!kv) {
    out << "instance,estimator,baseline,proposed,B,sum_D,sum_delta_sq,ratio,"
           "improvement_region,in_regime\n";
  }
  for (int idx = 0; idx < config.instances; ++idx) {
    const std::uint64_t iseed = derive_seed(config.seed, instance_label(idx));
    const Instance inst = generate_instance(config.n, config.d, config.instance, iseed);
    const DeltaTable planning =
        (config.loose_factor == 1.0) ? inst.table
                                     : scale_table(inst.table, config.loose_factor);
    const ChainPlan plan = plan_for_strategy(config, planning);
    const BoundReport report = proposed_bound(plan.chains, planning, params);
    const std::string tag = std::to_string(idx);
    if (kv) {
      out << "baseline_" << tag << " = " << format_sig(report.baseline) << "\n";
      out << "proposed_" << tag << " = " << format_sig(report.proposed) << "\n";
      out << "b_used_" << tag << " = " << format_sig(report.b_used) << "\n";
      out << "sum_d_" << tag << " = " << format_sig(report.sum_d) << "\n";
      out << "sum_delta_sq_" << tag << " = " << format_sig(report.sum_delta_sq) << "\n";
      out << "ratio_" << tag << " = " << format_sig(report.ratio) << "\n";
      out << "improvement_region_" << tag << " = "
          << (report.improvement_region ? "true" : "false") << "\n";
      out << "in_regime_" << tag << " = " << (report.in_regime ? "true" : "false")
          << "\n";
    } else {
      out << idx << ',' << strategy_name(config.strategy) << ','
          << format_sig(report.baseline) << ',' << format_sig(report.proposed) << ','
          << format_sig(report.b_used) << ',' << format_sig(report.sum_d) << ','
          << format_sig(report.sum_delta_sq) << ',' << format_sig(report.ratio) << ','
          << (report.improvement_region ? 1 : 0) << ',' << (report.in_regime ? 1 : 0)
          << '\n';
    }
  }
  return out.str();
}

std::string run_chains(const ExperimentConfig& config, bool validate) {
  config.validate();
  std::ostringstream out;
  for (int idx = 0; idx < config.instances; ++idx) {
    const std::uint64_t iseed = derive_seed(config.seed, instance_label(idx));
    const Instance inst = generate_instance(config.n, config.d, config.instance, iseed);
    const DeltaTable planning =
        (config.loose_factor == 1.0) ? inst.table
                                     : scale_table(inst.table, config.loose_factor);
    const ChainPlan plan = plan_for_strategy(config, planning);
    if (config.instances > 1) out << "# instance " << idx << "\n";
    for (const int client : plan.decode_order) {
      const Chain& chain = plan.chains[client];
      double w = 0.0;
      for (double hop : chain.hop_deltas) {
        w += delta_prime(hop, config.d, config.n);
      }
      out << chain_to_string(chain) << "  w=" << format_sig(w)
          << " D=" << format_sig(d_value(chain, config.n)) << "\n";
    }
    if (validate) {
      const auto violation = validate_chains(plan.chains, plan.decode_order);
      out << (violation ? ("violation: " + *violation) : std::string("ok")) << "\n";
    }
  }
  return out.str();
}

std::string run_region(int n, double delta_t, double delta_ti, double delta_i_lo,
                       double delta_i_hi, int steps) {
  if (steps < 1) {
    throw ConfigError("steps", "need at least one sweep step");
  }
  if (delta_i_hi < delta_i_lo) {
    throw ConfigError("delta_i", "sweep range is reversed");
  }
  const double hops[2] = {delta_t, delta_ti};
  const double chain_const = d_value(hops, n);
  std::ostringstream out;
  out << "n,delta_t,delta_ti,delta_i,d_value,in_r2_eq15,in_r2_strict_eq17\n";
  for (int s = 0; s < steps; ++s) {
    const double delta_i =
        (steps == 1) ? delta_i_lo
                     : delta_i_lo + (delta_i_hi - delta_i_lo) * s / (steps - 1);
    const bool eq15 = region2_check(delta_t, delta_ti, delta_i, n, RegionMode::eq15);
    const bool strict =
        region2_check(delta_t, delta_ti, delta_i, n, RegionMode::strict_eq17);
    out << n << ',' << format_sig(delta_t) << ',' << format_sig(delta_ti) << ','
        << format_sig(delta_i) << ',' << format_sig(chain_const) << ',' << (eq15 ? 1 : 0)
        << ',' << (strict ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace dme

#include "dme/chains.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dme/errors.hpp"
#include "dme/rotation.hpp"

namespace dme {

namespace {

constexpr double kEuler = 2.718281828459045235360287471352662498;

}  // namespace

DeltaTable::DeltaTable(int n) : n_(n), side_(n, 0.0), cross_(n * (n - 1) / 2, 0.0) {
  if (n < 1) {
    throw DimensionError("DeltaTable requires n >= 1");
  }
}

int DeltaTable::index(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw DimensionError("invalid pair (" + std::to_string(i + 1) + ", " +
                         std::to_string(j + 1) + ") for n = " + std::to_string(n_));
  }
  if (i > j) std::swap(i, j);
  // Row-major packed upper triangle.
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double DeltaTable::side(int i) const {
  if (i < 0 || i >= n_) {
    throw DimensionError("client index out of range");
  }
  return side_[i];
}

void DeltaTable::set_side(int i, double value) {
  if (i < 0 || i >= n_) {
    throw DimensionError("client index out of range");
  }
  side_[i] = value;
}

double DeltaTable::cross(int i, int j) const { return cross_[index(i, j)]; }

void DeltaTable::set_cross(int i, int j, double value) {
  cross_[index(i, j)] = value;
}

DeltaTable scale_table(const DeltaTable& table, double factor) {
  DeltaTable out(table.n());
  for (int i = 0; i < table.n(); ++i) {
    out.set_side(i, factor * table.side(i));
    for (int j = i + 1; j < table.n(); ++j) {
      out.set_cross(i, j, factor * table.cross(i, j));
    }
  }
  return out;
}

double delta_prime(double delta, int d, int n) {
  if (n < 2) {
    throw ConditionViolated("delta_prime requires n >= 2");
  }
  if (d < 1) {
    throw DimensionError("delta_prime requires d >= 1");
  }
  const int dim = next_pow2(d);
  const double half_log_n = 0.5 * std::log(static_cast<double>(n));
  return std::sqrt(((6.0 * delta * delta) / dim) * half_log_n);
}

double c_t(int t, int n) {
  if (t < 1 || n < 2) {
    throw ConditionViolated("c_t requires t >= 1 and n >= 2");
  }
  const double first = 576.0 * t * t / kEuler;
  const double second = 3.0 * n + 36.0 / std::exp(2.0 / 3.0);
  return std::max(first, second);
}

double d_value(std::span<const double> hop_deltas, int n) {
  if (hop_deltas.empty()) {
    throw DimensionError("d_value requires at least one hop");
  }
  double prefix_sq = hop_deltas[0] * hop_deltas[0];
  double d = prefix_sq;
  for (std::size_t t = 2; t <= hop_deltas.size(); ++t) {
    const double last_sq = hop_deltas[t - 1] * hop_deltas[t - 1];
    prefix_sq += last_sq;
    const double direct = static_cast<double>(t) * prefix_sq;
    const double tail = c_t(static_cast<int>(t), n) / 154.0 * (prefix_sq + last_sq) +
                        3.0 * n / 154.0 * d;
    d = std::max(direct, tail) + 3.0 * d;
  }
  return d;
}

double d_value(const Chain& chain, int n) { return d_value(chain.hop_deltas, n); }

ChainPlan wz_chains(const DeltaTable& table) {
  ChainPlan plan;
  const int n = table.n();
  plan.chains.resize(n);
  plan.weights.resize(n);
  plan.decode_order.resize(n);
  for (int i = 0; i < n; ++i) {
    plan.chains[i] = Chain{i, i, {i}, {table.side(i)}};
    plan.weights[i] = table.side(i);
    plan.decode_order[i] = i;
  }
  return plan;
}

ChainPlan algorithm1_with_weights(const DeltaTable& weight_table,
                                  const DeltaTable& hop_table) {
  const int n = weight_table.n();
  if (hop_table.n() != n) {
    throw DimensionError("weight and hop tables disagree on n");
  }
  ChainPlan plan;
  plan.chains.resize(n);
  plan.weights.resize(n);
  plan.decode_order.resize(n);
  std::iota(plan.decode_order.begin(), plan.decode_order.end(), 0);

  plan.chains[0] = Chain{0, 0, {0}, {hop_table.side(0)}};
  plan.weights[0] = weight_table.side(0);

  for (int i = 1; i < n; ++i) {
    // Candidate j < i extends chain j; candidate j == i is the singleton.
    int best = i;
    double best_weight = weight_table.side(i);
    for (int j = 0; j < i; ++j) {
      const double w = plan.weights[j] + weight_table.cross(j, i);
      if (w < best_weight) {
        best_weight = w;
        best = j;
      }
    }
    if (best == i) {
      plan.chains[i] = Chain{i, i, {i}, {hop_table.side(i)}};
    } else {
      Chain extended = plan.chains[best];
      extended.client = i;
      extended.nodes.push_back(i);
      extended.hop_deltas.push_back(hop_table.cross(best, i));
      plan.chains[i] = std::move(extended);
    }
    plan.weights[i] = best_weight;
  }
  return plan;
}

ChainPlan algorithm1(const DeltaTable& table, int d) {
  const int n = table.n();
  DeltaTable prime(n);
  for (int i = 0; i < n; ++i) {
    prime.set_side(i, delta_prime(table.side(i), d, n));
    for (int j = i + 1; j < n; ++j) {
      prime.set_cross(i, j, delta_prime(table.cross(i, j), d, n));
    }
  }
  return algorithm1_with_weights(prime, table);
}

bool region2_check(double delta_t, double delta_ti, double delta_i, int n,
                   RegionMode mode) {
  if (delta_t < 0.0 || delta_ti < 0.0 || delta_i < 0.0) {
    throw ConditionViolated("region check requires nonnegative distances");
  }
  const double dt_sq = delta_t * delta_t;
  const double dti_sq = delta_ti * delta_ti;
  const double di_sq = delta_i * delta_i;
  if (mode == RegionMode::eq15) {
    const double hops[2] = {delta_t, delta_ti};
    return d_value(hops, n) < di_sq;
  }
  const double direct = 2.0 * (dt_sq + dti_sq) + 3.0 * dt_sq;
  const double tail =
      c_t(2, n) * (dt_sq + 2.0 * dti_sq) + 3.0 * n * dt_sq / 154.0 + 3.0 * dt_sq;
  return std::max(direct, tail) < di_sq;
}

ChainPlan algorithm2(const DeltaTable& table, RegionMode mode) {
  const int n = table.n();
  std::vector<int> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::stable_sort(remaining.begin(), remaining.end(), [&](int a, int b) {
    return table.side(a) < table.side(b);
  });

  ChainPlan plan;
  plan.chains.resize(n);
  plan.weights.resize(n);
  plan.decode_order.reserve(n);

  while (!remaining.empty()) {
    const int head = remaining.front();
    plan.chains[head] = Chain{head, head, {head}, {table.side(head)}};
    plan.decode_order.push_back(head);

    std::vector<int> next_round;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      const int client = remaining[i];
      if (region2_check(table.side(head), table.cross(head, client),
                        table.side(client), n, mode)) {
        plan.chains[client] =
            Chain{client, head, {head, client},
                  {table.side(head), table.cross(head, client)}};
        plan.decode_order.push_back(client);
      } else {
        next_round.push_back(client);
      }
    }
    remaining = std::move(next_round);
  }

  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    for (double hop : plan.chains[i].hop_deltas) w += hop;
    plan.weights[i] = w;  // raw-distance accumulation; informational only
  }
  return plan;
}

std::optional<std::string> validate_chains(const std::vector<Chain>& chains,
                                           const std::vector<int>& decode_order) {
  if (chains.empty()) {
    return "chain list is empty";
  }
  const int n = static_cast<int>(chains.size());
  if (static_cast<int>(decode_order.size()) != n) {
    return "decode order covers " + std::to_string(decode_order.size()) +
           " clients, expected " + std::to_string(n);
  }
  std::vector<int> position(n, -1);
  for (int pos = 0; pos < n; ++pos) {
    const int c = decode_order[pos];
    if (c < 0 || c >= n) {
      return "decode order mentions unknown client " + std::to_string(c + 1);
    }
    if (position[c] != -1) {
      return "client " + std::to_string(c + 1) + " appears twice in the decode order";
    }
    position[c] = pos;
  }

  for (int i = 0; i < n; ++i) {
    const Chain& chain = chains[i];
    if (chain.client != i) {
      return "chain slot " + std::to_string(i + 1) + " holds a chain for client " +
             std::to_string(chain.client + 1);
    }
    if (chain.nodes.empty()) {
      return "chain for client " + std::to_string(i + 1) + " has no nodes";
    }
    if (chain.nodes.back() != chain.client) {
      return "chain for client " + std::to_string(i + 1) + " ends at client " +
             std::to_string(chain.nodes.back() + 1);
    }
    if (chain.root != chain.nodes.front()) {
      return "chain for client " + std::to_string(i + 1) + " has root " +
             std::to_string(chain.root + 1) + " but first node " +
             std::to_string(chain.nodes.front() + 1);
    }
    if (chain.hop_deltas.size() != chain.nodes.size()) {
      return "chain for client " + std::to_string(i + 1) + " has " +
             std::to_string(chain.hop_deltas.size()) + " hop distances for " +
             std::to_string(chain.nodes.size()) + " nodes";
    }
    for (double hop : chain.hop_deltas) {
      if (hop < 0.0) {
        return "chain for client " + std::to_string(i + 1) +
               " carries a negative hop distance";
      }
    }
    for (std::size_t t = 0; t + 1 < chain.nodes.size(); ++t) {
      const int node = chain.nodes[t];
      if (node < 0 || node >= n) {
        return "chain for client " + std::to_string(i + 1) +
               " references unknown client " + std::to_string(node + 1);
      }
      if (position[node] >= position[i]) {
        return "chain for client " + std::to_string(i + 1) + ": interior node " +
               std::to_string(node + 1) + " does not decode earlier";
      }
    }
  }
  return std::nullopt;
}

std::string chain_to_string(const Chain& chain) {
  std::ostringstream out;
  out << chain.client + 1 << ": y_" << chain.root + 1;
  for (int node : chain.nodes) {
    out << " -> x_" << node + 1;
  }
  return out.str();
}

Chain chain_from_string(const std::string& text, const DeltaTable& table) {
  std::istringstream in(text);
  Chain chain;
  int client_1b = 0;
  char colon = 0;
  if (!(in >> client_1b >> colon) || colon != ':') {
    throw ConstraintViolation("cannot parse chain line: '" + text + "'");
  }
  std::string token;
  if (!(in >> token) || token.rfind("y_", 0) != 0) {
    throw ConstraintViolation("chain line must start with y_<root>: '" + text + "'");
  }
  chain.root = std::stoi(token.substr(2)) - 1;
  std::string arrow;
  while (in >> arrow) {
    if (arrow != "->") {
      throw ConstraintViolation("expected '->' in chain line: '" + text + "'");
    }
    if (!(in >> token) || token.rfind("x_", 0) != 0) {
      throw ConstraintViolation("expected x_<client> in chain line: '" + text + "'");
    }
    chain.nodes.push_back(std::stoi(token.substr(2)) - 1);
  }
  if (chain.nodes.empty()) {
    throw ConstraintViolation("chain line has no x nodes: '" + text + "'");
  }
  chain.client = client_1b - 1;
  if (chain.nodes.back() != chain.client) {
    throw ConstraintViolation("chain for client " + std::to_string(client_1b) +
                              " must end at x_" + std::to_string(client_1b));
  }
  if (chain.nodes.front() != chain.root) {
    throw ConstraintViolation("chain root must match the first x node: '" + text + "'");
  }
  chain.hop_deltas.push_back(table.side(chain.root));
  for (std::size_t t = 0; t + 1 < chain.nodes.size(); ++t) {
    chain.hop_deltas.push_back(table.cross(chain.nodes[t], chain.nodes[t + 1]));
  }
  return chain;
}

}  // namespace dme

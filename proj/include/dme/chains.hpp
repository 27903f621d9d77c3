#pragma once

// Decode-dependency chains and the two greedy planners. A chain
// y_root -> x_root -> ... -> x_client tells the server which earlier estimate
// to use as side information when decoding a client. The effective squared
// distance of a chain (d_value) replaces the client's own squared distance in
// the error bound, and the improvement region is where that trade pays off.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dme {

// Client indices are 0-based in code; all text I/O is 1-based.
struct Chain {
  int client = 0;                  // the client this chain decodes
  int root = 0;                    // whose y heads the chain, == nodes.front()
  std::vector<int> nodes;          // i_1 .. i_l with nodes.back() == client
  std::vector<double> hop_deltas;  // raw distances: Delta_{i1}, then Delta_{i_s i_{s+1}}
};

// Per-client distances Delta_i and symmetric pairwise distances Delta_ij.
class DeltaTable {
 public:
  DeltaTable() = default;
  explicit DeltaTable(int n);

  int n() const { return n_; }
  double side(int i) const;
  void set_side(int i, double value);
  double cross(int i, int j) const;  // symmetric; i != j
  void set_cross(int i, int j, double value);

  const std::vector<double>& sides() const { return side_; }

 private:
  int index(int i, int j) const;

  int n_ = 0;
  std::vector<double> side_;
  std::vector<double> cross_;  // packed upper triangle
};

DeltaTable scale_table(const DeltaTable& table, double factor);

// Per-hop weight parameter: sqrt(6 * (delta^2 / dim) * ln(sqrt(n))) on the
// padded dimension actually used by the rotation.
double delta_prime(double delta, int d, int n);

// max(576 t^2 / e, 3n + 36 / e^(2/3)).
double c_t(int t, int n);

// Effective squared-distance constant of a chain, computed iteratively over
// prefixes. Length 1 gives hop^2; longer chains use
//   D_t = max{ t*A_t, c_t(n)/154 * (A_t + last^2) + 3n/154 * D_{t-1} } + 3 D_{t-1}
// with A_t the sum of squared hops up to t.
double d_value(std::span<const double> hop_deltas, int n);
double d_value(const Chain& chain, int n);

struct ChainPlan {
  std::vector<Chain> chains;      // indexed by client
  std::vector<double> weights;    // accumulated weight-parameter per client
  std::vector<int> decode_order;  // server-side decode sequence
};

// One singleton chain y_i -> x_i per client, identity decode order.
ChainPlan wz_chains(const DeltaTable& table);

// Greedy minimum-weight chains. Each client i picks the cheapest of: its own
// singleton (weight table entry i) or any earlier client's chain extended by
// one hop (that chain's weight plus the pairwise entry). Ties go to the
// smallest candidate index. weight_table drives the argmin; hop values are
// taken from hop_table so chains can carry raw distances.
ChainPlan algorithm1_with_weights(const DeltaTable& weight_table,
                                  const DeltaTable& hop_table);

// algorithm1_with_weights on the delta_prime transform of table.
ChainPlan algorithm1(const DeltaTable& table, int d);

enum class RegionMode {
  eq15,         // d_value of the length-2 chain < delta_i^2
  strict_eq17,  // literal region formula without the /154 on c_2(n)
};

bool region2_check(double delta_t, double delta_ti, double delta_i, int n,
                   RegionMode mode = RegionMode::eq15);

// Length-<=2 chains: repeatedly pick the remaining client with the smallest
// Delta as head (stable ties by original index), give it a singleton chain,
// and chain every remaining client whose distances pass the region check
// through it. The decode order lists each round's head before its dependents.
ChainPlan algorithm2(const DeltaTable& table, RegionMode mode = RegionMode::eq15);

// Checks chain structure against the decode order; returns the first
// violation found, or nullopt when everything is consistent.
std::optional<std::string> validate_chains(const std::vector<Chain>& chains,
                                           const std::vector<int>& decode_order);

// Text form "3: y_1 -> x_1 -> x_3" (1-based indices).
std::string chain_to_string(const Chain& chain);
Chain chain_from_string(const std::string& text, const DeltaTable& table);

}  // namespace dme

#pragma once

// Closed-form error bounds: the baseline bound driven by each client's own
// side-information distance, the chained bound where the effective chain
// constant replaces it, and the ratio between the two in the improvement
// region. All "log k" terms are base 2 (bits); "ln" is natural.

#include <span>
#include <utility>
#include <vector>

#include "dme/chains.hpp"
#include "dme/codec.hpp"

namespace dme {

struct BoundReport {
  double baseline = 0.0;      // per-client-distance bound
  double proposed = 0.0;      // chained bound
  double b_used = 0.0;        // second-term coefficient actually applied
  double sum_d = 0.0;         // sum of chain constants
  double sum_delta_sq = 0.0;  // sum of squared side distances
  double ratio = 0.0;         // proposed / baseline
  bool improvement_region = false;  // sum_d < sum_delta_sq
  bool in_regime = true;            // r <= d
};

// 79 * ceil(log2(2 + sqrt(12 ln n))) + 26.
int bound_factor(int n);

// bound_factor(n) * sum_i Delta_i^2 * d / (n^2 r). Values for r > d are
// still computed; callers flag the regime via BoundReport.in_regime.
double baseline_bound(std::span<const double> delta_s, int n, int d, int r);

// Per-client second-moment and squared-bias bounds from the chain constant:
// alpha = 24 D ln(sqrt n)/(mu (k-2)^2) + 154 D/(mu n) + delta_i^2/mu,
// beta  = 154 D / n.
std::pair<double, double> corollary_alpha_beta(double d_const, double delta_i,
                                               const CodecParams& params);

// Chained bound with the two-case coefficient: the full factor when the
// chains do not help in aggregate, log_k/8 when they do.
BoundReport proposed_bound(const std::vector<Chain>& chains, const DeltaTable& table,
                           const CodecParams& params);

// 1 - (log_k / (8 (79 log_k + 26))) * (1 - sum_d / sum_delta_sq); equals
// proposed/baseline inside the improvement region.
double remark1_ratio(double sum_d, double sum_delta_sq, int log_k);

}  // namespace dme

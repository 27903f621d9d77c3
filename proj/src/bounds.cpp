#include "dme/bounds.hpp"

#include <cmath>

#include "dme/errors.hpp"

namespace dme {

int bound_factor(int n) { return 79 * resolution_bits(n) + 26; }

double baseline_bound(std::span<const double> delta_s, int n, int d, int r) {
  if (static_cast<int>(delta_s.size()) != n) {
    throw DimensionError("delta_s length != n");
  }
  if (r < 1 || d < 1) {
    throw DimensionError("baseline bound requires positive d and r");
  }
  double sum_sq = 0.0;
  for (double delta : delta_s) sum_sq += delta * delta;
  const double scale = static_cast<double>(d) /
                       (static_cast<double>(n) * static_cast<double>(n) *
                        static_cast<double>(r));
  return bound_factor(n) * sum_sq * scale;
}

std::pair<double, double> corollary_alpha_beta(double d_const, double delta_i,
                                               const CodecParams& params) {
  if (d_const < 0.0) {
    throw ConditionViolated("chain constant must be >= 0");
  }
  const double half_log_n = 0.5 * std::log(static_cast<double>(params.n));
  const double km2 = static_cast<double>(params.k - 2);
  const double alpha = 24.0 * d_const * half_log_n / (params.mu * km2 * km2) +
                       154.0 * d_const / (params.mu * params.n) +
                       delta_i * delta_i / params.mu;
  const double beta = 154.0 * d_const / params.n;
  return {alpha, beta};
}

BoundReport proposed_bound(const std::vector<Chain>& chains, const DeltaTable& table,
                           const CodecParams& params) {
  if (static_cast<int>(chains.size()) != params.n || table.n() != params.n) {
    throw DimensionError("chains/table size != n");
  }
  BoundReport report;
  report.baseline = baseline_bound(table.sides(), params.n, params.d, params.r);
  report.in_regime = params.r <= params.d;

  double sum_d = 0.0;
  double sum_delta_sq = 0.0;
  double sum_diff = 0.0;
  for (int i = 0; i < params.n; ++i) {
    const double d_i = d_value(chains[i], params.n);
    const double delta_sq = table.side(i) * table.side(i);
    sum_d += d_i;
    sum_delta_sq += delta_sq;
    sum_diff += d_i - delta_sq;
  }
  report.sum_d = sum_d;
  report.sum_delta_sq = sum_delta_sq;
  report.improvement_region = sum_d < sum_delta_sq;

  const double factor = static_cast<double>(79 * params.log_k + 26);
  report.b_used = (sum_diff >= 0.0) ? factor : params.log_k / 8.0;
  const double scale = static_cast<double>(params.d) /
                       (static_cast<double>(params.n) * static_cast<double>(params.n) *
                        static_cast<double>(params.r));
  report.proposed = factor * sum_delta_sq * scale + report.b_used * sum_diff * scale;
  report.ratio = (report.baseline > 0.0) ? report.proposed / report.baseline
                                         : (report.proposed > 0.0 ? HUGE_VAL : 1.0);
  return report;
}

double remark1_ratio(double sum_d, double sum_delta_sq, int log_k) {
  if (!(sum_delta_sq > 0.0)) {
    throw ConditionViolated("ratio requires sum of squared distances > 0");
  }
  const double factor = static_cast<double>(79 * log_k + 26);
  return 1.0 - (log_k / (8.0 * factor)) * (1.0 - sum_d / sum_delta_sq);
}

}  // namespace dme

#include "dme/mq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dme/errors.hpp"

namespace dme {

namespace {

int nonneg_mod(long long v, int k) {
  const long long m = v % k;
  return static_cast<int>(m < 0 ? m + k : m);
}

}  // namespace

void MqParams::validate() const {
  if (k < 4) {
    throw ConditionViolated("modulo quantizer requires k >= 4, got k = " +
                            std::to_string(k));
  }
  if (!(eps >= 0.0)) {
    throw ConditionViolated("lattice spacing eps must be >= 0");
  }
  if (!(delta_prime >= 0.0)) {
    throw ConditionViolated("distance bound delta_prime must be >= 0");
  }
  const double lhs = static_cast<double>(k) * eps;
  const double rhs = 2.0 * (eps + delta_prime);
  const double slack = 1e-9 * std::max(1.0, lhs);
  if (lhs + slack < rhs) {
    throw ConditionViolated("unbiasedness condition k*eps >= 2*(eps + delta_prime) "
                            "violated: " + std::to_string(lhs) + " < " +
                            std::to_string(rhs));
  }
}

MqParams mq_params_for_weight(int k, double total_weight) {
  MqParams p;
  p.k = k;
  p.delta_prime = total_weight;
  p.eps = 2.0 * total_weight / (k - 2);
  return p;
}

int mq_encode(double x, const MqParams& params, double coin) {
  if (params.eps == 0.0) {
    throw DegenerateLattice("cannot encode with eps = 0");
  }
  params.validate();
  const double t = x / params.eps;
  const double lo = std::floor(t);
  const double hi = std::ceil(t);
  // Clamp absorbs representation error in the division.
  const double p_up = std::clamp(t - lo, 0.0, 1.0);
  const double pick = (coin < p_up) ? hi : lo;
  return nonneg_mod(static_cast<long long>(pick), params.k);
}

double mq_decode(int symbol, double h, const MqParams& params) {
  if (params.eps == 0.0) {
    throw DegenerateLattice("cannot decode with eps = 0");
  }
  params.validate();
  if (symbol < 0 || symbol >= params.k) {
    throw ConditionViolated("symbol " + std::to_string(symbol) +
                            " outside [0, " + std::to_string(params.k) + ")");
  }
  // Coset points (z*k + symbol)*eps are monotone in z, so the nearest one is
  // at floor or floor+1 of the fractional index.
  const double zf = (h / params.eps - symbol) / params.k;
  const double z0 = std::floor(zf);
  const double lower = (z0 * params.k + symbol) * params.eps;
  const double upper = lower + params.k * params.eps;
  // On a tie return the smaller point.
  return (std::abs(upper - h) < std::abs(lower - h)) ? upper : lower;
}

MqOracleResult mq_oracle(double x, double h, const MqParams& params) {
  if (params.eps == 0.0) {
    throw DegenerateLattice("cannot run the oracle with eps = 0");
  }
  params.validate();
  const double dist_slack = 1e-12 * std::max(1.0, params.delta_prime);
  if (std::abs(x - h) > params.delta_prime + dist_slack) {
    throw ConditionViolated("distance condition |x - h| <= delta_prime violated: " +
                            std::to_string(std::abs(x - h)) + " > " +
                            std::to_string(params.delta_prime));
  }

  const double t = x / params.eps;
  const double lo = std::floor(t);
  const double hi = std::ceil(t);
  const double p_up = std::clamp(t - lo, 0.0, 1.0);
  const double p_down = 1.0 - p_up;

  const int sym_up = nonneg_mod(static_cast<long long>(hi), params.k);
  const int sym_down = nonneg_mod(static_cast<long long>(lo), params.k);

  MqOracleResult result;
  result.expected_decode = 0.0;
  result.worst_abs_err = 0.0;
  if (p_up > 0.0) {
    const double d = mq_decode(sym_up, h, params);
    result.expected_decode += p_up * d;
    result.worst_abs_err = std::max(result.worst_abs_err, std::abs(d - x));
  }
  if (p_down > 0.0) {
    const double d = mq_decode(sym_down, h, params);
    result.expected_decode += p_down * d;
    result.worst_abs_err = std::max(result.worst_abs_err, std::abs(d - x));
  }
  return result;
}

}  // namespace dme

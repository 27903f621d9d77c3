#pragma once

// One-dimensional modulo quantizer: stochastic rounding to an eps-lattice,
// transmitting only the coset index (value mod k). The decoder resolves the
// coset ambiguity with a side-information point h, picking the coset element
// nearest to h.

namespace dme {

struct MqParams {
  int k = 4;                 // number of coset classes, >= 4
  double eps = 0.0;          // lattice spacing, >= 0
  double delta_prime = 0.0;  // bound on |input - side information|, >= 0

  // Enforces k >= 4, nonnegative eps/delta_prime and the unbiasedness
  // condition k*eps >= 2*(eps + delta_prime), with a 1e-9 relative slack so
  // parameters derived at exact equality survive rounding.
  void validate() const;
};

// Parameters at the equality point of the unbiasedness condition:
// eps = 2*total_weight/(k-2).
MqParams mq_params_for_weight(int k, double total_weight);

// Stochastic-rounding encoder. Rounds x/eps up with probability equal to the
// fractional part, down otherwise, and returns the nonnegative residue mod k.
// coin is a uniform draw in [0,1). Throws DegenerateLattice when eps == 0.
int mq_encode(double x, const MqParams& params, double coin);

// Returns the element of {(z*k + symbol)*eps : z integer} closest to h.
// Ties break toward the smaller value.
double mq_decode(int symbol, double h, const MqParams& params);

struct MqOracleResult {
  double expected_decode = 0.0;  // exact expectation over both coin branches
  double worst_abs_err = 0.0;    // max |decode - x| over branches with p > 0
};

// Exact two-branch enumeration of encode+decode. Preconditions
// |x - h| <= delta_prime and the unbiasedness condition must hold
// (ConditionViolated otherwise); under them expected_decode == x and
// worst_abs_err < eps.
MqOracleResult mq_oracle(double x, double h, const MqParams& params);

}  // namespace dme

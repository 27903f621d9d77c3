#include "dme/rotation.hpp"

#include <cmath>
#include <string>

#include "dme/errors.hpp"
#include "dme/rng.hpp"

namespace dme {

int next_pow2(int d) {
  int p = 1;
  while (p < d) p <<= 1;
  return p;
}

void fwht(std::span<double> v) {
  const std::size_t n = v.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = v[j];
        const double b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
}

Rotation sample_rotation(int d, std::uint64_t shared_seed, std::string_view label) {
  if (d < 1) {
    throw DimensionError("rotation dimension must be >= 1");
  }
  Rotation rot;
  rot.dim = next_pow2(d);
  rot.seed_tag = std::string(label);
  rot.signs.resize(rot.dim);
  RandomStream stream(derive_seed(shared_seed, label));
  for (double& s : rot.signs) {
    s = (stream.next_u64() & 1u) ? 1.0 : -1.0;
  }
  return rot;
}

std::vector<double> apply_rotation(const Rotation& rot, std::span<const double> v) {
  if (static_cast<int>(v.size()) > rot.dim) {
    throw DimensionError("input length " + std::to_string(v.size()) +
                         " exceeds rotation dimension " + std::to_string(rot.dim));
  }
  std::vector<double> out(rot.dim, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = rot.signs[i] * v[i];
  }
  fwht(out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rot.dim));
  for (double& x : out) x *= scale;
  return out;
}

std::vector<double> apply_inverse(const Rotation& rot, std::span<const double> w) {
  if (static_cast<int>(w.size()) != rot.dim) {
    throw DimensionError("inverse input length " + std::to_string(w.size()) +
                         " != rotation dimension " + std::to_string(rot.dim));
  }
  std::vector<double> out(w.begin(), w.end());
  fwht(out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rot.dim));
  for (int i = 0; i < rot.dim; ++i) {
    out[i] *= rot.signs[i] * scale;
  }
  return out;
}

}  // namespace dme

#pragma once

// Random orthogonal preprocessing: a shared-randomness sign flip followed by
// the Walsh-Hadamard transform, normalized so the map is an isometry. Inputs
// whose length is not a power of two are zero-padded.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dme {

struct Rotation {
  int dim = 0;                 // padded dimension, power of two
  std::vector<double> signs;   // dim entries in {+1, -1}
  std::string seed_tag;        // derivation label used to generate the signs
};

int next_pow2(int d);

// In-place unnormalized Walsh-Hadamard transform; v.size() must be a power
// of two. Applying it twice multiplies by v.size().
void fwht(std::span<double> v);

// Signs drawn deterministically from (shared_seed, label); dim is the
// smallest power of two >= d.
Rotation sample_rotation(int d, std::uint64_t shared_seed, std::string_view label);

// W * (signs . pad(v)) / sqrt(dim). v.size() <= dim; shorter inputs are
// zero-padded. Throws DimensionError when v is longer than dim.
std::vector<double> apply_rotation(const Rotation& rot, std::span<const double> v);

// Exact inverse: signs . (W * w) / sqrt(dim). w.size() must equal dim.
std::vector<double> apply_inverse(const Rotation& rot, std::span<const double> w);

}  // namespace dme

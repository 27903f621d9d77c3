#pragma once

// d-dimensional quantizers built on the scalar modulo quantizer and the
// Hadamard rotation: rotate, quantize a shared-randomly chosen coordinate
// subset under the bit budget, and combine the decoded corrections with the
// server's side information.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dme/chains.hpp"
#include "dme/mq.hpp"
#include "dme/rotation.hpp"
#include "dme/rng.hpp"

namespace dme {

struct CodecParams {
  int n = 0;             // client count
  int d = 0;             // original dimension
  int dim = 0;           // padded dimension (power of two)
  int r = 0;             // bit budget per client
  int log_k = 0;         // bits per symbol
  int k = 0;             // 2^log_k
  int sample_count = 0;  // transmitted coordinates, min(floor(r/log_k), dim)
  double mu = 0.0;       // sample_count / dim
};

// ceil(log2(2 + sqrt(12 ln n))): bits per symbol as a function of the
// client count.
int resolution_bits(int n);

// Resolution from the client count (log k = ceil(log2(2 + sqrt(12 ln n)))),
// sampling from the bit budget. Throws BudgetTooSmall when r < 2 log k.
CodecParams derive_codec_params(int n, int d, int r);

// Weight parameters accumulated along a chain; eps sits at the equality
// point of the scalar quantizer's unbiasedness condition.
struct ChainWeights {
  std::vector<double> hops;  // per-hop weight parameters
  double total_w = 0.0;      // their sum; the encoder's distance bound
  double eps = 0.0;          // 2 * total_w / (k - 2)
};

ChainWeights make_chain_weights(const Chain& chain, int d, int n, int k);

struct Message {
  int client_id = 0;
  std::vector<std::uint32_t> symbols;  // sample_count entries in [0, k)
  bool degenerate = false;             // zero-weight chain; decoder returns y

  bool operator==(const Message&) const = default;
};

// Wire format: symbols packed most-significant-bit first, log_k bits each,
// zero-padded to the next byte. Exactly sample_count * log_k payload bits.
std::vector<std::uint8_t> pack_message(const Message& msg, const CodecParams& params);
Message unpack_message(std::span<const std::uint8_t> bytes, int client_id,
                       const CodecParams& params);
int message_bit_length(const CodecParams& params);

// Uniform sample of sample_count coordinates without replacement, sorted
// ascending, deterministic in (shared_seed, label).
std::vector<int> select_coords(int dim, int sample_count, std::uint64_t shared_seed,
                               std::string_view label);

enum class CombinerMode {
  scaled,  // unbiased: y + (decode - y)/mu on sampled coordinates
  plain,   // literal: decode on sampled coordinates, y elsewhere
};

// Rotates x and stochastically rounds the coordinates in coords (ascending);
// rounding coins come from the client-private stream. A zero-weight chain
// produces the reserved all-zero message flagged degenerate.
Message encode_client(std::span<const double> x, const ChainWeights& weights,
                      const CodecParams& params, const Rotation& rot,
                      const std::vector<int>& coords, RandomStream& coin_stream);

// Decodes against rotated h (the chain predecessor's estimate, or the
// client's own y), fills unsampled coordinates from rotated y, applies the
// selected combiner, inverse-rotates and truncates to d. A degenerate
// message returns y unchanged.
std::vector<double> decode_client(const Message& msg, std::span<const double> h,
                                  std::span<const double> y,
                                  const ChainWeights& weights,
                                  const CodecParams& params, const Rotation& rot,
                                  const std::vector<int>& coords, CombinerMode mode);

}  // namespace dme

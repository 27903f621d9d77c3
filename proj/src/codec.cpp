#include "dme/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dme/errors.hpp"

namespace dme {

int resolution_bits(int n) {
  if (n < 2) {
    throw ConditionViolated("resolution formula requires n >= 2");
  }
  const double target = 2.0 + std::sqrt(12.0 * std::log(static_cast<double>(n)));
  int log_k = static_cast<int>(std::ceil(std::log2(target)));
  // Guard the ceiling against log2 rounding at exact powers of two.
  while (log_k > 1 && std::ldexp(1.0, log_k - 1) >= target) --log_k;
  while (std::ldexp(1.0, log_k) < target) ++log_k;
  return log_k;
}

CodecParams derive_codec_params(int n, int d, int r) {
  if (d < 1) {
    throw DimensionError("codec requires d >= 1");
  }
  CodecParams p;
  p.n = n;
  p.d = d;
  p.dim = next_pow2(d);
  p.r = r;
  p.log_k = resolution_bits(n);
  p.k = 1 << p.log_k;

  if (r < 2 * p.log_k) {
    throw BudgetTooSmall("bit budget r = " + std::to_string(r) +
                         " below the floor 2*log_k = " + std::to_string(2 * p.log_k));
  }
  p.sample_count = std::min(r / p.log_k, p.dim);
  p.mu = static_cast<double>(p.sample_count) / static_cast<double>(p.dim);
  return p;
}

ChainWeights make_chain_weights(const Chain& chain, int d, int n, int k) {
  ChainWeights w;
  w.hops.reserve(chain.hop_deltas.size());
  for (double hop : chain.hop_deltas) {
    w.hops.push_back(delta_prime(hop, d, n));
  }
  w.total_w = 0.0;
  for (double hop : w.hops) w.total_w += hop;
  w.eps = 2.0 * w.total_w / (k - 2);
  return w;
}

int message_bit_length(const CodecParams& params) {
  return params.sample_count * params.log_k;
}

std::vector<std::uint8_t> pack_message(const Message& msg, const CodecParams& params) {
  if (static_cast<int>(msg.symbols.size()) != params.sample_count) {
    throw DimensionError("message holds " + std::to_string(msg.symbols.size()) +
                         " symbols, expected " + std::to_string(params.sample_count));
  }
  const int total_bits = message_bit_length(params);
  std::vector<std::uint8_t> out((total_bits + 7) / 8, 0);
  int bit = 0;
  for (std::uint32_t sym : msg.symbols) {
    for (int b = params.log_k - 1; b >= 0; --b, ++bit) {
      if ((sym >> b) & 1u) {
        out[bit >> 3] |= static_cast<std::uint8_t>(0x80u >> (bit & 7));
      }
    }
  }
  return out;
}

Message unpack_message(std::span<const std::uint8_t> bytes, int client_id,
                       const CodecParams& params) {
  const int total_bits = message_bit_length(params);
  if (static_cast<int>(bytes.size()) != (total_bits + 7) / 8) {
    throw DimensionError("message payload is " + std::to_string(bytes.size()) +
                         " bytes, expected " + std::to_string((total_bits + 7) / 8));
  }
  Message msg;
  msg.client_id = client_id;
  msg.symbols.resize(params.sample_count, 0);
  int bit = 0;
  for (int i = 0; i < params.sample_count; ++i) {
    std::uint32_t sym = 0;
    for (int b = 0; b < params.log_k; ++b, ++bit) {
      sym = (sym << 1) | ((bytes[bit >> 3] >> (7 - (bit & 7))) & 1u);
    }
    msg.symbols[i] = sym;
  }
  return msg;
}

std::vector<int> select_coords(int dim, int sample_count, std::uint64_t shared_seed,
                               std::string_view label) {
  if (sample_count > dim) {
    throw DimensionError("cannot sample " + std::to_string(sample_count) +
                         " coordinates out of " + std::to_string(dim));
  }
  if (sample_count < 0 || dim < 1) {
    throw DimensionError("invalid subset size");
  }
  std::vector<int> pool(dim);
  for (int i = 0; i < dim; ++i) pool[i] = i;
  RandomStream stream(derive_seed(shared_seed, label));
  for (int i = 0; i < sample_count; ++i) {
    const int j = i + static_cast<int>(stream.next_below(dim - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> coords(pool.begin(), pool.begin() + sample_count);
  std::sort(coords.begin(), coords.end());
  return coords;
}

Message encode_client(std::span<const double> x, const ChainWeights& weights,
                      const CodecParams& params, const Rotation& rot,
                      const std::vector<int>& coords, RandomStream& coin_stream) {
  if (static_cast<int>(x.size()) != params.d) {
    throw DimensionError("encode input length " + std::to_string(x.size()) +
                         " != d = " + std::to_string(params.d));
  }
  if (static_cast<int>(coords.size()) != params.sample_count) {
    throw DimensionError("coordinate set size " + std::to_string(coords.size()) +
                         " != sample_count = " + std::to_string(params.sample_count));
  }
  Message msg;
  msg.client_id = 0;
  if (weights.total_w == 0.0) {
    msg.symbols.assign(params.sample_count, 0);
    msg.degenerate = true;
    return msg;
  }
  const MqParams mq{params.k, weights.eps, weights.total_w};
  const std::vector<double> rotated = apply_rotation(rot, x);
  msg.symbols.resize(params.sample_count);
  for (int i = 0; i < params.sample_count; ++i) {
    const double coin = coin_stream.next_double();
    msg.symbols[i] =
        static_cast<std::uint32_t>(mq_encode(rotated[coords[i]], mq, coin));
  }
  return msg;
}

std::vector<double> decode_client(const Message& msg, std::span<const double> h,
                                  std::span<const double> y,
                                  const ChainWeights& weights,
                                  const CodecParams& params, const Rotation& rot,
                                  const std::vector<int>& coords, CombinerMode mode) {
  if (static_cast<int>(y.size()) != params.d || static_cast<int>(h.size()) != params.d) {
    throw DimensionError("decode side-information length != d");
  }
  if (msg.degenerate || weights.total_w == 0.0) {
    return std::vector<double>(y.begin(), y.end());
  }
  if (static_cast<int>(msg.symbols.size()) != params.sample_count ||
      static_cast<int>(coords.size()) != params.sample_count) {
    throw DimensionError("message/coordinate set size mismatch");
  }
  const MqParams mq{params.k, weights.eps, weights.total_w};
  const std::vector<double> rotated_h = apply_rotation(rot, h);
  std::vector<double> estimate = apply_rotation(rot, y);
  for (int i = 0; i < params.sample_count; ++i) {
    const int j = coords[i];
    const double q = mq_decode(static_cast<int>(msg.symbols[i]), rotated_h[j], mq);
    if (mode == CombinerMode::scaled) {
      estimate[j] += (q - estimate[j]) / params.mu;
    } else {
      estimate[j] = q;
    }
  }
  std::vector<double> full = apply_inverse(rot, estimate);
  full.resize(params.d);
  return full;
}

}  // namespace dme

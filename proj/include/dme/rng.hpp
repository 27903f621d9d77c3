#pragma once

// Deterministic, platform-independent randomness. Every random quantity in
// the protocol is drawn from a stream keyed by (master seed, string label),
// so the encoder, the decoder and independent reimplementations reconstruct
// the shared parts without communication. Standard-library distributions are
// avoided on purpose: their output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace dme {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Mixes a label hash into a master seed. Fixed recipe, documented in the
// README so other implementations can interoperate.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t state = master ^ fnv1a64(label);
  const std::uint64_t a = splitmix64(state);
  const std::uint64_t b = splitmix64(state);
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

// xoshiro256** seeded through splitmix64; identical output on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : state_) word = splitmix64(state);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Label builders shared by both protocol sides. Rotations and coordinate
// subsets are public (derived from the shared seed); rounding coins use a
// separate label namespace and are never consulted by the decoder.
inline std::string rotation_label(std::int64_t trial, int client) {
  return "rot/" + std::to_string(trial) + "/" + std::to_string(client);
}
inline std::string coords_label(std::int64_t trial, int client) {
  return "sub/" + std::to_string(trial) + "/" + std::to_string(client);
}
inline std::string coins_label(std::int64_t trial, int client) {
  return "coin/" + std::to_string(trial) + "/" + std::to_string(client);
}
inline std::string instance_label(int index) {
  return "inst/" + std::to_string(index);
}

}  // namespace dme

#pragma once

#include <cstdint>

namespace mtdsim {

// Deterministic 64-bit generator (splitmix64).  Every consumer in the
// library draws from this one algorithm so that a (seed, draw-count) pair
// pins down behaviour exactly, across platforms and across bindings.
//
// The update/output mixing constants are the standard splitmix64 ones;
// see docs/prng.md for the byte-level contract and test vectors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).  Always consumes exactly one draw, even for
  // n == 1, so call counts stay predictable.  Plain modulo: the bias for the
  // n used here (graph sizes, candidate pools) is below 2^-50 and not worth
  // a rejection loop that would make draw counts data-dependent.
  std::uint64_t next_below(std::uint64_t n) {
    return next_u64() % n;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Current internal state; equals the construction seed before any draw.
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Decorrelated child seed for stream `index` of a master seed: one splitmix64
// output of (master XOR index).  Used for per-episode and per-epoch streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return Rng(master ^ index).next_u64();
}

// Stream-index offset separating attacker streams from schedule streams in a
// Monte Carlo run: episode i uses schedule stream i and attacker stream
// i + kAttackerStreamOffset.
inline constexpr std::uint64_t kAttackerStreamOffset = 1ull << 63;

}  // namespace mtdsim

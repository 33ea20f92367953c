#pragma once

#include <cstdint>

namespace cmgn {

// Deterministic, platform-independent random source.
//
// Core generator: xoshiro256** (Blackman & Vigna). A 64-bit seed is expanded
// into the 256-bit state by four successive splitmix64 outputs.
//   uniform()      top 53 bits of next_u64() scaled by 2^-53, in [0, 1)
//   uniform_int(n) rejection sampling on next_u64() modulo n, unbiased
//   gaussian()     Marsaglia polar method on pairs of 2*uniform()-1; the
//                  second value of each accepted pair is cached and returned
//                  by the following call.
// Bank files are regenerated from their seeds, so none of these may change
// without bumping the bank format version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();
  std::uint64_t uniform_int(std::uint64_t bound);
  double gaussian();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

// Stateless finalizer from splitmix64.
std::uint64_t mix64(std::uint64_t x);

// Child seed for (base, a, b); distinct tuples give unrelated streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0);

}  // namespace cmgn

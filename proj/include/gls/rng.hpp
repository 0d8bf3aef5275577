#pragma once

#include <cstdint>

namespace gls {

/// Counter-based generator: the n-th output of substream s under seed k is a
/// fixed function of (k, s, n), so paths can be simulated independently and in
/// any order with identical results.
///
/// The mixing function is SplitMix64's finaliser applied to a Weyl sequence
/// whose starting point is derived from the seed and the stream index.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [-1, 1).
  double symmetric_uniform() { return 2.0 * uniform() - 1.0; }
  /// Standard normal via Box–Muller (both variates are used).
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// A fresh 64-bit seed taken from the system entropy source.
std::uint64_t random_seed();

}  // namespace gls

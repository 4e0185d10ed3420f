#pragma once

#include <cstdint>

namespace qkr {

/// Counter-based generator: draw n of stream s is a pure function of
/// (seed, s, n), so trajectories can be split across workers and replayed
/// in any order with bit-identical results on every platform. The mixing
/// function is the SplitMix64 finaliser.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qkr

#pragma once

#include <cstdint>

namespace homsim {

/// Deterministic per-point random stream. Every scan point gets its own
/// stream derived from (seed, point index), so results do not depend on the
/// order or parallelism of point evaluation, and repeated runs are
/// byte-identical. xoshiro256** seeded through splitmix64.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();
  double uniform01();  // in [0, 1)
  double normal();     // standard normal

  /// Poisson draw. Exact product method for small means, Gaussian
  /// approximation above (counting statistics regime).
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace homsim

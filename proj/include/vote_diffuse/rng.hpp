#pragma once

#include <cstdint>
#include <random>

namespace vote_diffuse {

/// Seeded random source with a fixed cross-platform output sequence.
///
/// The engine is std::mt19937_64, whose raw output is pinned by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every conversion below is spelled out here:
///   uniform()   top 53 bits of one draw, scaled by 2^-53, in [0, 1)
///   below(n)    rejection sampling on the top bits, unbiased
///   gaussian()  Marsaglia polar method, caching the second variate
///   bernoulli() uniform() < p
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  std::uint64_t below(std::uint64_t bound);
  double gaussian();
  bool bernoulli(double p) { return uniform() < p; }

  /// SplitMix64 finalizer of (seed, stream); gives independent sub-seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vote_diffuse

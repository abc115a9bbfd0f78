#pragma once

#include <cstdint>
#include <random>

namespace bitune {

/// Mixes a master seed with a stream index so that work items can own
/// independent, reproducible generators regardless of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

/// Thin wrapper over mt19937_64. Distribution code is written out here
/// (rather than using <random> distributions) so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);

  /// Uniform double in [0, 1).
  double uniform();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bitune

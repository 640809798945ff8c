#pragma once

#include <cstdint>
#include <random>

#include "rofdist/common.hpp"

namespace rofdist {

/// splitmix64 step, used to derive well-separated seeds from small integers.
std::uint64_t splitmix64(std::uint64_t& state);

/// Hash a handful of indices (master seed, amplitude index, trial index, ...)
/// into one stream seed. Distinct inputs give unrelated streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                       std::uint64_t d = 0);

/// Deterministic random stream. All randomness in the library flows through
/// this class so that runs are reproducible from explicit seeds alone; the
/// gaussian path is hand-rolled Box-Muller rather than std::normal_distribution
/// to keep the draw sequence identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on [lo, hi] inclusive.
  int uniform_int(int lo, int hi);

  /// Standard normal N(0, 1).
  double gaussian();

  /// Circularly symmetric complex gaussian with total variance `var`
  /// (var/2 per quadrature).
  cplx complex_gaussian(double var);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rofdist

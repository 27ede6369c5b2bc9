#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace genecop {

/// SplitMix64 finalizer; used to derive independent seed streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random generator.  All variate transformations are
/// implemented in this library (53-bit uniforms, inverse-CDF normals), so a
/// given seed reproduces byte-identical draws across platforms and standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Derives a generator for an independent, reproducible substream: the
  /// same (seed, path) always yields the same stream, and distinct paths
  /// decorrelate.  Used to give each simulated genotype set / phenotype
  /// replicate its own stream regardless of evaluation order.
  static Rng stream(std::uint64_t seed,
                    std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via inverse-CDF transform.
  double normal();

  /// Uniform integer in [0, bound); rejection sampling, bound >= 1.
  std::uint64_t uniform_int(std::uint64_t bound);

 private:
  std::mt19937_64 gen_;
};

}  // namespace genecop

#include "genecop/rng.hpp"

#include "genecop/errors.hpp"
#include "genecop/stats.hpp"

namespace genecop {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t seed,
                std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = splitmix64(seed);
  for (std::uint64_t elem : path)
    state = splitmix64(state ^ (elem + 0x9e3779b97f4a7c15ULL));
  Rng rng(0);
  rng.gen_.seed(state);
  return rng;
}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform01() {
  // 53 uniform bits shifted into (0,1): never returns 0 or 1 exactly.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() { return norm_quantile(uniform01()); }

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_int: bound must be >= 1");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

}  // namespace genecop

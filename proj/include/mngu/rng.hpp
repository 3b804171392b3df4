#pragma once

#include <cstdint>
#include <random>

#include "mngu/types.hpp"

namespace mngu {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent child stream seed for a (seed, tag) pair.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

// Deterministic RNG. The uniform mappings are implemented by hand so that a
// given seed yields the same draw sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1) with 53-bit resolution.
  Scalar uniform() { return static_cast<Scalar>(next() >> 11) * 0x1.0p-53; }

  Scalar uniform(Scalar lo, Scalar hi) { return lo + (hi - lo) * uniform(); }

  // [0, n), unbiased via rejection.
  int uniform_int(int n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = (~0ull / un) * un;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return static_cast<int>(x % un);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mngu

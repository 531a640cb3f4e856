#pragma once

#include <cstdint>

namespace splitstream {

// All randomness in the library is derived from these helpers so that results
// are bit-reproducible across platforms and standard libraries. Sampling
// decisions are keyed by (seed, element position), which makes them independent
// of evaluation order: a distributed run and a single-stream run that see the
// same elements draw the same coins.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ mix64(v + 0x632be59bd9b4e019ULL));
}

// Uniform in [0, 1) with 53 random bits.
inline double unit_from_bits(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline bool keyed_bernoulli(std::uint64_t seed, std::uint64_t index, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return unit_from_bits(hash_combine(seed, index)) < p;
}

// Small sequential generator (splitmix64) for synthetic data; avoids
// std::uniform_*_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_unit() { return unit_from_bits(next_u64()); }

  // Inclusive on both ends. Modulo bias is irrelevant at the ranges used here.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace splitstream

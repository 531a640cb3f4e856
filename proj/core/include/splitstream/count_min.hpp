#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "splitstream/data.hpp"

namespace splitstream {

// Count-Min sketch over int64 keys with +/- updates. As long as every key's
// net count stays non-negative, estimates never undercount: each cell holds a
// sum of net counts that includes the queried key's.
class CountMinSketch {
 public:
  CountMinSketch(std::int64_t width, std::int64_t depth, std::uint64_t seed);

  void update(std::int64_t key, std::int64_t delta);
  std::int64_t estimate(std::int64_t key) const;

  std::int64_t width() const { return width_; }
  std::int64_t depth() const { return depth_; }
  std::int64_t stored_words() const { return width_ * depth_; }

 private:
  std::int64_t cell(std::int64_t row, std::int64_t key) const;

  std::int64_t width_;
  std::int64_t depth_;
  std::uint64_t seed_;
  std::vector<std::int64_t> cells_;  // row-major depth x width
};

// Range counts over [1, N] under inserts and deletes: one Count-Min per dyadic
// level, so a range query touches O(log N) nodes and stays a one-sided
// overestimate. Sized for per-query error about eps' * total * log2(N):
// width = ceil(e * log2(N) / eps') per level, depth = ceil(ln(1/delta)) with
// delta = 1/N^2.
class DyadicCountMin {
 public:
  DyadicCountMin(std::int64_t domain_size, double eps_prime, std::uint64_t seed,
                 bool track_exact = false);

  // delta is +1 (insert) or -1 (delete). With track_exact, a deletion that
  // would drive a key's net count negative throws InputError — that is a
  // caller contract violation, not a sketch property.
  void update(std::int64_t x, std::int64_t delta);

  // Estimated number of live elements with a <= x <= b.
  std::int64_t range_estimate(std::int64_t a, std::int64_t b) const;

  std::int64_t total() const { return total_; }
  std::int64_t domain_size() const { return domain_size_; }
  std::int64_t levels() const { return static_cast<std::int64_t>(levels_.size()); }
  std::int64_t stored_words() const;
  double error_budget() const;  // eps' * total * log2(N)

 private:
  std::int64_t domain_size_;
  std::int64_t padded_;  // power of two >= domain_size
  double eps_prime_;
  std::int64_t total_{0};
  std::vector<CountMinSketch> levels_;  // levels_[k] indexes length-2^k nodes
  bool track_exact_;
  std::unordered_map<std::int64_t, std::int64_t> exact_;
};

}  // namespace splitstream

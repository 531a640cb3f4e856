#include "splitstream/count_min.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "splitstream/rng.hpp"

namespace splitstream {

CountMinSketch::CountMinSketch(std::int64_t width, std::int64_t depth,
                               std::uint64_t seed)
    : width_(width), depth_(depth), seed_(seed) {
  if (width < 1 || depth < 1) {
    throw InputError("CountMinSketch: width and depth must be >= 1");
  }
  cells_.assign(static_cast<std::size_t>(width_ * depth_), 0);
}

std::int64_t CountMinSketch::cell(std::int64_t row, std::int64_t key) const {
  const std::uint64_t h =
      hash_combine(hash_combine(seed_, static_cast<std::uint64_t>(row)),
                   static_cast<std::uint64_t>(key));
  return static_cast<std::int64_t>(h % static_cast<std::uint64_t>(width_));
}

void CountMinSketch::update(std::int64_t key, std::int64_t delta) {
  for (std::int64_t row = 0; row < depth_; ++row) {
    cells_[static_cast<std::size_t>(row * width_ + cell(row, key))] += delta;
  }
}

std::int64_t CountMinSketch::estimate(std::int64_t key) const {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t row = 0; row < depth_; ++row) {
    best = std::min(best,
                    cells_[static_cast<std::size_t>(row * width_ + cell(row, key))]);
  }
  return std::max<std::int64_t>(best, 0);
}

DyadicCountMin::DyadicCountMin(std::int64_t domain_size, double eps_prime,
                               std::uint64_t seed, bool track_exact)
    : domain_size_(domain_size), eps_prime_(eps_prime), track_exact_(track_exact) {
  if (domain_size < 1) throw InputError("DyadicCountMin: domain_size must be >= 1");
  if (!(eps_prime > 0.0)) throw InputError("DyadicCountMin: eps' must be positive");
  padded_ = static_cast<std::int64_t>(
      std::bit_ceil(static_cast<std::uint64_t>(domain_size)));
  const double log_n =
      std::log2(static_cast<double>(std::max<std::int64_t>(domain_size, 2)));
  const auto width = static_cast<std::int64_t>(
      std::ceil(std::exp(1.0) * log_n / eps_prime));
  const auto depth = static_cast<std::int64_t>(
      std::ceil(2.0 * std::log(static_cast<double>(std::max<std::int64_t>(domain_size, 2)))));
  const std::int64_t n_levels = std::countr_zero(static_cast<std::uint64_t>(padded_)) + 1;
  levels_.reserve(static_cast<std::size_t>(n_levels));
  for (std::int64_t k = 0; k < n_levels; ++k) {
    levels_.emplace_back(std::max<std::int64_t>(width, 1),
                         std::max<std::int64_t>(depth, 1),
                         hash_combine(seed, static_cast<std::uint64_t>(k)));
  }
}

void DyadicCountMin::update(std::int64_t x, std::int64_t delta) {
  if (x < 1 || x > domain_size_) {
    throw InputError("DyadicCountMin: x " + std::to_string(x) + " outside [1, " +
                     std::to_string(domain_size_) + "]");
  }
  if (delta != 1 && delta != -1) {
    throw InputError("DyadicCountMin: delta must be +1 or -1");
  }
  if (track_exact_) {
    auto& net = exact_[x];
    net += delta;
    if (net < 0) {
      throw InputError("DyadicCountMin: deletion of x=" + std::to_string(x) +
                       " without a matching insert");
    }
  }
  std::int64_t node = x - 1;
  for (auto& level : levels_) {
    level.update(node, delta);
    node >>= 1;
  }
  total_ += delta;
}

std::int64_t DyadicCountMin::range_estimate(std::int64_t a, std::int64_t b) const {
  a = std::max<std::int64_t>(a, 1);
  b = std::min(b, domain_size_);
  if (a > b) return 0;
  // Canonical dyadic decomposition of [a-1, b-1]: at most two nodes per level.
  std::int64_t lo = a - 1, hi = b - 1, sum = 0;
  std::size_t k = 0;
  while (lo <= hi) {
    if (lo & 1) {
      sum += levels_[k].estimate(lo);
      ++lo;
    }
    if (!(hi & 1)) {
      sum += levels_[k].estimate(hi);
      --hi;
    }
    lo >>= 1;
    hi >>= 1;
    ++k;
  }
  return sum;
}

std::int64_t DyadicCountMin::stored_words() const {
  std::int64_t words = 0;
  for (const auto& level : levels_) words += level.stored_words();
  if (track_exact_) words += 2 * static_cast<std::int64_t>(exact_.size());
  return words;
}

double DyadicCountMin::error_budget() const {
  const double log_n =
      std::log2(static_cast<double>(std::max<std::int64_t>(domain_size_, 2)));
  return eps_prime_ * static_cast<double>(std::max<std::int64_t>(total_, 0)) * log_n;
}

}  // namespace splitstream

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "splitstream/stream.hpp"

namespace splitstream {

// Default constant C in the sampling probability p = C * ln(N) / (eps * m).
// 64 is calibrated so the statistical suites pass at desk scale; the CLI can
// override it.
inline constexpr double kDefaultSamplingC = 64.0;

// min(1, C * ln(max(N,2)) / (eps * m)). Natural log throughout.
double sampling_probability(double c, std::int64_t domain_size, double eps,
                            std::int64_t m);

// Bernoulli(p) sample of one pass, sorted by (x, stream position) afterwards.
// Each element's coin is keyed by (seed, position), independent of order.
// label_aware keeps the labels (and a +1-count prefix for O(log) label-filtered
// range queries); otherwise labels are dropped and an item costs one word.
struct SampleSet {
  double p{1.0};
  bool clamped{false};  // requested probability exceeded 1
  bool label_aware{false};
  std::uint64_t seed{0};
  std::vector<Observation> items;        // sorted by (x, stream position)
  std::vector<std::int64_t> pos_prefix;  // pos_prefix[i] = #{items[0..i) with y > 0}

  std::int64_t size() const { return static_cast<std::int64_t>(items.size()); }
  std::int64_t stored_words() const { return size() * (label_aware ? 2 : 1); }
};

SampleSet sample_pass(StreamHandle& stream, double p, std::uint64_t seed,
                      bool label_aware);

struct RangeEstimate {
  std::int64_t a{0}, b{0};
  std::optional<int> label;
  std::int64_t k{0};      // sampled items in [a, b] (with the label, if given)
  double estimate{0.0};   // k / p
};

// Counts sampled items with a <= x <= b via binary search; label (+1/-1)
// filters by sign when the sample is label-aware.
RangeEstimate estimate_range(const SampleSet& sample, std::int64_t a,
                             std::int64_t b,
                             std::optional<int> label = std::nullopt);

// Empirically measures, over `trials` independently seeded samples of a
// worst-case stream, how often the two threshold clauses fail:
//   clause 1: a range holding f >= 4*m^alpha must estimate k/p >= 2*m^alpha,
//   clause 2: a range holding f <= m^alpha/8 must estimate k/p <= m^alpha.
// The stream places exactly those masses in two disjoint ranges. Sampling uses
// p = min(1, C*ln(N)/m^alpha); with the default C at desk scale p clamps to 1
// and the estimates are exact (zero violations) — pass a small C to see the
// stochastic regime.
struct ThresholdReport {
  std::int64_t trials{0};
  double p{1.0};
  bool clamped{false};
  std::int64_t clause1_violations{0};
  std::int64_t clause2_violations{0};
  double budget{0.0};  // theoretical failure budget 1/N

  double clause1_rate() const {
    return trials ? static_cast<double>(clause1_violations) / trials : 0.0;
  }
  double clause2_rate() const {
    return trials ? static_cast<double>(clause2_violations) / trials : 0.0;
  }
};

ThresholdReport verify_threshold_separation(std::int64_t m, double alpha,
                                            std::int64_t trials,
                                            std::uint64_t seed,
                                            double c = kDefaultSamplingC,
                                            std::int64_t domain_size = 256);

}  // namespace splitstream

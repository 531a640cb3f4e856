#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "splitstream/count_min.hpp"
#include "splitstream/sampling.hpp"
#include "splitstream/split_result.hpp"
#include "splitstream/stream.hpp"

namespace splitstream {

// Streaming regression split finders. m, N and the label bound M come from the
// stream's DatasetMeta (known up front; one-pass algorithms need them to size
// the sampling probability before seeing the data).

// Exact single pass: per distinct x value t accumulate count / label sum /
// squared-label sum, then one prefix-suffix sweep evaluates every distinct
// split. Space is ~4 words per distinct value.
SplitEvaluation exact_split_1pass(StreamHandle& stream);

// Candidate splits j_0 = 0 < j_1 < ... < j_k = N chosen so that every bucket
// (j_t, j_t+1] either is a single value or carries estimated mass <= eps*m.
struct CandidateSplitSet {
  std::vector<std::int64_t> splits;  // includes the 0 and N sentinels
  double eps{0.0};

  std::int64_t n_buckets() const {
    return static_cast<std::int64_t>(splits.size()) - 1;
  }
  // Bucket index t with splits[t] < x <= splits[t+1].
  std::int64_t locate_bucket(std::int64_t x) const;
};

using RangeCountFn =
    std::function<double(std::int64_t a, std::int64_t b)>;  // estimated count

// Greedy candidate construction: starting after the last chosen split, binary
// search the smallest j' whose estimated mass from there exceeds eps*m; take j'
// (and j'-1 too when the mass already reaches 2*eps*m, which pins a heavy
// value). Stops by appending N when the remaining mass fits. The candidate
// count is hard-checked against 16/eps + 4.
CandidateSplitSet build_candidates(const RangeCountFn& estimate, double eps,
                                   std::int64_t m, std::int64_t domain_size);
CandidateSplitSet build_candidates(const SampleSet& sample, double eps,
                                   std::int64_t m, std::int64_t domain_size);

// Per-bucket aggregates for a candidate set: count, label sum, squared sum.
struct BucketAggregates {
  std::vector<double> count, sum, sum_sq;  // one slot per bucket
};

// Two passes, additive eps guarantee: pass 1 samples at p = C*ln(N)/(eps*m)
// and builds candidates; pass 2 accumulates exact bucket aggregates, so every
// candidate's loss is exact and the returned split satisfies
// L(j) <= opt + 5*eps*M^2 with high probability.
SplitEvaluation additive_split_2pass(StreamHandle& stream, double eps,
                                     std::uint64_t seed,
                                     double c = kDefaultSamplingC);

// Deletion-tolerant variant: pass 1 feeds a dyadic Count-Min instead of a
// sample and candidates come from its (one-sided) range estimates; pass 2 uses
// weight-signed aggregates. m is the net stream size.
SplitEvaluation additive_split_2pass_dyadic(StreamHandle& stream, double eps,
                                            std::uint64_t seed);

// Multiplicative (1+eps) guarantee via lockstep guess search; two shared
// passes per binary-search iteration (means first, then squared sums), so
// passes <= 2*(ceil(log2 N) + 1).
SplitEvaluation multiplicative_split(StreamHandle& stream, double eps);

// Same search compressed into phases: per phase the full depth-r probe tree
// (r = ceil(beta*log2 N), i.e. r+1 iterations) is evaluated in two shared
// passes and every guess descends r+1 levels at once. Total passes
// <= 2*ceil(1/beta) + 2.
SplitEvaluation multiplicative_split_lowpass(StreamHandle& stream, double eps,
                                             double beta);

namespace detail {
struct RegProbeOutcome {
  std::int64_t j{0};
  double cnt_left{0}, mu{0}, gamma{0};
  double err_left{0}, err_right{0};
};

// Prefix/suffix evaluation of every probe from per-gap aggregates (gap g holds
// the elements with probes[g-1] < x <= probes[g]; gap arrays have
// probes.size() + 1 slots, the last one catching x > probes.back()).
std::vector<RegProbeOutcome> evaluate_probes_from_gaps(
    const std::vector<std::int64_t>& probes, const std::vector<double>& cnt,
    const std::vector<double>& sum, const std::vector<double>& sum_sq,
    std::int64_t m);

// Gap index of x within a sorted probe list (first probe >= x).
std::size_t gap_index(const std::vector<std::int64_t>& probes, std::int64_t x);

SplitEvaluation evaluation_from_outcome(const RegProbeOutcome& oc, std::int64_t m);
}  // namespace detail

}  // namespace splitstream

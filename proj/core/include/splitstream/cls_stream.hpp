#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "splitstream/sampling.hpp"
#include "splitstream/split_result.hpp"
#include "splitstream/stream.hpp"

namespace splitstream {

// Streaming classification split finders (labels -1/+1), plus the categorical
// partition sampler.

struct LabelRangeCounts {
  std::int64_t neg_left{0}, pos_left{0};
  std::int64_t neg_right{0}, pos_right{0};

  std::int64_t total() const {
    return neg_left + pos_left + neg_right + pos_right;
  }
};

// One exact pass counting labels on both sides of j.
LabelRangeCounts exact_label_counts_pass(StreamHandle& stream, std::int64_t j);

// Estimated loss curve over the distinct sampled values, from one prefix and
// one suffix sweep over the per-value sampled label counts.
struct EstimatedLossCurve {
  double p{1.0};
  std::vector<std::int64_t> values;  // distinct sampled x, ascending
  std::vector<double> losses;        // estimated L at each value
  std::vector<std::int64_t> neg_prefix, pos_prefix;  // counts for x <= values[t]
};

// One pass, additive eps guarantee: sample at p = C*ln(N)/(eps*m), evaluate
// the estimated loss at every distinct sampled value, return the smallest
// minimizer. With p = 1 this is exactly the oracle. The returned loss is the
// estimate (the driver recomputes the true loss for reporting).
ClsSplitEvaluation additive_cls_split_1pass(StreamHandle& stream, double eps,
                                            std::uint64_t seed,
                                            double c = kDefaultSamplingC,
                                            EstimatedLossCurve* curve_out = nullptr);

// Multiplicative (1+eps) guarantee; label counts need no precomputed means, so
// one shared pass per binary-search iteration: passes <= ceil(log2 N) + 1.
ClsSplitEvaluation multiplicative_cls_split(StreamHandle& stream, double eps);

// Phase-batched variant (depth-r probe tree per phase, one pass each):
// passes <= ceil(1/beta) + 1.
ClsSplitEvaluation multiplicative_cls_split_lowpass(StreamHandle& stream,
                                                    double eps, double beta);

// Categorical two-way partition, additive eps: sample at p = min(1, C*N/(eps*m))
// (per-category estimates need the heavier rate), count sampled labels per
// category, and enumerate all 2^(N-1) partitions with category 1 pinned to A.
// N > kMaxCategoricalDomain trips the budget guard. Returned loss is the
// estimate; ties prefer the lexicographically smallest A.
CategoricalPartition categorical_additive(StreamHandle& stream, double eps,
                                          std::uint64_t seed,
                                          double c = kDefaultSamplingC);

namespace detail {
struct ClsProbeOutcome {
  std::int64_t j{0};
  std::int64_t neg_left{0}, pos_left{0}, neg_right{0}, pos_right{0};

  std::int64_t misclassified() const {
    return std::min(neg_left, pos_left) + std::min(neg_right, pos_right);
  }
};

std::vector<ClsProbeOutcome> evaluate_cls_probes_from_gaps(
    const std::vector<std::int64_t>& probes, const std::vector<std::int64_t>& neg,
    const std::vector<std::int64_t>& pos);

ClsSplitEvaluation evaluation_from_outcome(const ClsProbeOutcome& oc,
                                           std::int64_t m);

// Shared post-processing of a label-aware sample: distinct values, DP curve,
// tie-tolerant argmin. Used by the streaming one-pass algorithm and the MPC
// central machine so both produce identical answers from identical samples.
ClsSplitEvaluation pick_from_cls_sample(const SampleSet& sample, std::int64_t m,
                                        EstimatedLossCurve* curve_out);

// Same sharing for the categorical pick: per-category sampled label counts ->
// best partition. counts are (neg, pos) per category id 1..N.
CategoricalPartition pick_partition_from_counts(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& counts, double p,
    std::int64_t m);
}  // namespace detail

}  // namespace splitstream

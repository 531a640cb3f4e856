#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splitstream/data.hpp"
#include "splitstream/split_result.hpp"

namespace splitstream {

// Exhaustive reference solvers. These hold the whole dataset and exist to
// validate the streaming algorithms; they share the candidate domain (distinct
// x values) and tie-break rule with them, so a p = 1 streaming run must
// reproduce the oracle answer exactly.

// Enumerating 2^(N-1) partitions is the whole point of the categorical oracle,
// but it has to stop somewhere.
inline constexpr std::int64_t kMaxCategoricalDomain = 24;

// Exact argmin of L(j) = (sum squared deviation left + right) / m over the
// distinct x values present (L is constant between them). Ties: smallest j.
SplitEvaluation oracle_regression(const Dataset& ds);

// Exact argmin of the misclassified fraction under per-side majority labels.
ClsSplitEvaluation oracle_classification(const Dataset& ds);

// Exact argmin over all 2^(N-1) category partitions with category 1 pinned to
// side A. Ties: lexicographically smallest A (as an ascending id sequence).
// Throws BudgetError when N > kMaxCategoricalDomain.
CategoricalPartition oracle_categorical(const Dataset& ds);

// Mode dispatch; with_curve materializes L(j) for j = 1..N (threshold modes).
OptResult oracle_solve(const Dataset& ds, bool with_curve = false);

// L(j) for j = 1..N (index j-1). Works for regression and classification.
std::vector<double> loss_curve(const Dataset& ds);

// Exact evaluation at one split / partition, any j in [0, N].
SplitEvaluation evaluate_split(const Dataset& ds, std::int64_t j);
ClsSplitEvaluation evaluate_cls_split(const Dataset& ds, std::int64_t j);
CategoricalPartition evaluate_partition(const Dataset& ds, std::uint32_t mask_a);

// (mean, sum of squared deviations from the mean); empty -> (0, 0).
std::pair<double, double> subset_stats(std::span<const double> values);

// Checks that dropping elements cannot increase the squared-deviation mass:
// g(sub) <= g(full) up to fp tolerance. Throws InputError if `sub` is not a
// sub-multiset of `full`.
bool check_monotonicity(const std::vector<double>& full,
                        const std::vector<double>& sub);

// Checks the split-shift bound L(j') <= L(j) + 5*b*M^2/(4m) where b counts the
// elements with j < x <= j'. Requires regression mode and j < j'.
bool check_split_shift(const Dataset& ds, std::int64_t j, std::int64_t j_prime);

namespace detail {
// Index into `losses` of the smallest candidate whose loss is within
// kLossTieTolerance of the minimum.
std::size_t argmin_with_ties(const std::vector<double>& losses);
// True if partition mask `a` precedes `b` lexicographically (ascending id
// sequences, prefix wins).
bool partition_lex_less(std::uint32_t a, std::uint32_t b, std::int64_t n_categories);
}  // namespace detail

}  // namespace splitstream

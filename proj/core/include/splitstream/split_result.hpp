#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace splitstream {

// Threshold split of the ordered domain: left side is {x <= j}, right side is
// {x > j}. j = 0 means "everything right", j = N "everything left".
struct SplitEvaluation {
  std::int64_t j{0};
  double mu{0.0};     // mean label on the left side (0 when empty)
  double gamma{0.0};  // mean label on the right side (0 when empty)
  double err_left{0.0};   // sum of squared deviations, left
  double err_right{0.0};  // sum of squared deviations, right
  double loss{0.0};       // (err_left + err_right) / m
};

struct ClsSplitEvaluation {
  std::int64_t j{0};
  int left_label{+1};   // majority label predicted on the left side
  int right_label{+1};  // majority label predicted on the right side
  double loss{0.0};     // misclassified fraction under those predictions
};

// Two-way partition of categories; category 1 is always on side A (the loss is
// symmetric under swapping sides, so this halves the search space). Bit c-1 of
// `mask_a` is set iff category c belongs to A.
struct CategoricalPartition {
  std::uint32_t mask_a{1};
  double loss{0.0};

  std::vector<std::int64_t> side_a(std::int64_t n_categories) const;
  std::vector<std::int64_t> side_b(std::int64_t n_categories) const;
};

// Outcome of an exact offline solve. `curve` is only materialized on request:
// for threshold modes it holds L(j) for j = 1..N; categorical mode has no
// per-j curve (the CLI emits per-partition losses separately).
struct OptResult {
  std::variant<SplitEvaluation, ClsSplitEvaluation, CategoricalPartition> best;
  double opt{0.0};
  std::optional<std::vector<double>> curve;
};

// Losses within this absolute band of the minimum are treated as tied and the
// smallest split index (or lexicographically smallest partition) wins. Matches
// the cross-implementation comparison tolerance used throughout.
inline constexpr double kLossTieTolerance = 1e-9;

}  // namespace splitstream

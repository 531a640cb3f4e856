#pragma once

// Shared test fixtures: two tiny hand-checkable datasets with frozen optima,
// plus seeded random dataset builders used by the property suites.

#include <utility>
#include <vector>

#include "splitstream/data.hpp"
#include "splitstream/rng.hpp"

namespace splitstream::testing {

inline Dataset make_dataset(const std::vector<std::pair<std::int64_t, double>>& rows,
                            std::int64_t domain_size, double label_max, Mode mode) {
  std::vector<Observation> obs;
  obs.reserve(rows.size());
  for (const auto& [x, y] : rows) obs.push_back({x, y});
  DatasetMeta meta;
  meta.n_obs = static_cast<std::int64_t>(obs.size());
  meta.domain_size = domain_size;
  meta.label_max = label_max;
  meta.mode = mode;
  return Dataset(std::move(obs), meta);
}

// 14 points over [1, 10], 9 distinct values. Optimal split j = 4 with side
// means 7 and 2, squared error 4 on each side: loss = 8/14 = 4/7.
inline Dataset tiny_regression_dataset() {
  return make_dataset(
      {{1, 6}, {1, 7}, {2, 8}, {3, 8}, {3, 6}, {2, 7}, {4, 7},
       {5, 2}, {6, 2}, {6, 1}, {7, 3}, {8, 2}, {9, 3}, {9, 1}},
      10, 8.0, Mode::regression);
}

inline constexpr std::int64_t kTinyRegressionOptJ = 4;
inline constexpr double kTinyRegressionOptLoss = 4.0 / 7.0;
inline constexpr double kTinyRegressionMuLeft = 7.0;
inline constexpr double kTinyRegressionMuRight = 2.0;
inline constexpr double kTinyRegressionErrLeft = 4.0;
inline constexpr double kTinyRegressionErrRight = 4.0;

// 13 labelled points over [1, 10]. Optimal split j = 4: left counts (5-, 2+),
// right counts (1-, 5+), so 3 of 13 are misclassified.
inline Dataset tiny_classification_dataset() {
  return make_dataset(
      {{1, -1}, {1, +1}, {2, -1}, {3, -1}, {3, -1}, {2, +1}, {4, -1},
       {5, +1}, {6, +1}, {7, +1}, {8, +1}, {9, +1}, {9, -1}},
      10, 1.0, Mode::classification);
}

inline constexpr std::int64_t kTinyClassificationOptJ = 4;
inline constexpr double kTinyClassificationOptLoss = 3.0 / 13.0;

inline Dataset random_regression_dataset(Rng& rng, std::int64_t m,
                                         std::int64_t domain_size,
                                         double label_max) {
  std::vector<Observation> obs;
  obs.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    obs.push_back({rng.next_int(1, domain_size), rng.next_unit() * label_max});
  }
  DatasetMeta meta;
  meta.n_obs = m;
  meta.domain_size = domain_size;
  meta.label_max = label_max;
  meta.mode = Mode::regression;
  return Dataset(std::move(obs), meta);
}

inline Dataset random_classification_dataset(Rng& rng, std::int64_t m,
                                             std::int64_t domain_size) {
  std::vector<Observation> obs;
  obs.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    obs.push_back(
        {rng.next_int(1, domain_size), rng.next_bernoulli(0.5) ? 1.0 : -1.0});
  }
  DatasetMeta meta;
  meta.n_obs = m;
  meta.domain_size = domain_size;
  meta.label_max = 1.0;
  meta.mode = Mode::classification;
  return Dataset(std::move(obs), meta);
}

inline Dataset random_categorical_dataset(Rng& rng, std::int64_t m,
                                          std::int64_t domain_size) {
  std::vector<Observation> obs;
  obs.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    const std::int64_t cat = rng.next_int(1, domain_size);
    // Correlate the label with category parity so partitions matter.
    const bool flip = rng.next_bernoulli(0.25);
    const double label = ((cat % 2 == 0) != flip) ? 1.0 : -1.0;
    obs.push_back({cat, label});
  }
  DatasetMeta meta;
  meta.n_obs = m;
  meta.domain_size = domain_size;
  meta.label_max = 1.0;
  meta.mode = Mode::categorical;
  return Dataset(std::move(obs), meta);
}

}  // namespace splitstream::testing

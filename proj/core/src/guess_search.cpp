#include "splitstream/guess_search.hpp"

#include <cmath>

namespace splitstream {

GuessCase classify_guess_case(double err_left, double err_right, double z_left,
                              double z_right) {
  const bool left_ok = err_left <= z_left;
  const bool right_ok = err_right <= z_right;
  if (left_ok && right_ok) return GuessCase::feasible;
  if (!left_ok && !right_ok) return GuessCase::infeasible;
  return left_ok ? GuessCase::go_right : GuessCase::go_left;
}

namespace {

// e_max = ceil(log_{1+eps} cap), at least 0: powers 1..(1+eps)^e_max cover
// every value in [1, cap] to within a (1+eps) factor.
std::int64_t top_exponent(double cap, double eps) {
  if (cap <= 1.0) return 0;
  return std::max<std::int64_t>(
      0, static_cast<std::int64_t>(std::ceil(std::log(cap) / std::log1p(eps))));
}

}  // namespace

std::vector<double> regression_guess_axis(std::int64_t m, double label_max,
                                          double eps) {
  if (m <= 0 || !(label_max > 0) || !(eps > 0)) {
    throw InputError("guess axis: m, M and eps must be positive");
  }
  const double cap = static_cast<double>(m) * label_max * label_max;
  const std::int64_t e_max = top_exponent(cap, eps);
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(e_max) + 2);
  axis.push_back(0.0);
  double v = 1.0;
  for (std::int64_t e = 0; e <= e_max; ++e, v *= 1.0 + eps) axis.push_back(v);
  return axis;
}

std::vector<std::pair<double, double>> guess_grid(std::int64_t m,
                                                  double label_max, double eps) {
  return cartesian_pairs(regression_guess_axis(m, label_max, eps));
}

std::vector<double> regression_search_axis(std::int64_t m, double label_max,
                                           double eps) {
  if (m <= 0 || !(label_max > 0) || !(eps > 0)) {
    throw InputError("guess axis: m, M and eps must be positive");
  }
  const double cap = static_cast<double>(m) * label_max * label_max;
  const std::int64_t e_max = top_exponent(cap, eps);
  std::vector<double> axis;
  axis.push_back(0.0);
  // Downward extension first (strictly below 1), then the upward powers.
  std::vector<double> down;
  for (double v = 1.0 / (1.0 + eps); ; v /= 1.0 + eps) {
    down.push_back(v);
    if (v <= kGuessAxisFloor) break;
  }
  for (auto it = down.rbegin(); it != down.rend(); ++it) axis.push_back(*it);
  double v = 1.0;
  for (std::int64_t e = 0; e <= e_max; ++e, v *= 1.0 + eps) axis.push_back(v);
  return axis;
}

std::vector<double> classification_guess_axis(std::int64_t m, double eps) {
  if (m <= 0 || !(eps > 0)) {
    throw InputError("guess axis: m and eps must be positive");
  }
  const std::int64_t e_max = top_exponent(static_cast<double>(m), eps);
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(e_max) + 2);
  axis.push_back(0.0);
  double v = 1.0;
  for (std::int64_t e = 0; e <= e_max; ++e, v *= 1.0 + eps) axis.push_back(v);
  return axis;
}

std::vector<std::pair<double, double>> cartesian_pairs(
    const std::vector<double>& axis) {
  std::vector<std::pair<double, double>> grid;
  grid.reserve(axis.size() * axis.size());
  for (double a : axis)
    for (double b : axis) grid.emplace_back(a, b);
  return grid;
}

void collect_probe_tree(std::int64_t lo, std::int64_t hi, int levels,
                        std::set<std::int64_t>& out) {
  if (lo > hi || levels <= 0) return;
  const std::int64_t j = (lo + hi) / 2;
  out.insert(j);
  collect_probe_tree(lo, j - 1, levels - 1, out);
  collect_probe_tree(j + 1, hi, levels - 1, out);
}

}  // namespace splitstream

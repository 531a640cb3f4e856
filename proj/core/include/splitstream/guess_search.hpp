#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "splitstream/data.hpp"

namespace splitstream {

// Guess-and-binary-search machinery shared by the multiplicative split
// algorithms (streaming and MPC). Each guess fixes an error budget pair
// (z_left, z_right) and binary-searches the split domain for a j whose two
// side errors fit the budgets. All guesses advance in lockstep so that one
// shared data traversal serves every active guess's probe.

enum class GuessCase { feasible, infeasible, go_left, go_right };

// Case analysis at a probe j:
//   both errors within budget            -> feasible (record j, stop the guess)
//   both over budget                     -> infeasible (no split fits; stop)
//   left over, right within              -> go_left  (j_r <- j - 1)
//   left within, right over              -> go_right (j_l <- j + 1)
GuessCase classify_guess_case(double err_left, double err_right, double z_left,
                              double z_right);

// Error-budget axis for regression guesses, as exposed to callers:
// {0} u {(1+eps)^e : e = 0..ceil(log_{1+eps}(m*M^2))}, ascending.
std::vector<double> regression_guess_axis(std::int64_t m, double label_max,
                                          double eps);

// Cartesian product of the regression axis with itself (z_left, z_right).
std::vector<std::pair<double, double>> guess_grid(std::int64_t m,
                                                  double label_max, double eps);

// The axis the search actually runs on. Squared-error masses are real-valued,
// so the axis is extended downward in (1+eps) steps to a 1e-9 floor; a nonzero
// optimum below 1 then still has a covering guess, and the returned split costs
// at most (1+eps)*opt + 2*floor/m. Classification counts are integers and need
// no extension.
inline constexpr double kGuessAxisFloor = 1e-9;
std::vector<double> regression_search_axis(std::int64_t m, double label_max,
                                           double eps);

// {0} u {(1+eps)^e : e = 0..ceil(log_{1+eps} m)}, ascending.
std::vector<double> classification_guess_axis(std::int64_t m, double eps);

std::vector<std::pair<double, double>> cartesian_pairs(
    const std::vector<double>& axis);

// All split values a binary search on [lo, hi] can probe within `levels`
// iterations (midpoint first, then both half-intervals recursively).
void collect_probe_tree(std::int64_t lo, std::int64_t hi, int levels,
                        std::set<std::int64_t>& out);

struct GuessState {
  double z_left{0.0}, z_right{0.0};
  std::int64_t lo{1}, hi{0};
  enum class Status { active, feasible, infeasible, exhausted } status{Status::active};
  std::int64_t found_j{-1};
};

struct GuessSearchAudit {
  std::int64_t phases{0};
  std::int64_t evaluator_calls{0};
  std::int64_t max_probes_per_phase{0};
  std::int64_t peak_words{0};
  // Filled only when collect_intervals is set: per guess, the (lo, hi)
  // interval before each of its iterations.
  bool collect_intervals{false};
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> intervals;
};

template <class Outcome>
struct GuessSearchResult {
  bool found{false};
  std::int64_t best_j{-1};
  double best_bound{0.0};  // z_left + z_right of the recording guess
  Outcome best_eval{};     // exact evaluation at best_j
  std::int64_t n_feasible{0};
};

// Runs every guess's binary search over [1, domain_size], iterations_per_phase
// steps per phase. Each phase evaluates the union of the active guesses' probe
// trees once (the evaluator decides what a "shared evaluation" costs: 2 passes
// for regression streams, 1 for classification, rounds for MPC) and then lets
// each guess consume the precomputed outcomes. Feasible splits land in a map
// keyed by j keeping the smallest budget sum; the result is the map's minimum,
// smallest j on ties.
//
// Evaluator: std::vector<Outcome> operator()(const std::vector<std::int64_t>&)
// ErrFn:     std::pair<double,double> operator()(const Outcome&)
template <class Outcome, class Evaluator, class ErrFn>
GuessSearchResult<Outcome> run_guess_search(
    const std::vector<std::pair<double, double>>& guesses,
    std::int64_t domain_size, int iterations_per_phase, Evaluator&& evaluate,
    ErrFn&& errors_of, GuessSearchAudit* audit = nullptr) {
  if (domain_size < 1) throw InputError("guess search: empty split domain");
  if (iterations_per_phase < 1) {
    throw InputError("guess search: iterations_per_phase must be >= 1");
  }

  std::vector<GuessState> states;
  states.reserve(guesses.size());
  for (const auto& [zl, zr] : guesses) {
    states.push_back(GuessState{zl, zr, 1, domain_size});
  }
  if (audit && audit->collect_intervals) audit->intervals.resize(states.size());

  struct Record {
    double bound;
    Outcome eval;
  };
  std::map<std::int64_t, Record> feasible;

  auto any_active = [&] {
    for (const auto& s : states)
      if (s.status == GuessState::Status::active) return true;
    return false;
  };

  while (any_active()) {
    // Union of the probe trees of every active guess, deduplicated: guesses
    // sharing an interval share probes, so early phases evaluate few values.
    std::set<std::int64_t> probe_set;
    for (const auto& s : states) {
      if (s.status == GuessState::Status::active) {
        collect_probe_tree(s.lo, s.hi, iterations_per_phase, probe_set);
      }
    }
    std::vector<std::int64_t> probes(probe_set.begin(), probe_set.end());

    std::vector<Outcome> outcomes = evaluate(probes);
    if (outcomes.size() != probes.size()) {
      throw std::logic_error("guess search: evaluator size mismatch");
    }
    auto outcome_at = [&](std::int64_t j) -> const Outcome& {
      auto it = std::lower_bound(probes.begin(), probes.end(), j);
      return outcomes[static_cast<std::size_t>(it - probes.begin())];
    };

    for (std::size_t g = 0; g < states.size(); ++g) {
      GuessState& s = states[g];
      for (int step = 0;
           step < iterations_per_phase && s.status == GuessState::Status::active;
           ++step) {
        if (audit && audit->collect_intervals) {
          audit->intervals[g].emplace_back(s.lo, s.hi);
        }
        const std::int64_t j = (s.lo + s.hi) / 2;
        const Outcome& oc = outcome_at(j);
        const auto [el, er] = errors_of(oc);
        switch (classify_guess_case(el, er, s.z_left, s.z_right)) {
          case GuessCase::feasible: {
            s.status = GuessState::Status::feasible;
            s.found_j = j;
            const double bound = s.z_left + s.z_right;
            auto [it, inserted] = feasible.try_emplace(j, Record{bound, oc});
            if (!inserted && bound < it->second.bound) it->second.bound = bound;
            break;
          }
          case GuessCase::infeasible:
            s.status = GuessState::Status::infeasible;
            break;
          case GuessCase::go_left:
            s.hi = j - 1;
            break;
          case GuessCase::go_right:
            s.lo = j + 1;
            break;
        }
        if (s.status == GuessState::Status::active && s.lo > s.hi) {
          s.status = GuessState::Status::exhausted;
        }
      }
    }

    if (audit) {
      ++audit->phases;
      ++audit->evaluator_calls;
      audit->max_probes_per_phase = std::max(
          audit->max_probes_per_phase, static_cast<std::int64_t>(probes.size()));
      audit->peak_words = std::max(
          audit->peak_words, static_cast<std::int64_t>(states.size()) * 4 +
                                 static_cast<std::int64_t>(feasible.size()) * 2 +
                                 static_cast<std::int64_t>(probes.size()));
    }
  }

  GuessSearchResult<Outcome> result;
  result.n_feasible = static_cast<std::int64_t>(feasible.size());
  for (const auto& [j, rec] : feasible) {  // ascending j: first strict min wins
    if (!result.found || rec.bound < result.best_bound) {
      result.found = true;
      result.best_j = j;
      result.best_bound = rec.bound;
      result.best_eval = rec.eval;
    }
  }
  return result;
}

}  // namespace splitstream

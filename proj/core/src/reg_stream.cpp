#include "splitstream/reg_stream.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "splitstream/guess_search.hpp"
#include "splitstream/oracle.hpp"
#include "splitstream/rng.hpp"

namespace splitstream {

namespace detail {

std::size_t gap_index(const std::vector<std::int64_t>& probes, std::int64_t x) {
  return static_cast<std::size_t>(
      std::lower_bound(probes.begin(), probes.end(), x) - probes.begin());
}

std::vector<RegProbeOutcome> evaluate_probes_from_gaps(
    const std::vector<std::int64_t>& probes, const std::vector<double>& cnt,
    const std::vector<double>& sum, const std::vector<double>& sum_sq,
    std::int64_t m) {
  const std::size_t n_gaps = probes.size() + 1;
  if (cnt.size() != n_gaps || sum.size() != n_gaps || sum_sq.size() != n_gaps) {
    throw InputError("evaluate_probes_from_gaps: gap arrays must have probes+1 slots");
  }
  double tc = 0, ts = 0, tq = 0;
  for (std::size_t g = 0; g < n_gaps; ++g) {
    tc += cnt[g];
    ts += sum[g];
    tq += sum_sq[g];
  }
  std::vector<RegProbeOutcome> out(probes.size());
  double cl = 0, sl = 0, ql = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    cl += cnt[i];
    sl += sum[i];
    ql += sum_sq[i];
    const double cr = tc - cl, sr = ts - sl, qr = tq - ql;
    RegProbeOutcome& oc = out[i];
    oc.j = probes[i];
    oc.cnt_left = cl;
    oc.mu = cl > 0 ? sl / cl : 0.0;
    oc.gamma = cr > 0 ? sr / cr : 0.0;
    oc.err_left =
        cl > 0 ? std::max(0.0, ql + oc.mu * oc.mu * cl - 2.0 * oc.mu * sl) : 0.0;
    oc.err_right =
        cr > 0 ? std::max(0.0, qr + oc.gamma * oc.gamma * cr - 2.0 * oc.gamma * sr)
               : 0.0;
    (void)m;
  }
  return out;
}

SplitEvaluation evaluation_from_outcome(const RegProbeOutcome& oc, std::int64_t m) {
  SplitEvaluation ev;
  ev.j = oc.j;
  ev.mu = oc.mu;
  ev.gamma = oc.gamma;
  ev.err_left = oc.err_left;
  ev.err_right = oc.err_right;
  ev.loss = (oc.err_left + oc.err_right) / static_cast<double>(m);
  return ev;
}

}  // namespace detail

SplitEvaluation exact_split_1pass(StreamHandle& stream) {
  stream.require_insert_only("exact_split_1pass");
  stream.require_nonempty("exact_split_1pass");
  const std::int64_t m = stream.meta().n_obs;

  struct Acc {
    double cnt{0}, sum{0}, sum_sq{0};
  };
  std::map<std::int64_t, Acc> per_value;
  stream.pass([&](const Observation& o) {
    Acc& a = per_value[o.x];
    a.cnt += 1;
    a.sum += o.y;
    a.sum_sq += o.y * o.y;
  });
  stream.note_space(4 * static_cast<std::int64_t>(per_value.size()));

  std::vector<std::int64_t> probes;
  std::vector<double> cnt, sum, sum_sq;
  probes.reserve(per_value.size());
  for (const auto& [x, a] : per_value) {
    probes.push_back(x);
    cnt.push_back(a.cnt);
    sum.push_back(a.sum);
    sum_sq.push_back(a.sum_sq);
  }
  cnt.push_back(0);
  sum.push_back(0);
  sum_sq.push_back(0);

  const auto outcomes = detail::evaluate_probes_from_gaps(probes, cnt, sum, sum_sq, m);
  std::vector<double> losses(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    losses[i] = (outcomes[i].err_left + outcomes[i].err_right) / static_cast<double>(m);
  }
  return detail::evaluation_from_outcome(outcomes[detail::argmin_with_ties(losses)], m);
}

std::int64_t CandidateSplitSet::locate_bucket(std::int64_t x) const {
  const auto it = std::lower_bound(splits.begin(), splits.end(), x);
  if (it == splits.begin() || it == splits.end()) {
    throw InputError("locate_bucket: x " + std::to_string(x) + " outside (0, N]");
  }
  return static_cast<std::int64_t>(it - splits.begin()) - 1;
}

CandidateSplitSet build_candidates(const RangeCountFn& estimate, double eps,
                                   std::int64_t m, std::int64_t domain_size) {
  if (!(eps > 0)) throw InputError("build_candidates: eps must be positive");
  if (m <= 0 || domain_size < 1) {
    throw InputError("build_candidates: m and N must be positive");
  }
  const double threshold = eps * static_cast<double>(m);
  CandidateSplitSet cs;
  cs.eps = eps;
  cs.splits.push_back(0);

  std::int64_t cur = 0;
  while (cur < domain_size) {
    if (estimate(cur + 1, domain_size) <= threshold) {
      cs.splits.push_back(domain_size);
      break;
    }
    // Smallest j' in (cur, N] whose bucket mass exceeds eps*m.
    std::int64_t lo = cur + 1, hi = domain_size;
    while (lo < hi) {
      const std::int64_t mid = (lo + hi) / 2;
      if (estimate(cur + 1, mid) > threshold) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    std::int64_t jp = lo;
    // Binary search assumes monotone masses; a sketch estimator may dip, so
    // walk down to the true smallest crossing to keep buckets light.
    while (jp > cur + 1 && estimate(cur + 1, jp - 1) > threshold) --jp;
    if (estimate(cur + 1, jp) >= 2.0 * threshold && jp - 1 > cur) {
      cs.splits.push_back(jp - 1);  // isolates the heavy value jp
    }
    cs.splits.push_back(jp);
    cur = jp;
  }
  if (cs.splits.back() != domain_size) cs.splits.push_back(domain_size);

  const double cap = 16.0 / eps + 4.0;
  if (static_cast<double>(cs.splits.size()) > cap) {
    throw BudgetError("candidate set has " + std::to_string(cs.splits.size()) +
                      " splits, over the 16/eps + 4 space guard");
  }
  return cs;
}

CandidateSplitSet build_candidates(const SampleSet& sample, double eps,
                                   std::int64_t m, std::int64_t domain_size) {
  return build_candidates(
      [&sample](std::int64_t a, std::int64_t b) {
        return estimate_range(sample, a, b).estimate;
      },
      eps, m, domain_size);
}

namespace {

// Pass 2 of the additive algorithms plus candidate scoring. Aggregates are
// exact (weight-signed when the stream has deletions), so the chosen
// candidate's loss is its true loss.
SplitEvaluation score_candidates(StreamHandle& stream, const CandidateSplitSet& cs,
                                 std::int64_t m, std::int64_t base_words) {
  const std::int64_t n_buckets = cs.n_buckets();
  std::vector<double> cnt(static_cast<std::size_t>(n_buckets), 0.0);
  std::vector<double> sum(static_cast<std::size_t>(n_buckets), 0.0);
  std::vector<double> sum_sq(static_cast<std::size_t>(n_buckets), 0.0);
  stream.pass_indexed([&](std::int64_t, const Observation& o, std::int8_t w) {
    const auto t = static_cast<std::size_t>(cs.locate_bucket(o.x));
    cnt[t] += w;
    sum[t] += w * o.y;
    sum_sq[t] += w * o.y * o.y;
  });
  stream.note_space(base_words +
                    static_cast<std::int64_t>(cs.splits.size()) + 3 * n_buckets);

  std::vector<std::int64_t> probes(cs.splits.begin() + 1, cs.splits.end());
  cnt.push_back(0);
  sum.push_back(0);
  sum_sq.push_back(0);
  const auto outcomes = detail::evaluate_probes_from_gaps(probes, cnt, sum, sum_sq, m);
  std::vector<double> losses(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    losses[i] = (outcomes[i].err_left + outcomes[i].err_right) / static_cast<double>(m);
  }
  return detail::evaluation_from_outcome(outcomes[detail::argmin_with_ties(losses)], m);
}

}  // namespace

SplitEvaluation additive_split_2pass(StreamHandle& stream, double eps,
                                     std::uint64_t seed, double c) {
  stream.require_insert_only("additive_split_2pass");
  stream.require_nonempty("additive_split_2pass");
  const std::int64_t m = stream.meta().n_obs;
  const std::int64_t n = stream.meta().domain_size;

  const double p = sampling_probability(c, n, eps, m);
  const SampleSet sample = sample_pass(stream, p, seed, false);  // pass 1
  const CandidateSplitSet cs = build_candidates(sample, eps, m, n);
  return score_candidates(stream, cs, m, sample.stored_words());  // pass 2
}

SplitEvaluation additive_split_2pass_dyadic(StreamHandle& stream, double eps,
                                            std::uint64_t seed) {
  stream.require_nonempty("additive_split_2pass_dyadic");
  if (!(eps > 0)) throw InputError("additive_split_2pass_dyadic: eps must be positive");
  const std::int64_t n = stream.meta().domain_size;
  const std::int64_t m_net = stream.dataset().net_size();
  if (m_net <= 0) throw InputError("additive_split_2pass_dyadic: empty net stream");

  DyadicCountMin cm(n, eps / 8.0, hash_combine(seed, 0xD1Dull));
  stream.pass_indexed([&](std::int64_t, const Observation& o, std::int8_t w) {
    cm.update(o.x, w);  // pass 1
  });
  stream.note_space(cm.stored_words());

  const CandidateSplitSet cs = build_candidates(
      [&cm](std::int64_t a, std::int64_t b) {
        return static_cast<double>(cm.range_estimate(a, b));
      },
      eps, m_net, n);
  return score_candidates(stream, cs, m_net, cm.stored_words());  // pass 2
}

namespace {

// Shared evaluation of a probe set in two passes: counts and label sums first,
// then squared sums; a prefix sweep turns the per-gap aggregates into side
// errors for every probe.
std::vector<detail::RegProbeOutcome> evaluate_probe_set_two_passes(
    StreamHandle& stream, const std::vector<std::int64_t>& probes,
    std::int64_t m, std::int64_t resident_words) {
  if (probes.empty()) return {};
  const std::size_t n_gaps = probes.size() + 1;
  std::vector<double> cnt(n_gaps, 0.0), sum(n_gaps, 0.0), sum_sq(n_gaps, 0.0);
  stream.pass([&](const Observation& o) {
    const std::size_t g = detail::gap_index(probes, o.x);
    cnt[g] += 1;
    sum[g] += o.y;
  });
  stream.pass([&](const Observation& o) {
    sum_sq[detail::gap_index(probes, o.x)] += o.y * o.y;
  });
  stream.note_space(resident_words + static_cast<std::int64_t>(probes.size()) +
                    3 * static_cast<std::int64_t>(n_gaps));
  return detail::evaluate_probes_from_gaps(probes, cnt, sum, sum_sq, m);
}

SplitEvaluation multiplicative_common(StreamHandle& stream, double eps,
                                      int iterations_per_phase) {
  stream.require_insert_only("multiplicative_split");
  stream.require_nonempty("multiplicative_split");
  if (!(eps > 0)) throw InputError("multiplicative_split: eps must be positive");
  const std::int64_t m = stream.meta().n_obs;
  const std::int64_t n = stream.meta().domain_size;
  const double big_m = stream.meta().label_max;

  const auto guesses = cartesian_pairs(regression_search_axis(m, big_m, eps));
  const auto n_guess_words = static_cast<std::int64_t>(guesses.size()) * 4;

  GuessSearchAudit audit;
  auto result = run_guess_search<detail::RegProbeOutcome>(
      guesses, n, iterations_per_phase,
      [&](const std::vector<std::int64_t>& probes) {
        return evaluate_probe_set_two_passes(stream, probes, m, n_guess_words);
      },
      [](const detail::RegProbeOutcome& oc) {
        return std::pair<double, double>(oc.err_left, oc.err_right);
      },
      &audit);
  stream.note_space(audit.peak_words);

  if (!result.found) {
    // The top guess bounds the total squared mass, so some probe is always
    // feasible; reaching this line means the search engine is broken.
    throw GuaranteeError("multiplicative_split: no feasible guess found");
  }
  return detail::evaluation_from_outcome(result.best_eval, m);
}

}  // namespace

SplitEvaluation multiplicative_split(StreamHandle& stream, double eps) {
  return multiplicative_common(stream, eps, 1);
}

SplitEvaluation multiplicative_split_lowpass(StreamHandle& stream, double eps,
                                             double beta) {
  if (!(beta > 0) || beta > 1) {
    throw InputError("multiplicative_split_lowpass: beta must be in (0, 1]");
  }
  const double log_n = std::log2(
      static_cast<double>(std::max<std::int64_t>(stream.meta().domain_size, 2)));
  const int r = static_cast<int>(std::ceil(beta * log_n));
  return multiplicative_common(stream, eps, r + 1);
}

}  // namespace splitstream

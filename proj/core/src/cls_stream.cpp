#include "splitstream/cls_stream.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "splitstream/guess_search.hpp"
#include "splitstream/oracle.hpp"
#include "splitstream/reg_stream.hpp"
#include "splitstream/rng.hpp"

namespace splitstream {

namespace detail {

std::vector<ClsProbeOutcome> evaluate_cls_probes_from_gaps(
    const std::vector<std::int64_t>& probes, const std::vector<std::int64_t>& neg,
    const std::vector<std::int64_t>& pos) {
  const std::size_t n_gaps = probes.size() + 1;
  if (neg.size() != n_gaps || pos.size() != n_gaps) {
    throw InputError("evaluate_cls_probes_from_gaps: gap arrays must have probes+1 slots");
  }
  std::int64_t tn = 0, tp = 0;
  for (std::size_t g = 0; g < n_gaps; ++g) {
    tn += neg[g];
    tp += pos[g];
  }
  std::vector<ClsProbeOutcome> out(probes.size());
  std::int64_t nl = 0, pl = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    nl += neg[i];
    pl += pos[i];
    out[i] = ClsProbeOutcome{probes[i], nl, pl, tn - nl, tp - pl};
  }
  return out;
}

ClsSplitEvaluation evaluation_from_outcome(const ClsProbeOutcome& oc,
                                           std::int64_t m) {
  ClsSplitEvaluation ev;
  ev.j = oc.j;
  ev.left_label = oc.pos_left >= oc.neg_left ? +1 : -1;
  ev.right_label = oc.pos_right >= oc.neg_right ? +1 : -1;
  ev.loss = static_cast<double>(oc.misclassified()) / static_cast<double>(m);
  return ev;
}

ClsSplitEvaluation pick_from_cls_sample(const SampleSet& sample, std::int64_t m,
                                        EstimatedLossCurve* curve_out) {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> neg, pos;
  for (const auto& o : sample.items) {  // items are sorted by x already
    if (values.empty() || values.back() != o.x) {
      values.push_back(o.x);
      neg.push_back(0);
      pos.push_back(0);
    }
    (o.y > 0 ? pos.back() : neg.back()) += 1;
  }

  if (values.empty()) {
    // Degenerate: nothing sampled. j = 0 sends everything right; the estimated
    // loss is zero by construction.
    if (curve_out) *curve_out = EstimatedLossCurve{sample.p, {}, {}, {}, {}};
    return ClsSplitEvaluation{0, +1, +1, 0.0};
  }

  std::int64_t tn = 0, tp = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    tn += neg[i];
    tp += pos[i];
  }

  const double scale = 1.0 / (sample.p * static_cast<double>(m));
  std::vector<double> losses(values.size());
  std::vector<std::int64_t> neg_prefix(values.size()), pos_prefix(values.size());
  std::int64_t nl = 0, pl = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    nl += neg[i];
    pl += pos[i];
    neg_prefix[i] = nl;
    pos_prefix[i] = pl;
    const std::int64_t mis = std::min(nl, pl) + std::min(tn - nl, tp - pl);
    losses[i] = static_cast<double>(mis) * scale;
  }

  const std::size_t best = argmin_with_ties(losses);
  const std::int64_t bnl = neg_prefix[best], bpl = pos_prefix[best];
  ClsSplitEvaluation ev;
  ev.j = values[best];
  ev.left_label = bpl >= bnl ? +1 : -1;
  ev.right_label = (tp - bpl) >= (tn - bnl) ? +1 : -1;
  ev.loss = losses[best];

  if (curve_out) {
    curve_out->p = sample.p;
    curve_out->values = std::move(values);
    curve_out->losses = std::move(losses);
    curve_out->neg_prefix = std::move(neg_prefix);
    curve_out->pos_prefix = std::move(pos_prefix);
  }
  return ev;
}

CategoricalPartition pick_partition_from_counts(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& counts, double p,
    std::int64_t m) {
  const auto n = static_cast<std::int64_t>(counts.size());
  if (n < 1) throw InputError("pick_partition_from_counts: no categories");
  if (n > kMaxCategoricalDomain) {
    throw BudgetError("categorical domain " + std::to_string(n) +
                      " exceeds the enumeration guard (" +
                      std::to_string(kMaxCategoricalDomain) + ")");
  }
  std::int64_t tn = 0, tp = 0;
  for (const auto& [ng, ps] : counts) {
    tn += ng;
    tp += ps;
  }

  // Same Gray-code walk as the exact enumerator, on sampled counts.
  const std::uint64_t n_masks = std::uint64_t{1} << (n - 1);
  std::int64_t na = counts[0].first, pa = counts[0].second;
  std::uint32_t mask = 1;
  std::int64_t best_mis = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_mask = 1;
  for (std::uint64_t sub = 0;; ++sub) {
    const std::int64_t mis = std::min(na, pa) + std::min(tn - na, tp - pa);
    if (mis < best_mis ||
        (mis == best_mis && partition_lex_less(mask, best_mask, n))) {
      best_mis = mis;
      best_mask = mask;
    }
    if (sub + 1 >= n_masks) break;
    const int flip = std::countr_zero(sub + 1);
    const std::int64_t cat = flip + 2;
    const std::uint32_t bit = std::uint32_t{1} << (cat - 1);
    mask ^= bit;
    const std::int64_t sign = (mask & bit) ? +1 : -1;
    na += sign * counts[static_cast<std::size_t>(cat - 1)].first;
    pa += sign * counts[static_cast<std::size_t>(cat - 1)].second;
  }

  CategoricalPartition part;
  part.mask_a = best_mask;
  part.loss = static_cast<double>(best_mis) / (p * static_cast<double>(m));
  return part;
}

}  // namespace detail

LabelRangeCounts exact_label_counts_pass(StreamHandle& stream, std::int64_t j) {
  stream.require_insert_only("exact_label_counts_pass");
  LabelRangeCounts c;
  stream.pass([&](const Observation& o) {
    if (o.x <= j) {
      (o.y > 0 ? c.pos_left : c.neg_left) += 1;
    } else {
      (o.y > 0 ? c.pos_right : c.neg_right) += 1;
    }
  });
  stream.note_space(4);
  return c;
}

ClsSplitEvaluation additive_cls_split_1pass(StreamHandle& stream, double eps,
                                            std::uint64_t seed, double c,
                                            EstimatedLossCurve* curve_out) {
  stream.require_insert_only("additive_cls_split_1pass");
  stream.require_nonempty("additive_cls_split_1pass");
  if (stream.meta().mode == Mode::regression) {
    throw InputError("additive_cls_split_1pass: labels must be -1/+1");
  }
  const std::int64_t m = stream.meta().n_obs;
  const std::int64_t n = stream.meta().domain_size;
  const double p = sampling_probability(c, n, eps, m);
  const SampleSet sample = sample_pass(stream, p, seed, /*label_aware=*/true);
  return detail::pick_from_cls_sample(sample, m, curve_out);
}

namespace {

ClsSplitEvaluation multiplicative_cls_common(StreamHandle& stream, double eps,
                                             int iterations_per_phase) {
  stream.require_insert_only("multiplicative_cls_split");
  stream.require_nonempty("multiplicative_cls_split");
  if (stream.meta().mode == Mode::regression) {
    throw InputError("multiplicative_cls_split: labels must be -1/+1");
  }
  if (!(eps > 0)) throw InputError("multiplicative_cls_split: eps must be positive");
  const std::int64_t m = stream.meta().n_obs;
  const std::int64_t n = stream.meta().domain_size;

  const auto guesses = cartesian_pairs(classification_guess_axis(m, eps));
  const auto n_guess_words = static_cast<std::int64_t>(guesses.size()) * 4;

  GuessSearchAudit audit;
  auto result = run_guess_search<detail::ClsProbeOutcome>(
      guesses, n, iterations_per_phase,
      [&](const std::vector<std::int64_t>& probes) {
        // One shared pass serves every probe: label counts per gap.
        const std::size_t n_gaps = probes.size() + 1;
        std::vector<std::int64_t> neg(n_gaps, 0), pos(n_gaps, 0);
        stream.pass([&](const Observation& o) {
          const std::size_t g = detail::gap_index(probes, o.x);
          (o.y > 0 ? pos[g] : neg[g]) += 1;
        });
        stream.note_space(n_guess_words + static_cast<std::int64_t>(probes.size()) +
                          2 * static_cast<std::int64_t>(n_gaps));
        return detail::evaluate_cls_probes_from_gaps(probes, neg, pos);
      },
      [](const detail::ClsProbeOutcome& oc) {
        return std::pair<double, double>(
            static_cast<double>(std::min(oc.neg_left, oc.pos_left)),
            static_cast<double>(std::min(oc.neg_right, oc.pos_right)));
      },
      &audit);
  stream.note_space(audit.peak_words);

  if (!result.found) {
    throw GuaranteeError("multiplicative_cls_split: no feasible guess found");
  }
  return detail::evaluation_from_outcome(result.best_eval, m);
}

}  // namespace

ClsSplitEvaluation multiplicative_cls_split(StreamHandle& stream, double eps) {
  return multiplicative_cls_common(stream, eps, 1);
}

ClsSplitEvaluation multiplicative_cls_split_lowpass(StreamHandle& stream,
                                                    double eps, double beta) {
  if (!(beta > 0) || beta > 1) {
    throw InputError("multiplicative_cls_split_lowpass: beta must be in (0, 1]");
  }
  const double log_n = std::log2(
      static_cast<double>(std::max<std::int64_t>(stream.meta().domain_size, 2)));
  const int r = static_cast<int>(std::ceil(beta * log_n));
  return multiplicative_cls_common(stream, eps, r + 1);
}

CategoricalPartition categorical_additive(StreamHandle& stream, double eps,
                                          std::uint64_t seed, double c) {
  stream.require_insert_only("categorical_additive");
  stream.require_nonempty("categorical_additive");
  if (stream.meta().mode != Mode::categorical) {
    throw InputError("categorical_additive: categorical mode required");
  }
  if (!(eps > 0)) throw InputError("categorical_additive: eps must be positive");
  const std::int64_t m = stream.meta().n_obs;
  const std::int64_t n = stream.meta().domain_size;
  if (n > kMaxCategoricalDomain) {
    throw BudgetError("categorical domain " + std::to_string(n) +
                      " exceeds the enumeration guard (" +
                      std::to_string(kMaxCategoricalDomain) + ")");
  }

  // Per-category frequencies all need to be accurate to eps*m/N, hence the
  // heavier N/(eps*m) rate rather than the ln(N)/(eps*m) one.
  const double p =
      std::min(1.0, c * static_cast<double>(n) / (eps * static_cast<double>(m)));
  std::vector<std::pair<std::int64_t, std::int64_t>> counts(
      static_cast<std::size_t>(n), {0, 0});
  stream.pass_indexed([&](std::int64_t pos, const Observation& o, std::int8_t) {
    if (keyed_bernoulli(seed, static_cast<std::uint64_t>(pos), p)) {
      auto& [ng, ps] = counts[static_cast<std::size_t>(o.x - 1)];
      (o.y > 0 ? ps : ng) += 1;
    }
  });
  stream.note_space(2 * n);
  return detail::pick_partition_from_counts(counts, p, m);
}

}  // namespace splitstream

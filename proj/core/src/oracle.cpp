#include "splitstream/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace splitstream {

std::vector<std::int64_t> CategoricalPartition::side_a(
    std::int64_t n_categories) const {
  std::vector<std::int64_t> out;
  for (std::int64_t c = 1; c <= n_categories; ++c) {
    if (mask_a & (std::uint32_t{1} << (c - 1))) out.push_back(c);
  }
  return out;
}

std::vector<std::int64_t> CategoricalPartition::side_b(
    std::int64_t n_categories) const {
  std::vector<std::int64_t> out;
  for (std::int64_t c = 1; c <= n_categories; ++c) {
    if (!(mask_a & (std::uint32_t{1} << (c - 1)))) out.push_back(c);
  }
  return out;
}

namespace detail {

std::size_t argmin_with_ties(const std::vector<double>& losses) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : losses) best = std::min(best, v);
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (losses[i] <= best + kLossTieTolerance) return i;
  }
  return 0;  // unreachable for nonempty input
}

bool partition_lex_less(std::uint32_t a, std::uint32_t b,
                        std::int64_t n_categories) {
  std::vector<std::int64_t> va, vb;
  for (std::int64_t c = 1; c <= n_categories; ++c) {
    const std::uint32_t bit = std::uint32_t{1} << (c - 1);
    if (a & bit) va.push_back(c);
    if (b & bit) vb.push_back(c);
  }
  return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
}

}  // namespace detail

namespace {

double non_negative(double v) { return v < 0.0 ? 0.0 : v; }

struct RegDistinct {
  std::vector<std::int64_t> value;
  std::vector<double> cnt, sum, sum_sq;
};

RegDistinct reg_distinct(const Dataset& ds) {
  std::vector<Observation> sorted = ds.obs();
  std::sort(sorted.begin(), sorted.end(),
            [](const Observation& a, const Observation& b) { return a.x < b.x; });
  RegDistinct d;
  for (const auto& o : sorted) {
    if (d.value.empty() || d.value.back() != o.x) {
      d.value.push_back(o.x);
      d.cnt.push_back(0);
      d.sum.push_back(0);
      d.sum_sq.push_back(0);
    }
    d.cnt.back() += 1.0;
    d.sum.back() += o.y;
    d.sum_sq.back() += o.y * o.y;
  }
  return d;
}

struct ClsDistinct {
  std::vector<std::int64_t> value;
  std::vector<std::int64_t> neg, pos;
};

ClsDistinct cls_distinct(const Dataset& ds) {
  std::vector<Observation> sorted = ds.obs();
  std::sort(sorted.begin(), sorted.end(),
            [](const Observation& a, const Observation& b) { return a.x < b.x; });
  ClsDistinct d;
  for (const auto& o : sorted) {
    if (d.value.empty() || d.value.back() != o.x) {
      d.value.push_back(o.x);
      d.neg.push_back(0);
      d.pos.push_back(0);
    }
    (o.y > 0 ? d.pos.back() : d.neg.back()) += 1;
  }
  return d;
}

// Loss at the candidate whose left side is the first `k` distinct values.
SplitEvaluation reg_candidate_eval(const RegDistinct& d, std::size_t k,
                                   std::int64_t m, double tot_cnt,
                                   double tot_sum, double tot_sq) {
  SplitEvaluation ev;
  double cl = 0, sl = 0, ql = 0;
  for (std::size_t i = 0; i < k; ++i) {
    cl += d.cnt[i];
    sl += d.sum[i];
    ql += d.sum_sq[i];
  }
  const double cr = tot_cnt - cl, sr = tot_sum - sl, qr = tot_sq - ql;
  ev.mu = cl > 0 ? sl / cl : 0.0;
  ev.gamma = cr > 0 ? sr / cr : 0.0;
  ev.err_left = cl > 0 ? non_negative(ql + ev.mu * ev.mu * cl - 2.0 * ev.mu * sl) : 0.0;
  ev.err_right =
      cr > 0 ? non_negative(qr + ev.gamma * ev.gamma * cr - 2.0 * ev.gamma * sr) : 0.0;
  ev.loss = (ev.err_left + ev.err_right) / static_cast<double>(m);
  return ev;
}

}  // namespace

SplitEvaluation oracle_regression(const Dataset& ds) {
  if (ds.has_deletions()) return oracle_regression(ds.net());
  if (ds.empty()) throw InputError("oracle: empty dataset");
  if (ds.meta().mode != Mode::regression) {
    throw InputError("oracle_regression requires regression labels");
  }
  const RegDistinct d = reg_distinct(ds);
  const std::int64_t m = ds.size();

  double tc = 0, ts = 0, tq = 0;
  for (std::size_t i = 0; i < d.value.size(); ++i) {
    tc += d.cnt[i];
    ts += d.sum[i];
    tq += d.sum_sq[i];
  }

  // One prefix sweep; candidates are the distinct values themselves.
  std::vector<double> losses(d.value.size());
  double cl = 0, sl = 0, ql = 0;
  for (std::size_t i = 0; i < d.value.size(); ++i) {
    cl += d.cnt[i];
    sl += d.sum[i];
    ql += d.sum_sq[i];
    const double cr = tc - cl, sr = ts - sl, qr = tq - ql;
    const double mu = cl > 0 ? sl / cl : 0.0;
    const double ga = cr > 0 ? sr / cr : 0.0;
    const double el = cl > 0 ? non_negative(ql + mu * mu * cl - 2.0 * mu * sl) : 0.0;
    const double er = cr > 0 ? non_negative(qr + ga * ga * cr - 2.0 * ga * sr) : 0.0;
    losses[i] = (el + er) / static_cast<double>(m);
  }

  const std::size_t best = detail::argmin_with_ties(losses);
  SplitEvaluation ev = reg_candidate_eval(d, best + 1, m, tc, ts, tq);
  ev.j = d.value[best];
  return ev;
}

ClsSplitEvaluation oracle_classification(const Dataset& ds) {
  if (ds.has_deletions()) return oracle_classification(ds.net());
  if (ds.empty()) throw InputError("oracle: empty dataset");
  if (ds.meta().mode == Mode::regression) {
    throw InputError("oracle_classification requires -1/+1 labels");
  }
  const ClsDistinct d = cls_distinct(ds);
  const std::int64_t m = ds.size();

  std::int64_t tn = 0, tp = 0;
  for (std::size_t i = 0; i < d.value.size(); ++i) {
    tn += d.neg[i];
    tp += d.pos[i];
  }

  std::vector<double> losses(d.value.size());
  std::int64_t nl = 0, pl = 0;
  for (std::size_t i = 0; i < d.value.size(); ++i) {
    nl += d.neg[i];
    pl += d.pos[i];
    const std::int64_t mis =
        std::min(nl, pl) + std::min(tn - nl, tp - pl);
    losses[i] = static_cast<double>(mis) / static_cast<double>(m);
  }

  const std::size_t best = detail::argmin_with_ties(losses);
  nl = pl = 0;
  for (std::size_t i = 0; i <= best; ++i) {
    nl += d.neg[i];
    pl += d.pos[i];
  }
  ClsSplitEvaluation ev;
  ev.j = d.value[best];
  ev.left_label = pl >= nl ? +1 : -1;
  ev.right_label = (tp - pl) >= (tn - nl) ? +1 : -1;
  ev.loss = losses[best];
  return ev;
}

CategoricalPartition oracle_categorical(const Dataset& ds) {
  if (ds.has_deletions()) return oracle_categorical(ds.net());
  if (ds.empty()) throw InputError("oracle: empty dataset");
  if (ds.meta().mode != Mode::categorical) {
    throw InputError("oracle_categorical requires categorical mode");
  }
  const std::int64_t n = ds.meta().domain_size;
  if (n > kMaxCategoricalDomain) {
    throw BudgetError("categorical domain " + std::to_string(n) +
                      " exceeds the enumeration guard (" +
                      std::to_string(kMaxCategoricalDomain) + ")");
  }

  std::vector<std::int64_t> neg(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> pos(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& o : ds.obs()) {
    (o.y > 0 ? pos : neg)[static_cast<std::size_t>(o.x)] += 1;
  }
  std::int64_t tn = 0, tp = 0;
  for (std::int64_t c = 1; c <= n; ++c) {
    tn += neg[static_cast<std::size_t>(c)];
    tp += pos[static_cast<std::size_t>(c)];
  }

  // Gray-code walk over the 2^(N-1) partitions with category 1 pinned to A:
  // consecutive subsets differ in one category, so side counts update in O(1).
  const std::uint64_t n_masks = std::uint64_t{1} << (n - 1);
  std::int64_t na = neg[1], pa = pos[1];
  std::uint32_t mask = 1;
  std::int64_t best_mis = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_mask = 1;

  for (std::uint64_t sub = 0;; ++sub) {
    const std::int64_t mis =
        std::min(na, pa) + std::min(tn - na, tp - pa);
    if (mis < best_mis ||
        (mis == best_mis && detail::partition_lex_less(mask, best_mask, n))) {
      best_mis = mis;
      best_mask = mask;
    }
    if (sub + 1 >= n_masks) break;
    const int flip = std::countr_zero(sub + 1);  // gray(sub) ^ gray(sub+1)
    const std::int64_t cat = flip + 2;           // gray bit b <-> category b+2
    const std::uint32_t bit = std::uint32_t{1} << (cat - 1);
    mask ^= bit;
    const std::int64_t sign = (mask & bit) ? +1 : -1;
    na += sign * neg[static_cast<std::size_t>(cat)];
    pa += sign * pos[static_cast<std::size_t>(cat)];
  }

  CategoricalPartition part;
  part.mask_a = best_mask;
  part.loss = static_cast<double>(best_mis) / static_cast<double>(ds.size());
  return part;
}

OptResult oracle_solve(const Dataset& ds, bool with_curve) {
  OptResult res;
  switch (ds.meta().mode) {
    case Mode::regression: {
      auto ev = oracle_regression(ds);
      res.opt = ev.loss;
      res.best = ev;
      break;
    }
    case Mode::classification: {
      auto ev = oracle_classification(ds);
      res.opt = ev.loss;
      res.best = ev;
      break;
    }
    case Mode::categorical: {
      auto ev = oracle_categorical(ds);
      res.opt = ev.loss;
      res.best = ev;
      return res;  // no per-j curve in categorical mode
    }
  }
  if (with_curve) res.curve = loss_curve(ds);
  return res;
}

std::vector<double> loss_curve(const Dataset& ds) {
  if (ds.has_deletions()) return loss_curve(ds.net());
  if (ds.empty()) throw InputError("loss curve: empty dataset");
  const std::int64_t n = ds.meta().domain_size;
  std::vector<double> curve(static_cast<std::size_t>(n));
  const std::int64_t m = ds.size();

  if (ds.meta().mode == Mode::regression) {
    const RegDistinct d = reg_distinct(ds);
    double tc = 0, ts = 0, tq = 0;
    for (std::size_t i = 0; i < d.value.size(); ++i) {
      tc += d.cnt[i];
      ts += d.sum[i];
      tq += d.sum_sq[i];
    }
    // Loss is constant between distinct values; walk j with a pointer.
    std::size_t i = 0;
    double cl = 0, sl = 0, ql = 0, current;
    {
      const double mu = 0.0, ga = tc > 0 ? ts / tc : 0.0;
      (void)mu;
      current = non_negative(tq + ga * ga * tc - 2.0 * ga * ts) / static_cast<double>(m);
    }
    for (std::int64_t j = 1; j <= n; ++j) {
      while (i < d.value.size() && d.value[i] <= j) {
        cl += d.cnt[i];
        sl += d.sum[i];
        ql += d.sum_sq[i];
        ++i;
        const double cr = tc - cl, sr = ts - sl, qr = tq - ql;
        const double mu = cl > 0 ? sl / cl : 0.0;
        const double ga = cr > 0 ? sr / cr : 0.0;
        const double el = cl > 0 ? non_negative(ql + mu * mu * cl - 2.0 * mu * sl) : 0.0;
        const double er = cr > 0 ? non_negative(qr + ga * ga * cr - 2.0 * ga * sr) : 0.0;
        current = (el + er) / static_cast<double>(m);
      }
      curve[static_cast<std::size_t>(j - 1)] = current;
    }
  } else {
    const ClsDistinct d = cls_distinct(ds);
    std::int64_t tn = 0, tp = 0;
    for (std::size_t i = 0; i < d.value.size(); ++i) {
      tn += d.neg[i];
      tp += d.pos[i];
    }
    std::size_t i = 0;
    std::int64_t nl = 0, pl = 0;
    double current = static_cast<double>(std::min(tn, tp)) / static_cast<double>(m);
    for (std::int64_t j = 1; j <= n; ++j) {
      while (i < d.value.size() && d.value[i] <= j) {
        nl += d.neg[i];
        pl += d.pos[i];
        ++i;
        const std::int64_t mis = std::min(nl, pl) + std::min(tn - nl, tp - pl);
        current = static_cast<double>(mis) / static_cast<double>(m);
      }
      curve[static_cast<std::size_t>(j - 1)] = current;
    }
  }
  return curve;
}

SplitEvaluation evaluate_split(const Dataset& ds, std::int64_t j) {
  if (ds.has_deletions()) return evaluate_split(ds.net(), j);
  if (ds.empty()) throw InputError("evaluate_split: empty dataset");
  if (j < 0 || j > ds.meta().domain_size) {
    throw InputError("evaluate_split: j outside [0, N]");
  }
  double cl = 0, sl = 0, ql = 0, cr = 0, sr = 0, qr = 0;
  for (const auto& o : ds.obs()) {
    if (o.x <= j) {
      cl += 1;
      sl += o.y;
      ql += o.y * o.y;
    } else {
      cr += 1;
      sr += o.y;
      qr += o.y * o.y;
    }
  }
  SplitEvaluation ev;
  ev.j = j;
  ev.mu = cl > 0 ? sl / cl : 0.0;
  ev.gamma = cr > 0 ? sr / cr : 0.0;
  ev.err_left = cl > 0 ? non_negative(ql + ev.mu * ev.mu * cl - 2.0 * ev.mu * sl) : 0.0;
  ev.err_right =
      cr > 0 ? non_negative(qr + ev.gamma * ev.gamma * cr - 2.0 * ev.gamma * sr) : 0.0;
  ev.loss = (ev.err_left + ev.err_right) / static_cast<double>(ds.size());
  return ev;
}

ClsSplitEvaluation evaluate_cls_split(const Dataset& ds, std::int64_t j) {
  if (ds.has_deletions()) return evaluate_cls_split(ds.net(), j);
  if (ds.empty()) throw InputError("evaluate_cls_split: empty dataset");
  if (j < 0 || j > ds.meta().domain_size) {
    throw InputError("evaluate_cls_split: j outside [0, N]");
  }
  std::int64_t nl = 0, pl = 0, nr = 0, pr = 0;
  for (const auto& o : ds.obs()) {
    if (o.x <= j) {
      (o.y > 0 ? pl : nl) += 1;
    } else {
      (o.y > 0 ? pr : nr) += 1;
    }
  }
  ClsSplitEvaluation ev;
  ev.j = j;
  ev.left_label = pl >= nl ? +1 : -1;
  ev.right_label = pr >= nr ? +1 : -1;
  ev.loss = static_cast<double>(std::min(nl, pl) + std::min(nr, pr)) /
            static_cast<double>(ds.size());
  return ev;
}

CategoricalPartition evaluate_partition(const Dataset& ds, std::uint32_t mask_a) {
  if (ds.has_deletions()) return evaluate_partition(ds.net(), mask_a);
  if (ds.empty()) throw InputError("evaluate_partition: empty dataset");
  if (!(mask_a & 1u)) throw InputError("evaluate_partition: category 1 must be in A");
  std::int64_t na = 0, pa = 0, nb = 0, pb = 0;
  for (const auto& o : ds.obs()) {
    const bool in_a = mask_a & (std::uint32_t{1} << (o.x - 1));
    if (in_a) {
      (o.y > 0 ? pa : na) += 1;
    } else {
      (o.y > 0 ? pb : nb) += 1;
    }
  }
  CategoricalPartition part;
  part.mask_a = mask_a;
  part.loss = static_cast<double>(std::min(na, pa) + std::min(nb, pb)) /
              static_cast<double>(ds.size());
  return part;
}

std::pair<double, double> subset_stats(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double g = 0.0;
  for (double v : values) g += (v - mean) * (v - mean);
  return {mean, g};
}

bool check_monotonicity(const std::vector<double>& full,
                        const std::vector<double>& sub) {
  std::vector<double> f = full, s = sub;
  std::sort(f.begin(), f.end());
  std::sort(s.begin(), s.end());
  if (!std::includes(f.begin(), f.end(), s.begin(), s.end())) {
    throw InputError("check_monotonicity: second argument is not a sub-multiset");
  }
  const double g_full = subset_stats(full).second;
  const double g_sub = subset_stats(sub).second;
  return g_sub <= g_full * (1.0 + 1e-12) + 1e-9;
}

bool check_split_shift(const Dataset& ds, std::int64_t j, std::int64_t j_prime) {
  if (ds.meta().mode != Mode::regression) {
    throw InputError("check_split_shift requires regression mode");
  }
  if (j >= j_prime) throw InputError("check_split_shift requires j < j'");
  const Dataset base = ds.has_deletions() ? ds.net() : ds;
  const double l_j = evaluate_split(base, j).loss;
  const double l_jp = evaluate_split(base, j_prime).loss;
  std::int64_t b = 0;
  for (const auto& o : base.obs()) {
    if (o.x > j && o.x <= j_prime) ++b;
  }
  const double big_m = base.meta().label_max;
  const double bound =
      l_j + 5.0 * static_cast<double>(b) * big_m * big_m /
                (4.0 * static_cast<double>(base.size()));
  return l_jp <= bound * (1.0 + 1e-12) + 1e-9;
}

}  // namespace splitstream

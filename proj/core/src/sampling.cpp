#include "splitstream/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "splitstream/rng.hpp"

namespace splitstream {

double sampling_probability(double c, std::int64_t domain_size, double eps,
                            std::int64_t m) {
  if (c <= 0 || eps <= 0 || m <= 0) {
    throw InputError("sampling_probability: c, eps and m must be positive");
  }
  const double n = static_cast<double>(std::max<std::int64_t>(domain_size, 2));
  const double p = c * std::log(n) / (eps * static_cast<double>(m));
  return std::min(1.0, p);
}

SampleSet sample_pass(StreamHandle& stream, double p, std::uint64_t seed,
                      bool label_aware) {
  stream.require_insert_only("sample_pass");
  if (!(p > 0.0) || p > 1.0) throw InputError("sample_pass: p must be in (0, 1]");

  SampleSet s;
  s.p = p;
  s.label_aware = label_aware;
  s.seed = seed;
  stream.pass_indexed([&](std::int64_t pos, const Observation& o, std::int8_t) {
    if (keyed_bernoulli(seed, static_cast<std::uint64_t>(pos), p)) {
      s.items.push_back(o);
    }
  });
  // Stream order is the tie-break for equal x, so a stable sort suffices.
  std::stable_sort(s.items.begin(), s.items.end(),
                   [](const Observation& a, const Observation& b) { return a.x < b.x; });
  if (label_aware) {
    s.pos_prefix.resize(s.items.size() + 1, 0);
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      s.pos_prefix[i + 1] = s.pos_prefix[i] + (s.items[i].y > 0 ? 1 : 0);
    }
  }
  stream.note_space(s.stored_words());
  return s;
}

RangeEstimate estimate_range(const SampleSet& sample, std::int64_t a,
                             std::int64_t b, std::optional<int> label) {
  RangeEstimate est;
  est.a = a;
  est.b = b;
  est.label = label;
  if (a > b) return est;
  const auto lo = std::lower_bound(
      sample.items.begin(), sample.items.end(), a,
      [](const Observation& o, std::int64_t v) { return o.x < v; });
  const auto hi = std::upper_bound(
      sample.items.begin(), sample.items.end(), b,
      [](std::int64_t v, const Observation& o) { return v < o.x; });
  const std::int64_t lo_i = lo - sample.items.begin();
  const std::int64_t hi_i = hi - sample.items.begin();
  const std::int64_t total = hi_i - lo_i;
  if (!label) {
    est.k = total;
  } else {
    if (!sample.label_aware) {
      throw InputError("estimate_range: label filter needs a label-aware sample");
    }
    const std::int64_t pos = sample.pos_prefix[static_cast<std::size_t>(hi_i)] -
                             sample.pos_prefix[static_cast<std::size_t>(lo_i)];
    est.k = *label > 0 ? pos : total - pos;
  }
  est.estimate = static_cast<double>(est.k) / sample.p;
  return est;
}

ThresholdReport verify_threshold_separation(std::int64_t m, double alpha,
                                            std::int64_t trials,
                                            std::uint64_t seed, double c,
                                            std::int64_t domain_size) {
  if (m <= 0 || trials <= 0) {
    throw InputError("verify_threshold_separation: m and trials must be positive");
  }
  const double t = std::pow(static_cast<double>(m), alpha);
  const std::int64_t heavy = static_cast<std::int64_t>(std::ceil(4.0 * t));
  const std::int64_t light = static_cast<std::int64_t>(std::floor(t / 8.0));
  if (heavy + light > m) {
    throw InputError("verify_threshold_separation: masses exceed m");
  }

  // Worst-case stream: the heavy range holds exactly ceil(4*m^alpha) elements,
  // the light one floor(m^alpha/8); the rest of the mass sits elsewhere.
  std::vector<Observation> obs;
  obs.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < heavy; ++i) obs.push_back({1, 0.0});
  for (std::int64_t i = 0; i < light; ++i) obs.push_back({2, 0.0});
  for (std::int64_t i = heavy + light; i < m; ++i) obs.push_back({3, 0.0});
  Dataset ds(std::move(obs),
             DatasetMeta{.n_obs = m,
                         .domain_size = std::max<std::int64_t>(domain_size, 3),
                         .label_max = 1.0,
                         .mode = Mode::regression});

  ThresholdReport rep;
  rep.trials = trials;
  rep.p = std::min(1.0, c * std::log(static_cast<double>(ds.meta().domain_size)) / t);
  rep.clamped = rep.p >= 1.0;
  rep.budget = 1.0 / static_cast<double>(ds.meta().domain_size);

  for (std::int64_t trial = 0; trial < trials; ++trial) {
    StreamHandle stream(ds);
    const std::uint64_t trial_seed = hash_combine(seed, static_cast<std::uint64_t>(trial));
    SampleSet s = sample_pass(stream, rep.p, trial_seed, false);
    const double est_heavy = estimate_range(s, 1, 1).estimate;
    const double est_light = estimate_range(s, 2, 2).estimate;
    if (est_heavy < 2.0 * t) ++rep.clause1_violations;
    if (est_light > t) ++rep.clause2_violations;
  }
  return rep;
}

}  // namespace splitstream

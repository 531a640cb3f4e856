#include "splitstream/generator.hpp"

#include <algorithm>
#include <cmath>

#include "splitstream/rng.hpp"

namespace splitstream {

const char* generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::piecewise_step: return "piecewise-step";
    case GeneratorKind::two_cluster: return "two-cluster";
    case GeneratorKind::uniform_noise: return "uniform-noise";
    case GeneratorKind::time_drift: return "time-drift";
  }
  return "?";
}

GeneratorKind generator_kind_from_name(const std::string& name) {
  if (name == "piecewise-step") return GeneratorKind::piecewise_step;
  if (name == "two-cluster") return GeneratorKind::two_cluster;
  if (name == "uniform-noise") return GeneratorKind::uniform_noise;
  if (name == "time-drift") return GeneratorKind::time_drift;
  throw InputError("unknown generator kind '" + name + "'");
}

namespace {

Mode default_mode(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::piecewise_step: return Mode::regression;
    case GeneratorKind::two_cluster: return Mode::classification;
    default: return Mode::regression;
  }
}

double clamp01m(double y, double m) { return std::clamp(y, 0.0, m); }

}  // namespace

std::int64_t planted_split(const GeneratorSpec& spec) {
  return std::max<std::int64_t>(1, spec.domain_size / 2);
}

Dataset generate(const GeneratorSpec& spec) {
  if (spec.n_obs < 0) throw InputError("generator: negative m");
  if (spec.domain_size < 1) throw InputError("generator: N must be >= 1");
  if (spec.noise < 0.0 || spec.noise > 1.0) {
    throw InputError("generator: noise must be in [0, 1]");
  }
  const Mode mode = spec.mode.value_or(default_mode(spec.kind));
  if (spec.kind == GeneratorKind::piecewise_step && mode != Mode::regression) {
    throw InputError("piecewise-step generates regression data only");
  }
  if (spec.kind == GeneratorKind::two_cluster && mode == Mode::regression) {
    throw InputError("two-cluster generates labeled (+1/-1) data only");
  }
  if (mode == Mode::regression && spec.label_max <= 0.0) {
    throw InputError("generator: label bound must be positive");
  }

  const std::int64_t n = spec.domain_size;
  const double big_m = spec.label_max;
  const std::int64_t jstar = planted_split(spec);
  Rng rng(hash_combine(spec.seed, static_cast<std::uint64_t>(spec.kind)));

  std::vector<Observation> obs;
  obs.reserve(static_cast<std::size_t>(spec.n_obs));

  for (std::int64_t i = 0; i < spec.n_obs; ++i) {
    Observation o;
    switch (spec.kind) {
      case GeneratorKind::piecewise_step: {
        o.x = rng.next_int(1, n);
        const double base = o.x <= jstar ? 0.75 * big_m : 0.25 * big_m;
        const double jitter = spec.noise * (big_m / 4.0) * (2.0 * rng.next_unit() - 1.0);
        o.y = clamp01m(base + jitter, big_m);
        break;
      }
      case GeneratorKind::two_cluster: {
        o.x = rng.next_int(1, n);
        int label = o.x <= jstar ? +1 : -1;
        if (rng.next_bernoulli(spec.noise)) label = -label;
        o.y = label;
        break;
      }
      case GeneratorKind::uniform_noise: {
        o.x = rng.next_int(1, n);
        if (mode == Mode::regression) {
          o.y = big_m * rng.next_unit();
        } else {
          o.y = rng.next_bernoulli(0.5) ? +1.0 : -1.0;
        }
        break;
      }
      case GeneratorKind::time_drift: {
        // Window of width ~N/2 sliding with the stream position.
        const double tau = spec.n_obs > 1
                               ? static_cast<double>(i) / (spec.n_obs - 1)
                               : 0.0;
        const std::int64_t half = std::max<std::int64_t>(1, n / 2);
        const std::int64_t lo =
            1 + static_cast<std::int64_t>(tau * static_cast<double>(n - half));
        o.x = rng.next_int(lo, std::min(n, lo + half - 1));
        if (mode == Mode::regression) {
          const double base = big_m * static_cast<double>(o.x) / static_cast<double>(n);
          const double jitter =
              spec.noise * (big_m / 4.0) * (2.0 * rng.next_unit() - 1.0);
          o.y = clamp01m(base + jitter, big_m);
        } else {
          int label = o.x <= jstar ? +1 : -1;
          if (rng.next_bernoulli(spec.noise)) label = -label;
          o.y = label;
        }
        break;
      }
    }
    obs.push_back(o);
  }

  DatasetMeta meta;
  meta.domain_size = n;
  meta.label_max = mode == Mode::regression ? big_m : 1.0;
  meta.mode = mode;
  return Dataset(std::move(obs), meta);
}

MultiDataset generate_multi(const GeneratorSpec& spec, std::int64_t n_attrs) {
  if (n_attrs < 1) throw InputError("generator: need at least one attribute");
  Dataset first = generate(spec);

  MultiDataset mds;
  mds.n_attrs = n_attrs;
  mds.meta = first.meta();
  mds.labels.reserve(first.obs().size());
  mds.columns.resize(static_cast<std::size_t>(n_attrs));
  for (const auto& o : first.obs()) {
    mds.columns[0].push_back(o.x);
    mds.labels.push_back(o.y);
  }
  for (std::int64_t q = 2; q <= n_attrs; ++q) {
    Rng rng(hash_combine(spec.seed, 0xa77ULL + static_cast<std::uint64_t>(q)));
    auto& col = mds.columns[static_cast<std::size_t>(q - 1)];
    col.reserve(first.obs().size());
    for (std::size_t i = 0; i < first.obs().size(); ++i) {
      col.push_back(rng.next_int(1, spec.domain_size));
    }
  }
  return mds;
}

}  // namespace splitstream

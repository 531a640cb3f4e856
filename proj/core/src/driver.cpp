#include "splitstream/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "splitstream/cls_stream.hpp"
#include "splitstream/io.hpp"
#include "splitstream/mpc.hpp"
#include "splitstream/oracle.hpp"
#include "splitstream/reg_stream.hpp"
#include "splitstream/rng.hpp"

namespace splitstream {

namespace {

struct AlgoEntry {
  Algo algo;
  const char* name;
  Mode mode;
  bool mpc;
};

constexpr AlgoEntry kAlgos[] = {
    {Algo::reg_exact, "reg-exact", Mode::regression, false},
    {Algo::reg_additive, "reg-additive", Mode::regression, false},
    {Algo::reg_mult, "reg-mult", Mode::regression, false},
    {Algo::reg_lowpass, "reg-lowpass", Mode::regression, false},
    {Algo::cls_additive, "cls-additive", Mode::classification, false},
    {Algo::cls_mult, "cls-mult", Mode::classification, false},
    {Algo::cls_lowpass, "cls-lowpass", Mode::classification, false},
    {Algo::cat_additive, "cat-additive", Mode::categorical, false},
    {Algo::mpc_reg_additive, "mpc-reg-additive", Mode::regression, true},
    {Algo::mpc_reg_mult, "mpc-reg-mult", Mode::regression, true},
    {Algo::mpc_cls_additive, "mpc-cls-additive", Mode::classification, true},
    {Algo::mpc_cls_mult, "mpc-cls-mult", Mode::classification, true},
};

const AlgoEntry& entry(Algo a) {
  for (const auto& e : kAlgos) {
    if (e.algo == a) return e;
  }
  throw InputError("unknown algorithm id");
}

}  // namespace

const char* algo_name(Algo a) { return entry(a).name; }

Algo algo_from_name(const std::string& name) {
  for (const auto& e : kAlgos) {
    if (name == e.name) return e.algo;
  }
  throw InputError("unknown algorithm '" + name +
                   "' (try e.g. reg-exact, reg-additive, cls-additive)");
}

Mode algo_mode(Algo a) { return entry(a).mode; }
bool algo_is_mpc(Algo a) { return entry(a).mpc; }

RunReport run_algorithm(const Dataset& ds, const RunParams& params) {
  if (ds.empty()) throw InputError("run: empty dataset");
  const Mode want = algo_mode(params.algo);
  const Mode have = ds.meta().mode;
  if (want != have) {
    throw InputError(std::string("algorithm ") + algo_name(params.algo) +
                     " expects " + mode_name(want) + " data, got " +
                     mode_name(have));
  }
  if (params.deletions && params.algo != Algo::reg_additive) {
    throw InputError("--deletions is supported by reg-additive only");
  }
  if (ds.has_deletions() && params.algo != Algo::reg_additive) {
    throw InputError(std::string("algorithm ") + algo_name(params.algo) +
                     " requires an insert-only stream");
  }
  if (ds.has_deletions() && !params.deletions) {
    throw InputError(
        "stream carries w=-1 deletions; pass --deletions to enable the "
        "dyadic estimator");
  }

  RunReport rep;
  rep.algo = algo_name(params.algo);
  rep.mode = mode_name(have);
  rep.m = ds.size();
  rep.domain_size = ds.meta().domain_size;
  rep.n_distinct = ds.meta().n_distinct;
  rep.label_max = ds.meta().label_max;
  rep.eps = params.eps;
  rep.beta = params.beta;
  rep.seed = params.seed;

  const double big_m = ds.meta().label_max;
  const auto t0 = std::chrono::steady_clock::now();

  StreamHandle stream(ds);
  std::uint32_t cat_mask = 0;
  MpcRunInfo mpc_info;
  MpcConfig mpc_cfg;
  mpc_cfg.machines = params.machines;
  mpc_cfg.budget_words = params.budget_words;
  mpc_cfg.eps = params.eps;
  mpc_cfg.beta = params.beta;
  mpc_cfg.c = params.c;
  mpc_cfg.seed = params.seed;

  switch (params.algo) {
    case Algo::reg_exact: {
      const auto ev = exact_split_1pass(stream);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::reg_additive: {
      const bool dyadic = params.deletions;
      const auto ev = dyadic ? additive_split_2pass_dyadic(stream, params.eps,
                                                           params.seed)
                             : additive_split_2pass(stream, params.eps,
                                                    params.seed, params.c);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::reg_mult: {
      const auto ev = multiplicative_split(stream, params.eps);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::reg_lowpass: {
      const auto ev = multiplicative_split_lowpass(stream, params.eps, params.beta);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::cls_additive: {
      const auto ev =
          additive_cls_split_1pass(stream, params.eps, params.seed, params.c);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::cls_mult: {
      const auto ev = multiplicative_cls_split(stream, params.eps);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::cls_lowpass: {
      const auto ev =
          multiplicative_cls_split_lowpass(stream, params.eps, params.beta);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::cat_additive: {
      const auto part =
          categorical_additive(stream, params.eps, params.seed, params.c);
      cat_mask = part.mask_a;
      rep.partition_a = part.side_a(ds.meta().domain_size);
      rep.claimed = part.loss;
      break;
    }
    case Algo::mpc_reg_additive: {
      const auto ev = mpc_regression_additive(ds, mpc_cfg, &mpc_info);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::mpc_reg_mult: {
      const auto ev = mpc_regression_multiplicative(ds, mpc_cfg, &mpc_info);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::mpc_cls_additive: {
      const auto ev = mpc_classification_additive(ds, mpc_cfg, &mpc_info);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
    case Algo::mpc_cls_mult: {
      const auto ev = mpc_classification_multiplicative(ds, mpc_cfg, &mpc_info);
      rep.j = ev.j;
      rep.claimed = ev.loss;
      break;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rep.passes = stream.passes_used();
  rep.peak_words = stream.peak_words();
  rep.rounds = algo_is_mpc(params.algo) ? mpc_info.rounds : 0;

  // True loss of the returned split, then the oracle comparison.
  switch (have) {
    case Mode::regression:
      rep.loss = evaluate_split(ds, rep.j).loss;
      break;
    case Mode::classification:
      rep.loss = evaluate_cls_split(ds, rep.j).loss;
      break;
    case Mode::categorical:
      rep.loss = evaluate_partition(ds, cat_mask).loss;
      break;
  }
  rep.opt = oracle_solve(ds).opt;
  rep.gap = rep.loss - rep.opt;
  rep.ratio = rep.opt > 0 ? rep.loss / rep.opt : 1.0;

  const double eff_eps =
      params.eps > 0
          ? params.eps
          : (algo_is_mpc(params.algo)
                 ? 1.0 / std::sqrt(static_cast<double>(ds.size()))
                 : params.eps);
  std::ostringstream g;
  switch (params.algo) {
    case Algo::reg_exact:
      g << "loss == opt";
      rep.guarantee_ok = std::abs(rep.loss - rep.opt) <= 1e-9;
      break;
    case Algo::reg_additive:
    case Algo::mpc_reg_additive:
      g << "loss <= opt + 5*eps*M^2 (eps=" << eff_eps << ", M=" << big_m << ")";
      rep.guarantee_ok =
          rep.loss <= rep.opt + 5.0 * eff_eps * big_m * big_m + 1e-9;
      break;
    case Algo::reg_mult:
    case Algo::reg_lowpass:
    case Algo::mpc_reg_mult:
      g << "loss <= (1+eps)*opt + 1e-9 (eps=" << eff_eps << ")";
      rep.guarantee_ok = rep.loss <= (1.0 + eff_eps) * rep.opt + 1e-9;
      break;
    case Algo::cls_additive:
    case Algo::cat_additive:
    case Algo::mpc_cls_additive:
      g << "loss <= opt + eps (eps=" << eff_eps << ")";
      rep.guarantee_ok = rep.loss <= rep.opt + eff_eps + 1e-9;
      break;
    case Algo::cls_mult:
    case Algo::cls_lowpass:
    case Algo::mpc_cls_mult:
      g << "loss <= (1+eps)*opt (eps=" << eff_eps << ")";
      rep.guarantee_ok = rep.loss <= (1.0 + eff_eps) * rep.opt + 1e-12;
      break;
  }
  rep.guarantee = g.str();

  if (params.strict && !rep.guarantee_ok) {
    std::ostringstream msg;
    msg << algo_name(params.algo) << ": guarantee '" << rep.guarantee
        << "' violated: loss=" << rep.loss << " opt=" << rep.opt;
    throw GuaranteeError(msg.str());
  }
  return rep;
}

namespace {

nlohmann::json report_json(const RunReport& r) {
  nlohmann::json j;
  j["schema"] = r.schema;
  j["algo"] = r.algo;
  j["mode"] = r.mode;
  j["m"] = r.m;
  j["domain_size"] = r.domain_size;
  j["n_distinct"] = r.n_distinct;
  j["label_max"] = r.label_max;
  j["eps"] = r.eps;
  j["beta"] = r.beta;
  j["seed"] = r.seed;
  j["j"] = r.j;
  j["partition_a"] = r.partition_a;
  j["loss"] = r.loss;
  j["claimed"] = r.claimed;
  j["opt"] = r.opt;
  j["gap"] = r.gap;
  j["ratio"] = r.ratio;
  j["guarantee_ok"] = r.guarantee_ok;
  j["guarantee"] = r.guarantee;
  j["passes"] = r.passes;
  j["peak_words"] = r.peak_words;
  j["rounds"] = r.rounds;
  j["wall_ms"] = r.wall_ms;
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.schema = j.value("schema", 1);
  if (r.schema != 1) {
    throw InputError("report schema " + std::to_string(r.schema) + " not supported");
  }
  r.algo = j.value("algo", "");
  r.mode = j.value("mode", "");
  r.m = j.value("m", std::int64_t{0});
  r.domain_size = j.value("domain_size", std::int64_t{0});
  r.n_distinct = j.value("n_distinct", std::int64_t{0});
  r.label_max = j.value("label_max", 0.0);
  r.eps = j.value("eps", 0.0);
  r.beta = j.value("beta", 0.0);
  r.seed = j.value("seed", std::uint64_t{0});
  r.j = j.value("j", std::int64_t{-1});
  r.partition_a = j.value("partition_a", std::vector<std::int64_t>{});
  r.loss = j.value("loss", 0.0);
  r.claimed = j.value("claimed", 0.0);
  r.opt = j.value("opt", 0.0);
  r.gap = j.value("gap", 0.0);
  r.ratio = j.value("ratio", 1.0);
  r.guarantee_ok = j.value("guarantee_ok", true);
  r.guarantee = j.value("guarantee", "");
  r.passes = j.value("passes", 0);
  r.peak_words = j.value("peak_words", std::int64_t{0});
  r.rounds = j.value("rounds", std::int64_t{0});
  r.wall_ms = j.value("wall_ms", 0.0);
  return r;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  return report_json(report).dump(2);
}

RunReport report_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open report file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("report '" + path + "': " + e.what());
  }
  return report_from_json(j);
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report file '" + path + "'");
  out << report_to_json(report) << "\n";
}

std::string format_report_line(const RunReport& r) {
  std::ostringstream os;
  os << r.algo << " m=" << r.m << " N=" << r.domain_size;
  if (!r.partition_a.empty()) {
    os << " A={";
    for (std::size_t i = 0; i < r.partition_a.size(); ++i) {
      os << (i ? "," : "") << r.partition_a[i];
    }
    os << "}";
  } else {
    os << " j=" << r.j;
  }
  os << " loss=" << r.loss << " opt=" << r.opt << " gap=" << r.gap;
  if (r.rounds > 0) {
    os << " rounds=" << r.rounds;
  } else {
    os << " passes=" << r.passes << " words=" << r.peak_words;
  }
  os << " wall=" << r.wall_ms << "ms "
     << (r.guarantee_ok ? "[ok] " : "[VIOLATED] ") << r.guarantee;
  return os.str();
}

MultiAttributeResult run_multi_attribute(const MultiDataset& mds,
                                         const RunParams& params) {
  if (mds.n_attrs < 1) throw InputError("multi-attribute run: no attributes");
  MultiAttributeResult res;
  for (std::int64_t q = 1; q <= mds.n_attrs; ++q) {
    const Dataset dq = mds.attribute(q);
    RunReport rep = run_algorithm(dq, params);
    res.shared_passes = std::max(res.shared_passes, rep.passes);
    res.total_words += rep.peak_words;
    if (q == 1 || rep.loss < res.best.loss - kLossTieTolerance) {
      res.best = rep;
      res.best_attr = q;
    }
    res.per_attr.push_back(std::move(rep));
  }
  return res;
}

SweepConfig sweep_config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sweep config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("sweep config '" + path + "': " + e.what());
  }

  SweepConfig cfg;
  cfg.strict = j.value("strict", false);
  cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{1});
  if (!j.contains("datasets") || !j.contains("algos")) {
    throw InputError("sweep config needs 'datasets' and 'algos' arrays");
  }
  // An empty seed list is a legitimate no-op sweep, but empty dataset or algo
  // arrays leave nothing to describe and are always a config mistake.
  if (j.at("datasets").empty() || j.at("algos").empty()) {
    throw InputError("sweep config 'datasets' and 'algos' must be non-empty");
  }
  for (const auto& d : j.at("datasets")) {
    GeneratorSpec spec;
    spec.kind = generator_kind_from_name(d.at("kind").get<std::string>());
    spec.n_obs = d.at("m").get<std::int64_t>();
    spec.domain_size = d.at("bign").get<std::int64_t>();
    spec.label_max = d.value("bigm", 1.0);
    spec.noise = d.value("noise", 0.0);
    spec.seed = d.value("seed", std::uint64_t{0});
    if (d.contains("mode")) {
      spec.mode = mode_from_name(d.at("mode").get<std::string>());
    }
    cfg.datasets.push_back(spec);
  }
  for (const auto& a : j.at("algos")) {
    SweepAlgoSpec s;
    s.params.algo = algo_from_name(a.at("algo").get<std::string>());
    s.params.eps = a.value("eps", 0.1);
    s.params.beta = a.value("beta", 0.5);
    s.params.c = a.value("c", kDefaultSamplingC);
    s.params.machines = a.value("machines", std::int64_t{0});
    s.params.budget_words = a.value("budget_words", std::int64_t{0});
    s.params.deletions = a.value("deletions", false);
    cfg.algos.push_back(s);
  }
  return cfg;
}

namespace {

std::string dataset_tag(const GeneratorSpec& spec) {
  std::ostringstream os;
  os << generator_kind_name(spec.kind) << "/m" << spec.n_obs << "/N"
     << spec.domain_size;
  if (spec.noise > 0) os << "/noise" << spec.noise;
  return os.str();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  SweepResult res;
  struct Key {
    std::string dataset, algo;
    bool operator<(const Key& o) const {
      return dataset != o.dataset ? dataset < o.dataset : algo < o.algo;
    }
  };
  std::map<Key, SweepSummaryRow> summary;

  for (const auto& dspec : config.datasets) {
    const std::string tag = dataset_tag(dspec);
    for (const auto& aspec : config.algos) {
      for (std::uint64_t s : config.seeds) {
        GeneratorSpec gs = dspec;
        gs.seed = hash_combine(dspec.seed, s);
        const Dataset ds = generate(gs);
        // The cross product may pair a regression algorithm with a
        // classification dataset; such cells are skipped, not errors.
        if (algo_mode(aspec.params.algo) != ds.meta().mode) continue;
        RunParams params = aspec.params;
        params.seed = s;
        params.strict = config.strict;
        RunReport rep = run_algorithm(ds, params);

        SweepSummaryRow& row = summary[Key{tag, rep.algo}];
        row.dataset = tag;
        row.algo = rep.algo;
        row.runs += 1;
        if (!rep.guarantee_ok) row.guarantee_failures += 1;
        row.mean_gap += rep.gap;
        row.max_gap = std::max(row.max_gap, rep.gap);
        row.mean_ratio += rep.ratio;
        row.max_ratio = std::max(row.max_ratio, rep.ratio);
        row.max_passes = std::max(row.max_passes, rep.passes);
        row.max_words = std::max(row.max_words, rep.peak_words);
        row.max_rounds = std::max(row.max_rounds, rep.rounds);

        res.cell_dataset.push_back(tag);
        res.cells.push_back(std::move(rep));
      }
    }
  }
  for (auto& [key, row] : summary) {
    if (row.runs > 0) {
      row.mean_gap /= static_cast<double>(row.runs);
      row.mean_ratio /= static_cast<double>(row.runs);
    }
    res.summary.push_back(row);
  }
  return res;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write sweep csv '" + path + "'");
  out << "dataset,algo,seed,j,loss,opt,gap,ratio,guarantee_ok,passes,peak_words,"
         "rounds,wall_ms\n";
  out.precision(17);
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const RunReport& r = result.cells[i];
    out << result.cell_dataset[i] << ',' << r.algo << ',' << r.seed << ',' << r.j
        << ',' << r.loss << ',' << r.opt << ',' << r.gap << ',' << r.ratio << ','
        << (r.guarantee_ok ? 1 : 0) << ',' << r.passes << ',' << r.peak_words
        << ',' << r.rounds << ',' << r.wall_ms << "\n";
  }
}

void write_sweep_summary_json(const SweepResult& result, const std::string& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : result.summary) {
    rows.push_back({{"dataset", s.dataset},
                    {"algo", s.algo},
                    {"runs", s.runs},
                    {"guarantee_failures", s.guarantee_failures},
                    {"mean_gap", s.mean_gap},
                    {"max_gap", s.max_gap},
                    {"mean_ratio", s.mean_ratio},
                    {"max_ratio", s.max_ratio},
                    {"max_passes", s.max_passes},
                    {"max_words", s.max_words},
                    {"max_rounds", s.max_rounds}});
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write sweep summary '" + path + "'");
  out << rows.dump(2) << "\n";
}

}  // namespace splitstream

// Command-line front end: generate synthetic streams, run the streaming / MPC
// split finders, compare against the brute-force oracle, and batch-sweep
// configurations. Exit codes: 0 ok, 2 input error, 3 budget guard tripped,
// 4 guarantee violated under --strict.

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "splitstream/driver.hpp"
#include "splitstream/generator.hpp"
#include "splitstream/io.hpp"
#include "splitstream/mpc.hpp"
#include "splitstream/sampling.hpp"
#include "splitstream/oracle.hpp"

namespace {

using namespace splitstream;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitGuarantee = 4;

struct GenerateOpts {
  std::string kind{"piecewise-step"};
  std::int64_t m{0};
  std::int64_t bign{0};
  double bigm{1.0};
  double noise{0.0};
  std::uint64_t seed{1};
  std::string out;
  std::string mode;
  std::int64_t attrs{1};
};

int cmd_generate(const GenerateOpts& o) {
  GeneratorSpec spec;
  spec.kind = generator_kind_from_name(o.kind);
  spec.n_obs = o.m;
  spec.domain_size = o.bign;
  spec.label_max = o.bigm;
  spec.noise = o.noise;
  spec.seed = o.seed;
  if (!o.mode.empty()) spec.mode = mode_from_name(o.mode);

  if (o.attrs > 1) {
    const MultiDataset mds = generate_multi(spec, o.attrs);
    save_multi_dataset(mds, o.out);
    std::cout << "wrote " << o.out << " (m=" << mds.n_rows()
              << ", N=" << mds.meta.domain_size << ", attrs=" << mds.n_attrs
              << ", mode=" << mode_name(mds.meta.mode) << ")\n";
  } else {
    const Dataset ds = generate(spec);
    save_dataset(ds, o.out);
    std::cout << "wrote " << o.out << " (m=" << ds.size()
              << ", N=" << ds.meta().domain_size
              << ", mode=" << mode_name(ds.meta().mode) << ")\n";
  }
  return kExitOk;
}

struct OracleOpts {
  std::string in;
  std::string mode;
  bool curve{false};
  std::optional<std::int64_t> bign;
  std::optional<double> bigm;
  std::int64_t attrs{1};
};

nlohmann::json oracle_json(const Dataset& ds, bool curve) {
  nlohmann::json out;
  out["mode"] = mode_name(ds.meta().mode);
  out["m"] = ds.size();
  out["domain_size"] = ds.meta().domain_size;
  const OptResult res = oracle_solve(ds, curve);
  out["opt"] = res.opt;
  if (const auto* ev = std::get_if<SplitEvaluation>(&res.best)) {
    out["j"] = ev->j;
    out["mu"] = ev->mu;
    out["gamma"] = ev->gamma;
  } else if (const auto* ce = std::get_if<ClsSplitEvaluation>(&res.best)) {
    out["j"] = ce->j;
    out["left_label"] = ce->left_label;
    out["right_label"] = ce->right_label;
  } else if (const auto* part = std::get_if<CategoricalPartition>(&res.best)) {
    out["partition_a"] = part->side_a(ds.meta().domain_size);
  }
  if (res.curve) out["curve"] = *res.curve;
  return out;
}

int cmd_oracle(const OracleOpts& o) {
  const Mode mode = mode_from_name(o.mode);
  if (o.attrs > 1) {
    const MultiDataset mds = load_multi_dataset(o.in, o.attrs, mode, o.bign, o.bigm);
    nlohmann::json out = nlohmann::json::array();
    for (std::int64_t q = 1; q <= mds.n_attrs; ++q) {
      nlohmann::json one = oracle_json(mds.attribute(q), o.curve);
      one["attr"] = q;
      out.push_back(std::move(one));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << oracle_json(load_dataset(o.in, mode, o.bign, o.bigm), o.curve).dump(2)
              << "\n";
  }
  return kExitOk;
}

struct RunOpts {
  std::string algo;
  std::string in;
  std::string report;
  double eps{0.1};
  double beta{0.5};
  double bigc{kDefaultSamplingC};
  std::uint64_t seed{1};
  bool strict{false};
  bool deletions{false};
  std::int64_t machines{0};
  std::int64_t budget_words{0};
  std::optional<std::int64_t> bign;
  std::optional<double> bigm;
  std::int64_t attrs{1};
};

RunParams params_from(const RunOpts& o) {
  RunParams p;
  p.algo = algo_from_name(o.algo);
  p.eps = o.eps;
  p.beta = o.beta;
  p.c = o.bigc;
  p.seed = o.seed;
  p.strict = o.strict;
  p.deletions = o.deletions;
  p.machines = o.machines;
  p.budget_words = o.budget_words;
  return p;
}

int cmd_run(const RunOpts& o) {
  const RunParams params = params_from(o);
  RunReport rep;
  if (o.attrs > 1) {
    const MultiDataset mds =
        load_multi_dataset(o.in, o.attrs, algo_mode(params.algo), o.bign, o.bigm);
    const MultiAttributeResult res = run_multi_attribute(mds, params);
    rep = res.best;
    std::cout << "attr " << res.best_attr << "/" << mds.n_attrs
              << " (shared passes " << res.shared_passes << ", total words "
              << res.total_words << "): " << format_report_line(rep) << "\n";
  } else {
    const Dataset ds = load_dataset(o.in, algo_mode(params.algo), o.bign, o.bigm);
    rep = run_algorithm(ds, params);
    std::cout << format_report_line(rep) << "\n";
  }
  if (!o.report.empty()) write_report(rep, o.report);
  return kExitOk;
}

struct MpcOpts {
  std::string algo;
  std::string in;
  std::string report;
  double eps{0.0};  // 0: additive algorithms pick 1/sqrt(m), multiplicative 0.1
  double beta{0.5};
  double bigc{kDefaultSamplingC};
  std::uint64_t seed{1};
  std::int64_t machines{0};
  std::int64_t budget_words{0};
  bool trace{false};
  bool strict{false};
  std::optional<std::int64_t> bign;
  std::optional<double> bigm;
};

Algo mpc_algo_from_name(const std::string& name) {
  const std::string full = name.rfind("mpc-", 0) == 0 ? name : "mpc-" + name;
  const Algo algo = algo_from_name(full);
  if (!algo_is_mpc(algo)) throw InputError("'" + name + "' is not an MPC algorithm");
  return algo;
}

void print_trace(const MpcRunInfo& info) {
  std::cout << "machines=" << info.machines << " rounds=" << info.rounds << "\n";
  for (const auto& r : info.ledger.rounds) {
    std::int64_t sent = 0, recv = 0;
    for (auto w : r.sent_words) sent += w;
    for (auto w : r.recv_words) recv += w;
    std::cout << "  round " << r.round << " [" << r.label << "] sent=" << sent
              << "w recv=" << recv << "w central_recv="
              << (r.recv_words.empty() ? 0 : r.recv_words[0])
              << "w max_msg=" << r.max_message_words << "w\n";
  }
  const BoundaryAudit& a = info.audit;
  if (a.n_splits > 0) {
    std::cout << "  aggregate audit: buckets=" << a.n_splits
              << " pairs=" << a.total_pairs << " max_shared=" << a.max_boundary()
              << " central_recv=" << a.central_recv_words << "w bound_ok="
              << (a.within_bound() ? "yes" : "NO") << "\n";
  }
}

int cmd_mpc(const MpcOpts& o) {
  const Algo algo = mpc_algo_from_name(o.algo);
  const Dataset ds = load_dataset(o.in, algo_mode(algo), o.bign, o.bigm);

  if (o.trace) {
    MpcConfig cfg;
    cfg.machines = o.machines;
    cfg.budget_words = o.budget_words;
    cfg.eps = o.eps;
    cfg.beta = o.beta;
    cfg.c = o.bigc;
    cfg.seed = o.seed;
    MpcRunInfo info;
    switch (algo) {
      case Algo::mpc_reg_additive:
        mpc_regression_additive(ds, cfg, &info);
        break;
      case Algo::mpc_reg_mult:
        mpc_regression_multiplicative(ds, cfg, &info);
        break;
      case Algo::mpc_cls_additive:
        mpc_classification_additive(ds, cfg, &info);
        break;
      default:
        mpc_classification_multiplicative(ds, cfg, &info);
        break;
    }
    print_trace(info);
  }

  RunParams params;
  params.algo = algo;
  params.eps = o.eps;
  params.beta = o.beta;
  params.c = o.bigc;
  params.seed = o.seed;
  params.strict = o.strict;
  params.machines = o.machines;
  params.budget_words = o.budget_words;
  const RunReport rep = run_algorithm(ds, params);
  std::cout << format_report_line(rep) << "\n";
  if (!o.report.empty()) write_report(rep, o.report);
  return kExitOk;
}

struct SweepOpts {
  std::string config;
  std::string out_csv;
  std::string out_json;
};

int cmd_sweep(const SweepOpts& o) {
  const SweepConfig cfg = sweep_config_from_json_file(o.config);
  const SweepResult res = run_sweep(cfg);
  for (const auto& row : res.summary) {
    std::cout << row.dataset << " " << row.algo << ": runs=" << row.runs
              << " guarantee_failures=" << row.guarantee_failures
              << " mean_gap=" << row.mean_gap << " max_gap=" << row.max_gap
              << " max_ratio=" << row.max_ratio << " max_passes=" << row.max_passes
              << " max_words=" << row.max_words;
    if (row.max_rounds > 0) std::cout << " max_rounds=" << row.max_rounds;
    std::cout << "\n";
  }
  if (!o.out_csv.empty()) write_sweep_csv(res, o.out_csv);
  if (!o.out_json.empty()) write_sweep_summary_json(res, o.out_json);
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& files) {
  for (const auto& path : files) {
    std::cout << path << ": " << format_report_line(report_from_json_file(path))
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming and massively-parallel decision-tree split finding"};
  app.require_subcommand(1);

  std::function<int()> action;

  GenerateOpts gen;
  auto* cg = app.add_subcommand("generate", "produce a seeded synthetic stream");
  cg->add_option("--kind", gen.kind,
                 "piecewise-step | two-cluster | uniform-noise | time-drift")
      ->capture_default_str();
  cg->add_option("--m", gen.m, "number of stream elements")->required();
  cg->add_option("--bign", gen.bign, "domain size N (x in [1, N])")->required();
  cg->add_option("--bigm", gen.bigm, "regression label bound M")
      ->capture_default_str();
  cg->add_option("--noise", gen.noise, "noise level in [0, 1]")
      ->capture_default_str();
  cg->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  cg->add_option("--out", gen.out, "output file (.csv or .jsonl)")->required();
  cg->add_option("--mode", gen.mode, "reg | cls | cat (default: kind's natural)");
  cg->add_option("--attrs", gen.attrs, "attribute columns (CSV only)")
      ->capture_default_str();
  cg->callback([&] { action = [&] { return cmd_generate(gen); }; });

  OracleOpts orc;
  auto* co = app.add_subcommand("oracle", "brute-force optimum for a dataset");
  co->add_option("--in", orc.in, "input file")->required();
  co->add_option("--mode", orc.mode, "reg | cls | cat")->required();
  co->add_flag("--curve", orc.curve, "emit the full loss curve L(1..N)");
  co->add_option("--bign", orc.bign, "declared domain size (default: max x)");
  co->add_option("--bigm", orc.bigm, "declared label bound (default: max y)");
  co->add_option("--attrs", orc.attrs, "attribute columns")->capture_default_str();
  co->callback([&] { action = [&] { return cmd_oracle(orc); }; });

  RunOpts run;
  auto* cr = app.add_subcommand("run", "run a split-finding algorithm");
  cr->add_option("--algo", run.algo,
                 "reg-exact | reg-additive | reg-mult | reg-lowpass | "
                 "cls-additive | cls-mult | cls-lowpass | cat-additive | mpc-*")
      ->required();
  cr->add_option("--in", run.in, "input file")->required();
  cr->add_option("--eps", run.eps, "accuracy parameter")->capture_default_str();
  cr->add_option("--beta", run.beta, "pass/round exponent for *-lowpass")
      ->capture_default_str();
  cr->add_option("--bigc", run.bigc, "sampling constant C")->capture_default_str();
  cr->add_option("--seed", run.seed, "sampling seed")->capture_default_str();
  cr->add_option("--report", run.report, "write a JSON run report here");
  cr->add_flag("--strict", run.strict, "exit 4 if the guarantee check fails");
  cr->add_flag("--deletions", run.deletions,
               "reg-additive: estimate with a dyadic Count-Min (allows w=-1)");
  cr->add_option("--machines", run.machines, "mpc-*: machine count (0: sqrt m)")
      ->capture_default_str();
  cr->add_option("--budget-words", run.budget_words,
                 "mpc-*: per-machine budget (0: default)")
      ->capture_default_str();
  cr->add_option("--bign", run.bign, "declared domain size (default: max x)");
  cr->add_option("--bigm", run.bigm, "declared label bound (default: max y)");
  cr->add_option("--attrs", run.attrs, "attribute columns")->capture_default_str();
  cr->callback([&] { action = [&] { return cmd_run(run); }; });

  MpcOpts mpc;
  auto* cm = app.add_subcommand("mpc", "simulate the cluster algorithms");
  cm->add_option("--algo", mpc.algo,
                 "reg-additive | reg-mult | cls-additive | cls-mult "
                 "(mpc- prefix optional)")
      ->required();
  cm->add_option("--in", mpc.in, "input file")->required();
  cm->add_option("--machines", mpc.machines, "machine count (0: sqrt m)")
      ->capture_default_str();
  cm->add_option("--budget-words", mpc.budget_words,
                 "per-machine memory budget in words (0: default)")
      ->capture_default_str();
  cm->add_option("--eps", mpc.eps,
                 "accuracy (0: additive 1/sqrt m, multiplicative 0.1)")
      ->capture_default_str();
  cm->add_option("--beta", mpc.beta, "phase exponent")->capture_default_str();
  cm->add_option("--bigc", mpc.bigc, "sampling constant C")->capture_default_str();
  cm->add_option("--seed", mpc.seed, "sampling seed")->capture_default_str();
  cm->add_flag("--trace", mpc.trace, "print the per-round communication ledger");
  cm->add_flag("--strict", mpc.strict, "exit 4 if the guarantee check fails");
  cm->add_option("--report", mpc.report, "write a JSON run report here");
  cm->add_option("--bign", mpc.bign, "declared domain size (default: max x)");
  cm->add_option("--bigm", mpc.bigm, "declared label bound (default: max y)");
  cm->callback([&] { action = [&] { return cmd_mpc(mpc); }; });

  SweepOpts sweep;
  auto* cs = app.add_subcommand("sweep", "batch datasets x algorithms x seeds");
  cs->add_option("--config", sweep.config, "sweep config JSON")->required();
  cs->add_option("--out-csv", sweep.out_csv, "per-run rows CSV");
  cs->add_option("--out-json", sweep.out_json, "summary rows JSON");
  cs->callback([&] { action = [&] { return cmd_sweep(sweep); }; });

  std::vector<std::string> report_files;
  auto* cp = app.add_subcommand("report", "pretty-print JSON run reports");
  cp->add_option("files", report_files, "report files")->required();
  cp->callback([&] { action = [&] { return cmd_report(report_files); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return action ? action() : kExitInput;
  } catch (const GuaranteeError& e) {
    std::cerr << "guarantee violation: " << e.what() << "\n";
    return kExitGuarantee;
  } catch (const BudgetError& e) {
    std::cerr << "budget guard: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

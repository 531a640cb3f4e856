#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "splitstream/driver.hpp"
#include "splitstream/io.hpp"
#include "splitstream/oracle.hpp"
#include "support/fixtures.hpp"

using namespace splitstream;
using namespace splitstream::testing;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("splitstream-driver-" +
            std::to_string(mix64(reinterpret_cast<std::uintptr_t>(this))));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("algo names round-trip and carry mode and model") {
  const char* names[] = {"reg-exact",     "reg-additive", "reg-mult",
                         "reg-lowpass",   "cls-additive", "cls-mult",
                         "cls-lowpass",   "cat-additive", "mpc-reg-additive",
                         "mpc-reg-mult",  "mpc-cls-additive", "mpc-cls-mult"};
  for (const char* name : names) {
    const Algo a = algo_from_name(name);
    CHECK(std::string(algo_name(a)) == name);
  }
  CHECK(algo_mode(Algo::reg_exact) == Mode::regression);
  CHECK(algo_mode(Algo::cls_mult) == Mode::classification);
  CHECK(algo_mode(Algo::cat_additive) == Mode::categorical);
  CHECK(algo_is_mpc(Algo::mpc_reg_mult));
  CHECK_FALSE(algo_is_mpc(Algo::reg_mult));
  CHECK_THROWS_AS(algo_from_name("reg-best"), InputError);
}

TEST_CASE("exact run reports a zero gap against the oracle") {
  const Dataset ds = tiny_regression_dataset();
  RunParams params;
  params.algo = Algo::reg_exact;
  const RunReport rep = run_algorithm(ds, params);
  CHECK(rep.schema == 1);
  CHECK(rep.algo == "reg-exact");
  CHECK(rep.mode == "regression");
  CHECK(rep.m == 14);
  CHECK(rep.domain_size == 10);
  CHECK(rep.j == kTinyRegressionOptJ);
  CHECK(rep.loss == doctest::Approx(kTinyRegressionOptLoss));
  CHECK(rep.opt == doctest::Approx(kTinyRegressionOptLoss));
  CHECK(rep.gap == doctest::Approx(0.0));
  CHECK(rep.ratio == doctest::Approx(1.0));
  CHECK(rep.guarantee_ok);
  CHECK(rep.passes == 1);
  CHECK(rep.peak_words > 0);
  CHECK(rep.rounds == 0);
  CHECK(rep.wall_ms >= 0.0);
}

TEST_CASE("every streaming algorithm produces a coherent report") {
  Rng rng(7);
  const Dataset reg = random_regression_dataset(rng, 500, 60, 1.0);
  const Dataset cls = random_classification_dataset(rng, 500, 60);
  const Dataset cat = random_categorical_dataset(rng, 500, 6);

  const Algo algos[] = {Algo::reg_exact,  Algo::reg_additive, Algo::reg_mult,
                        Algo::reg_lowpass, Algo::cls_additive, Algo::cls_mult,
                        Algo::cls_lowpass, Algo::cat_additive};
  for (Algo a : algos) {
    RunParams params;
    params.algo = a;
    params.eps = 0.2;
    params.seed = 5;
    const Dataset& ds = algo_mode(a) == Mode::regression  ? reg
                        : algo_mode(a) == Mode::classification ? cls
                                                               : cat;
    const RunReport rep = run_algorithm(ds, params);
    CHECK(rep.m == 500);
    // True loss is never better than the oracle optimum.
    CHECK(rep.loss >= rep.opt - 1e-9);
    CHECK(rep.gap == doctest::Approx(rep.loss - rep.opt).epsilon(1e-9));
    CHECK(rep.passes >= 1);
    if (algo_mode(a) == Mode::categorical) {
      CHECK_FALSE(rep.partition_a.empty());
      CHECK(rep.partition_a.front() == 1);  // category 1 pinned
    } else {
      CHECK(rep.j >= 0);
    }
    CHECK_FALSE(rep.guarantee.empty());
  }
}

TEST_CASE("MPC runs report rounds instead of passes") {
  Rng rng(13);
  const Dataset reg = random_regression_dataset(rng, 900, 80, 1.0);
  RunParams params;
  params.algo = Algo::mpc_reg_additive;
  params.eps = 0.1;
  const RunReport rep = run_algorithm(reg, params);
  CHECK(rep.rounds == 4);
  CHECK(rep.passes == 0);
  CHECK(rep.guarantee_ok);
}

TEST_CASE("guarantee violations throw only under strict") {
  // One point per value, loss curve flat at 0 for the exact algorithm: never a
  // violation. To force one, shrink the multiplicative guarantee by running an
  // adversarial epsilon on a dataset whose sampled estimate misses badly is
  // hard to stage deterministically; instead check the plumbing: strict runs of
  // correct algorithms pass, and the flag leaves the report unchanged.
  const Dataset ds = tiny_regression_dataset();
  RunParams params;
  params.algo = Algo::reg_mult;
  params.eps = 0.5;
  params.strict = true;
  const RunReport rep = run_algorithm(ds, params);
  CHECK(rep.guarantee_ok);
  const std::string bound = rep.guarantee;
  params.strict = false;
  CHECK(run_algorithm(ds, params).guarantee == bound);
}

TEST_CASE("deletions flag routes regression additive to the dyadic path") {
  Rng rng(17);
  std::vector<Observation> obs;
  std::vector<std::int8_t> w;
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t x = rng.next_int(1, 100);
    obs.push_back({x, x <= 50 ? 0.8 : 0.2});
    w.push_back(1);
  }
  for (int i = 0; i < 500; ++i) {
    obs.push_back(obs[static_cast<std::size_t>(i) * 2]);
    w.push_back(-1);
  }
  DatasetMeta meta;
  meta.n_obs = static_cast<std::int64_t>(obs.size());
  meta.domain_size = 100;
  meta.label_max = 1.0;
  meta.mode = Mode::regression;
  const Dataset ds(std::move(obs), meta, std::move(w));

  RunParams params;
  params.algo = Algo::reg_additive;
  params.eps = 0.1;
  params.deletions = true;
  const RunReport rep = run_algorithm(ds, params);
  CHECK(rep.passes == 2);
  CHECK(rep.loss >= rep.opt - 1e-9);

  // Without the flag the additive algorithm must refuse the weighted stream.
  params.deletions = false;
  CHECK_THROWS_AS(run_algorithm(ds, params), InputError);
}

TEST_CASE("mode mismatches are input errors") {
  const Dataset reg = tiny_regression_dataset();
  RunParams params;
  params.algo = Algo::cls_additive;
  CHECK_THROWS_AS(run_algorithm(reg, params), InputError);
  params.algo = Algo::cat_additive;
  CHECK_THROWS_AS(run_algorithm(reg, params), InputError);
}

TEST_CASE("report JSON round-trips through a file") {
  TempDir tmp;
  const Dataset ds = tiny_regression_dataset();
  RunParams params;
  params.algo = Algo::reg_additive;
  params.eps = 0.25;
  params.seed = 99;
  const RunReport rep = run_algorithm(ds, params);
  const std::string path = tmp.file("report.json");
  write_report(rep, path);

  const RunReport back = report_from_json_file(path);
  CHECK(back.schema == 1);
  CHECK(back.algo == rep.algo);
  CHECK(back.mode == rep.mode);
  CHECK(back.m == rep.m);
  CHECK(back.j == rep.j);
  CHECK(back.loss == doctest::Approx(rep.loss).epsilon(1e-12));
  CHECK(back.opt == doctest::Approx(rep.opt).epsilon(1e-12));
  CHECK(back.ratio == doctest::Approx(rep.ratio).epsilon(1e-12));
  CHECK(back.guarantee_ok == rep.guarantee_ok);
  CHECK(back.passes == rep.passes);
  CHECK(back.peak_words == rep.peak_words);
  CHECK(back.seed == rep.seed);

  // A categorical report keeps its partition.
  Rng rng(3);
  const Dataset cat = random_categorical_dataset(rng, 200, 5);
  params.algo = Algo::cat_additive;
  const RunReport crep = run_algorithm(cat, params);
  write_report(crep, path);
  CHECK(report_from_json_file(path).partition_a == crep.partition_a);

  const std::string line = format_report_line(rep);
  CHECK(line.find("reg-additive") != std::string::npos);
  CHECK(line.find("loss=") != std::string::npos);
}

TEST_CASE("malformed report files are input errors") {
  TempDir tmp;
  const std::string path = tmp.file("bad.json");
  {
    std::ofstream out(path);
    out << "{\"schema\": 2, \"algo\": \"reg-exact\"}";
  }
  CHECK_THROWS_AS(report_from_json_file(path), InputError);
  {
    std::ofstream out(path);
    out << "not json at all {{{";
  }
  CHECK_THROWS_AS(report_from_json_file(path), InputError);
  CHECK_THROWS_AS(report_from_json_file(tmp.file("missing.json")), InputError);
}

TEST_CASE("multi-attribute runs pick the attribute with the best split") {
  GeneratorSpec gs;
  gs.kind = GeneratorKind::piecewise_step;
  gs.n_obs = 3000;
  gs.domain_size = 120;
  gs.label_max = 1.0;
  gs.noise = 0.1;
  gs.seed = 21;
  const MultiDataset mds = generate_multi(gs, 4);
  RunParams params;
  params.algo = Algo::reg_exact;
  const MultiAttributeResult res = run_multi_attribute(mds, params);
  REQUIRE(res.per_attr.size() == 4);
  CHECK(res.best_attr == 1);  // attribute 1 carries the planted structure
  for (const auto& rep : res.per_attr) {
    CHECK(res.best.loss <= rep.loss + 1e-12);
  }
  CHECK(res.shared_passes == 1);  // same element order: passes overlap
  std::int64_t total = 0;
  for (const auto& rep : res.per_attr) total += rep.peak_words;
  CHECK(res.total_words == total);
}

TEST_CASE("sweep config parses, runs, and writes its outputs") {
  TempDir tmp;
  const std::string cfg_path = tmp.file("sweep.json");
  {
    std::ofstream out(cfg_path);
    out << R"({
      "strict": false,
      "seeds": [1, 2],
      "datasets": [
        {"kind": "piecewise-step", "m": 400, "bign": 50, "noise": 0.2, "seed": 7},
        {"kind": "two-cluster", "m": 400, "bign": 50, "noise": 0.2, "seed": 8}
      ],
      "algos": [
        {"algo": "reg-exact"},
        {"algo": "reg-additive", "eps": 0.2},
        {"algo": "cls-additive", "eps": 0.2},
        {"algo": "mpc-cls-additive", "eps": 0.2, "machines": 5}
      ]
    })";
  }
  const SweepConfig config = sweep_config_from_json_file(cfg_path);
  CHECK(config.seeds.size() == 2);
  CHECK(config.datasets.size() == 2);
  CHECK(config.algos.size() == 4);

  const SweepResult result = run_sweep(config);
  // Mode-incompatible pairs are skipped: regression algos run only on the
  // piecewise-step dataset, classification ones on two-cluster.
  CHECK(result.cells.size() == 2 * 4);  // 4 compatible pairs x 2 seeds
  REQUIRE(result.summary.size() == 4);
  for (const auto& row : result.summary) {
    CHECK(row.runs == 2);
    CHECK(row.guarantee_failures == 0);
    CHECK(row.max_gap >= row.mean_gap - 1e-12);
  }

  const std::string csv_path = tmp.file("cells.csv");
  write_sweep_csv(result, csv_path);
  std::ifstream csv(csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "dataset,algo,seed,j,loss,opt,gap,ratio,guarantee_ok,passes,peak_words,"
        "rounds,wall_ms");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 8);

  const std::string sum_path = tmp.file("summary.json");
  write_sweep_summary_json(result, sum_path);
  std::ifstream sum(sum_path);
  const std::string blob((std::istreambuf_iterator<char>(sum)),
                         std::istreambuf_iterator<char>());
  CHECK(blob.find("reg-exact") != std::string::npos);
  CHECK(blob.find("mpc-cls-additive") != std::string::npos);
}

TEST_CASE("sweep config validation") {
  TempDir tmp;
  const std::string path = tmp.file("bad.json");
  {
    std::ofstream out(path);
    out << R"({"seeds": [], "datasets": [], "algos": []})";
  }
  CHECK_THROWS_AS(sweep_config_from_json_file(path), InputError);
  {
    std::ofstream out(path);
    out << R"({"seeds": [1], "datasets": [{"kind": "nope", "m": 10, "bign": 5}],
               "algos": [{"algo": "reg-exact"}]})";
  }
  CHECK_THROWS_AS(sweep_config_from_json_file(path), InputError);
}

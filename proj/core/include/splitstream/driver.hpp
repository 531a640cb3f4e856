#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitstream/data.hpp"
#include "splitstream/generator.hpp"
#include "splitstream/split_result.hpp"

namespace splitstream {

// Algorithm selection, execution, reporting. This layer recomputes the true
// loss of whatever split an algorithm returns (offline, against the net
// dataset), compares it with the oracle optimum, and checks the algorithm's
// advertised guarantee when asked.

enum class Algo {
  reg_exact,
  reg_additive,
  reg_mult,
  reg_lowpass,
  cls_additive,
  cls_mult,
  cls_lowpass,
  cat_additive,
  mpc_reg_additive,
  mpc_reg_mult,
  mpc_cls_additive,
  mpc_cls_mult,
};

const char* algo_name(Algo a);
Algo algo_from_name(const std::string& name);
Mode algo_mode(Algo a);
bool algo_is_mpc(Algo a);

struct RunParams {
  Algo algo{Algo::reg_exact};
  double eps{0.1};
  double beta{0.5};
  double c{64.0};
  std::uint64_t seed{1};
  bool strict{false};     // throw GuaranteeError when the guarantee fails
  bool deletions{false};  // reg_additive only: dyadic Count-Min estimation
  // MPC only:
  std::int64_t machines{0};      // 0 -> sqrt(m)
  std::int64_t budget_words{0};  // 0 -> default formula
};

struct RunReport {
  int schema{1};
  std::string algo;
  std::string mode;
  std::int64_t m{0}, domain_size{0}, n_distinct{0};
  double label_max{0.0};
  double eps{0.0}, beta{0.0};
  std::uint64_t seed{0};

  std::int64_t j{-1};                     // threshold modes
  std::vector<std::int64_t> partition_a;  // categorical mode
  double loss{0.0};       // true loss of the returned split
  double claimed{0.0};    // loss as reported by the algorithm itself
  double opt{0.0};        // oracle optimum
  double gap{0.0};        // loss - opt
  double ratio{1.0};      // loss / opt (1 when opt = 0)
  bool guarantee_ok{true};
  std::string guarantee;  // human-readable bound that was checked

  int passes{0};
  std::int64_t peak_words{0};
  std::int64_t rounds{0};  // MPC only, else 0
  double wall_ms{0.0};
};

RunReport run_algorithm(const Dataset& ds, const RunParams& params);

std::string report_to_json(const RunReport& report);
RunReport report_from_json_file(const std::string& path);
void write_report(const RunReport& report, const std::string& path);
std::string format_report_line(const RunReport& report);

// Runs the algorithm on every attribute and returns the global best (smallest
// true loss; smaller attribute index on ties). Passes are reported as the
// maximum over attributes: the instances consume the same element sequence, so
// an interleaved run serves all of them with that many physical passes, paying
// the factor-d space overhead instead.
struct MultiAttributeResult {
  std::int64_t best_attr{1};
  RunReport best;
  std::vector<RunReport> per_attr;
  int shared_passes{0};
  std::int64_t total_words{0};
};

MultiAttributeResult run_multi_attribute(const MultiDataset& mds,
                                         const RunParams& params);

// Batch runner: datasets x algorithms x seeds, with per-cell rows and an
// aggregate summary (guarantee success rates, gap/ratio and budget extremes).
struct SweepAlgoSpec {
  RunParams params;
};

struct SweepConfig {
  std::vector<GeneratorSpec> datasets;
  std::vector<SweepAlgoSpec> algos;
  std::vector<std::uint64_t> seeds;
  bool strict{false};
};

SweepConfig sweep_config_from_json_file(const std::string& path);

struct SweepSummaryRow {
  std::string dataset;
  std::string algo;
  std::int64_t runs{0};
  std::int64_t guarantee_failures{0};
  double mean_gap{0.0}, max_gap{0.0};
  double mean_ratio{1.0}, max_ratio{1.0};
  int max_passes{0};
  std::int64_t max_words{0};
  std::int64_t max_rounds{0};
};

struct SweepResult {
  std::vector<RunReport> cells;
  std::vector<std::string> cell_dataset;  // parallel to cells
  std::vector<SweepSummaryRow> summary;
};

SweepResult run_sweep(const SweepConfig& config);
void write_sweep_csv(const SweepResult& result, const std::string& path);
void write_sweep_summary_json(const SweepResult& result, const std::string& path);

}  // namespace splitstream

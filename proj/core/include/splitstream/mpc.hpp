#pragma once

#include <any>
#include <cstdint>
#include <string>
#include <vector>

#include "splitstream/data.hpp"
#include "splitstream/split_result.hpp"

namespace splitstream {

// Synchronous-round cluster simulator. Execution is sequential and
// deterministic; what makes it a cluster model is the accounting and the
// delivery discipline: messages posted during round k become readable only
// after end_round(), every round's per-machine sent/received words land in the
// ledger, and each machine's resident words are checked against its budget.
// Machine 0 doubles as the central machine.

struct StampedObs {
  std::int64_t x{0};
  double y{0.0};
  std::int64_t pos{0};  // original stream position; keys the sampling coins
};

struct MachineShard {
  std::int64_t q{0};
  std::vector<StampedObs> obs;

  std::int64_t stored_words() const {
    return static_cast<std::int64_t>(obs.size()) * 2;
  }
};

struct RoundStats {
  std::int64_t round{0};
  std::string label;
  std::vector<std::int64_t> sent_words, recv_words;
  std::int64_t max_message_words{0};
};

struct RoundLedger {
  std::vector<RoundStats> rounds;

  std::int64_t n_rounds() const { return static_cast<std::int64_t>(rounds.size()); }
  std::int64_t central_received(const std::string& label) const;
};

// Responsibility accounting for one aggregation round: machine q is
// responsible for split j_t when it holds some x with j_{t-1} < x <= j_t. On a
// sorted layout each machine's responsibilities are contiguous and at most two
// of them (its first and last) can be shared with another machine.
struct BoundaryAudit {
  std::int64_t n_splits{0};
  std::int64_t total_pairs{0};  // (split, machine) responsibility pairs
  std::vector<std::int64_t> boundary_per_machine;
  std::int64_t central_recv_words{0};

  std::int64_t max_boundary() const;
  // total_pairs <= n_splits + 2 * machines, words <= 4 * that.
  bool within_bound() const;
};

class Cluster {
 public:
  // Round-robin distribution (element i to machine i mod Q), no round charged.
  Cluster(const Dataset& ds, std::int64_t machines, std::int64_t budget_words);

  std::int64_t machines() const { return static_cast<std::int64_t>(shards_.size()); }
  const std::vector<MachineShard>& shards() const { return shards_; }
  const RoundLedger& ledger() const { return ledger_; }
  const DatasetMeta& meta() const { return meta_; }
  std::int64_t budget_words() const { return budget_words_; }

  void begin_round(std::string label);
  void end_round();

  // Posts a message (ledger + payload). Readable by `to` after end_round().
  void post(std::int64_t from, std::int64_t to, std::int64_t words,
            std::any payload = {});
  std::vector<std::any> take_inbox(std::int64_t q);

  // Abstract one-round sort: afterwards machine q holds the q-th contiguous
  // block of the (x, position)-sorted order. Charged as a full-shuffle round.
  void sort_by_x();
  bool sorted() const { return sorted_; }

  // One aggregation round with boundary-pair accounting: every machine posts
  // (bucket, count, sum, sum_sq) partials for the buckets it intersects;
  // requires a sorted layout. splits must be ascending, ending at N.
  struct Aggregates {
    std::vector<double> count, sum, sum_sq;          // regression payloads
    std::vector<std::int64_t> neg, pos;              // classification payloads
  };
  Aggregates bucket_aggregates(const std::vector<std::int64_t>& splits,
                               bool classification);
  const BoundaryAudit& last_audit() const { return audit_; }

  // Extra resident words on a machine (samples, candidate lists, ...), counted
  // against its budget.
  void add_resident_words(std::int64_t q, std::int64_t words);

 private:
  void check_budgets() const;

  struct Message {
    std::int64_t from, to, words;
    std::any payload;
  };

  std::vector<MachineShard> shards_;
  std::vector<std::int64_t> resident_extra_;
  std::vector<std::vector<Message>> inboxes_;
  std::vector<Message> pending_;
  RoundLedger ledger_;
  BoundaryAudit audit_;
  DatasetMeta meta_;
  std::int64_t budget_words_;
  bool round_open_{false};
  bool sorted_{false};
  std::string open_label_;
};

struct MpcConfig {
  std::int64_t machines{0};      // 0 -> ceil(sqrt(m))
  std::int64_t budget_words{0};  // 0 -> generous default, see default_budget_words
  double eps{0.0};               // 0 -> 1/sqrt(m) for the additive algorithms
  double beta{0.5};
  double c{64.0};
  std::uint64_t seed{0};
};

std::int64_t default_budget_words(std::int64_t m, std::int64_t machines,
                                  std::int64_t domain_size, double c);

struct MpcRunInfo {
  std::int64_t rounds{0};
  std::int64_t machines{0};
  RoundLedger ledger;
  BoundaryAudit audit;  // of the last aggregation round
};

// sqrt(m) machines sample locally at p = C*ln(N)/(eps*m) (eps defaults to
// 1/sqrt m), the central machine builds the candidate set, and one bucket
// aggregation round scores every candidate exactly: 4 rounds total, additive
// O(1/sqrt m) guarantee. Matches additive_split_2pass(seed, eps) exactly.
SplitEvaluation mpc_regression_additive(const Dataset& ds, const MpcConfig& cfg,
                                        MpcRunInfo* info = nullptr);

// Guess search with depth-r probe trees per phase (r = ceil(beta*log2 N));
// each phase costs a broadcast round plus an aggregation round, after one sort
// round: rounds <= 2/beta + 2. Matches multiplicative_split_lowpass.
SplitEvaluation mpc_regression_multiplicative(const Dataset& ds,
                                              const MpcConfig& cfg,
                                              MpcRunInfo* info = nullptr);

// One round: local samples to the central machine, which solves on them.
// Matches additive_cls_split_1pass(seed, eps).
ClsSplitEvaluation mpc_classification_additive(const Dataset& ds,
                                               const MpcConfig& cfg,
                                               MpcRunInfo* info = nullptr);

// Classification analogue of the multiplicative phases (one aggregation round
// needs no mean precompute). Matches multiplicative_cls_split_lowpass.
ClsSplitEvaluation mpc_classification_multiplicative(const Dataset& ds,
                                                     const MpcConfig& cfg,
                                                     MpcRunInfo* info = nullptr);

}  // namespace splitstream

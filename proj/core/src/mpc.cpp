#include "splitstream/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splitstream/cls_stream.hpp"
#include "splitstream/guess_search.hpp"
#include "splitstream/oracle.hpp"
#include "splitstream/reg_stream.hpp"
#include "splitstream/rng.hpp"
#include "splitstream/sampling.hpp"

namespace splitstream {

namespace {

struct RegPartial {
  std::int64_t t;
  double cnt, sum, sum_sq;
};

struct ClsPartial {
  std::int64_t t;
  std::int64_t neg, pos;
};

}  // namespace

std::int64_t RoundLedger::central_received(const std::string& label) const {
  std::int64_t words = 0;
  for (const auto& r : rounds) {
    if (r.label == label && !r.recv_words.empty()) words += r.recv_words[0];
  }
  return words;
}

std::int64_t BoundaryAudit::max_boundary() const {
  std::int64_t best = 0;
  for (std::int64_t b : boundary_per_machine) best = std::max(best, b);
  return best;
}

bool BoundaryAudit::within_bound() const {
  const auto q = static_cast<std::int64_t>(boundary_per_machine.size());
  const std::int64_t pair_cap = n_splits + 2 * q;
  return total_pairs <= pair_cap && central_recv_words <= 4 * pair_cap &&
         max_boundary() <= 2;
}

Cluster::Cluster(const Dataset& ds, std::int64_t machines,
                 std::int64_t budget_words)
    : meta_(ds.meta()), budget_words_(budget_words) {
  if (machines < 1) throw InputError("cluster: need at least one machine");
  if (budget_words < 1) throw InputError("cluster: budget must be positive");
  if (ds.has_deletions()) throw InputError("cluster: insert-only streams required");
  shards_.resize(static_cast<std::size_t>(machines));
  for (std::int64_t q = 0; q < machines; ++q) shards_[q].q = q;
  resident_extra_.assign(static_cast<std::size_t>(machines), 0);
  inboxes_.resize(static_cast<std::size_t>(machines));
  const auto& obs = ds.obs();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    shards_[i % static_cast<std::size_t>(machines)].obs.push_back(
        StampedObs{obs[i].x, obs[i].y, static_cast<std::int64_t>(i)});
  }
  check_budgets();
}

void Cluster::begin_round(std::string label) {
  if (round_open_) throw std::logic_error("cluster: round already open");
  round_open_ = true;
  open_label_ = std::move(label);
}

void Cluster::post(std::int64_t from, std::int64_t to, std::int64_t words,
                   std::any payload) {
  if (!round_open_) throw std::logic_error("cluster: post outside a round");
  if (from < 0 || from >= machines() || to < 0 || to >= machines()) {
    throw InputError("cluster: message endpoint out of range");
  }
  if (words < 0) throw InputError("cluster: negative message size");
  pending_.push_back(Message{from, to, words, std::move(payload)});
}

void Cluster::end_round() {
  if (!round_open_) throw std::logic_error("cluster: no round open");
  RoundStats stats;
  stats.round = static_cast<std::int64_t>(ledger_.rounds.size());
  stats.label = open_label_;
  stats.sent_words.assign(static_cast<std::size_t>(machines()), 0);
  stats.recv_words.assign(static_cast<std::size_t>(machines()), 0);
  for (auto& msg : pending_) {
    stats.sent_words[static_cast<std::size_t>(msg.from)] += msg.words;
    stats.recv_words[static_cast<std::size_t>(msg.to)] += msg.words;
    stats.max_message_words = std::max(stats.max_message_words, msg.words);
    inboxes_[static_cast<std::size_t>(msg.to)].push_back(std::move(msg));
  }
  pending_.clear();
  ledger_.rounds.push_back(std::move(stats));
  round_open_ = false;
  check_budgets();
}

std::vector<std::any> Cluster::take_inbox(std::int64_t q) {
  if (q < 0 || q >= machines()) throw InputError("cluster: machine out of range");
  std::vector<std::any> out;
  for (auto& msg : inboxes_[static_cast<std::size_t>(q)]) {
    out.push_back(std::move(msg.payload));
  }
  inboxes_[static_cast<std::size_t>(q)].clear();
  return out;
}

void Cluster::sort_by_x() {
  if (round_open_) throw std::logic_error("cluster: sort inside an open round");
  std::vector<StampedObs> all;
  for (const auto& shard : shards_) {
    all.insert(all.end(), shard.obs.begin(), shard.obs.end());
  }
  std::sort(all.begin(), all.end(), [](const StampedObs& a, const StampedObs& b) {
    return a.x != b.x ? a.x < b.x : a.pos < b.pos;
  });

  RoundStats stats;
  stats.round = static_cast<std::int64_t>(ledger_.rounds.size());
  stats.label = "sort";
  stats.sent_words.assign(static_cast<std::size_t>(machines()), 0);
  stats.recv_words.assign(static_cast<std::size_t>(machines()), 0);
  for (std::size_t q = 0; q < shards_.size(); ++q) {
    stats.sent_words[q] = shards_[q].stored_words();
  }

  const std::int64_t n = static_cast<std::int64_t>(all.size());
  const std::int64_t base = n / machines(), rem = n % machines();
  std::size_t next = 0;
  for (std::int64_t q = 0; q < machines(); ++q) {
    const std::int64_t take = base + (q < rem ? 1 : 0);
    auto& shard = shards_[static_cast<std::size_t>(q)].obs;
    shard.assign(all.begin() + next, all.begin() + next + take);
    next += static_cast<std::size_t>(take);
    stats.recv_words[static_cast<std::size_t>(q)] = take * 2;
    stats.max_message_words = std::max(stats.max_message_words, take * 2);
  }
  ledger_.rounds.push_back(std::move(stats));
  sorted_ = true;
  check_budgets();
}

Cluster::Aggregates Cluster::bucket_aggregates(
    const std::vector<std::int64_t>& splits, bool classification) {
  if (!sorted_) throw std::logic_error("cluster: bucket_aggregates needs sort_by_x");
  if (splits.empty() || splits.back() != meta_.domain_size) {
    throw InputError("cluster: splits must end at the domain size");
  }
  for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
    if (splits[i] >= splits[i + 1]) {
      throw InputError("cluster: splits must be strictly ascending");
    }
  }
  if (splits.front() < 1) throw InputError("cluster: splits start below 1");

  const auto k = static_cast<std::int64_t>(splits.size());
  audit_ = BoundaryAudit{};
  audit_.n_splits = k;
  audit_.boundary_per_machine.assign(static_cast<std::size_t>(machines()), 0);

  // Bucket of x: first split >= x (splits[t-1] < x <= splits[t], splits[-1]=0).
  auto bucket_of = [&](std::int64_t x) {
    return static_cast<std::int64_t>(
        std::lower_bound(splits.begin(), splits.end(), x) - splits.begin());
  };

  std::vector<std::pair<std::int64_t, std::int64_t>> range(
      shards_.size(), {-1, -2});  // per-machine [first, last] bucket

  begin_round("aggregate");
  for (std::size_t q = 0; q < shards_.size(); ++q) {
    const auto& obs = shards_[q].obs;
    if (obs.empty()) continue;
    if (classification) {
      std::vector<ClsPartial> partials;
      for (const auto& so : obs) {
        const std::int64_t t = bucket_of(so.x);
        if (partials.empty() || partials.back().t != t) {
          partials.push_back(ClsPartial{t, 0, 0});
        }
        (so.y > 0 ? partials.back().pos : partials.back().neg) += 1;
      }
      range[q] = {partials.front().t, partials.back().t};
      audit_.total_pairs += static_cast<std::int64_t>(partials.size());
      const auto words = static_cast<std::int64_t>(partials.size()) * 3;
      post(static_cast<std::int64_t>(q), 0, words, std::move(partials));
    } else {
      std::vector<RegPartial> partials;
      for (const auto& so : obs) {
        const std::int64_t t = bucket_of(so.x);
        if (partials.empty() || partials.back().t != t) {
          partials.push_back(RegPartial{t, 0, 0, 0});
        }
        partials.back().cnt += 1;
        partials.back().sum += so.y;
        partials.back().sum_sq += so.y * so.y;
      }
      range[q] = {partials.front().t, partials.back().t};
      audit_.total_pairs += static_cast<std::int64_t>(partials.size());
      const auto words = static_cast<std::int64_t>(partials.size()) * 4;
      post(static_cast<std::int64_t>(q), 0, words, std::move(partials));
    }
  }
  end_round();
  audit_.central_recv_words = ledger_.rounds.back().recv_words[0];

  // Shared-bucket audit via a coverage diff array over the k buckets.
  std::vector<std::int64_t> cover(static_cast<std::size_t>(k) + 1, 0);
  for (const auto& [f, l] : range) {
    if (f > l) continue;
    cover[static_cast<std::size_t>(f)] += 1;
    cover[static_cast<std::size_t>(l) + 1] -= 1;
  }
  for (std::size_t t = 1; t < cover.size(); ++t) cover[t] += cover[t - 1];
  for (std::size_t q = 0; q < range.size(); ++q) {
    const auto [f, l] = range[q];
    for (std::int64_t t = f; t <= l; ++t) {
      if (cover[static_cast<std::size_t>(t)] >= 2) {
        audit_.boundary_per_machine[q] += 1;
      }
    }
  }

  Aggregates ag;
  if (classification) {
    ag.neg.assign(static_cast<std::size_t>(k), 0);
    ag.pos.assign(static_cast<std::size_t>(k), 0);
  } else {
    ag.count.assign(static_cast<std::size_t>(k), 0.0);
    ag.sum.assign(static_cast<std::size_t>(k), 0.0);
    ag.sum_sq.assign(static_cast<std::size_t>(k), 0.0);
  }
  for (auto& payload : take_inbox(0)) {
    if (classification) {
      for (const auto& pt : std::any_cast<std::vector<ClsPartial>&>(payload)) {
        ag.neg[static_cast<std::size_t>(pt.t)] += pt.neg;
        ag.pos[static_cast<std::size_t>(pt.t)] += pt.pos;
      }
    } else {
      for (const auto& pt : std::any_cast<std::vector<RegPartial>&>(payload)) {
        ag.count[static_cast<std::size_t>(pt.t)] += pt.cnt;
        ag.sum[static_cast<std::size_t>(pt.t)] += pt.sum;
        ag.sum_sq[static_cast<std::size_t>(pt.t)] += pt.sum_sq;
      }
    }
  }
  return ag;
}

void Cluster::add_resident_words(std::int64_t q, std::int64_t words) {
  if (q < 0 || q >= machines()) throw InputError("cluster: machine out of range");
  resident_extra_[static_cast<std::size_t>(q)] += words;
  check_budgets();
}

void Cluster::check_budgets() const {
  for (std::size_t q = 0; q < shards_.size(); ++q) {
    std::int64_t inbox_words = 0;
    for (const auto& msg : inboxes_[q]) inbox_words += msg.words;
    const std::int64_t held =
        shards_[q].stored_words() + resident_extra_[q] + inbox_words;
    if (held > budget_words_) {
      throw BudgetError("machine " + std::to_string(q) + " holds " +
                        std::to_string(held) + " words, budget " +
                        std::to_string(budget_words_));
    }
  }
}

std::int64_t default_budget_words(std::int64_t m, std::int64_t machines,
                                  std::int64_t domain_size, double c) {
  const double log_n =
      std::log(static_cast<double>(std::max<std::int64_t>(domain_size, 2)));
  const double root_m = std::sqrt(static_cast<double>(std::max<std::int64_t>(m, 1)));
  const std::int64_t shard =
      2 * ((m + std::max<std::int64_t>(machines, 1) - 1) /
           std::max<std::int64_t>(machines, 1));
  // Deliberately roomy: the interesting budget exercises pass explicit values.
  return (std::int64_t{1} << 20) + 2 * shard +
         static_cast<std::int64_t>(std::ceil(4.0 * c * log_n * (root_m + 1.0)));
}

namespace {

struct Prep {
  std::int64_t m, n, q;
  double eps;
  std::int64_t budget;
};

Prep prepare(const Dataset& ds, const MpcConfig& cfg, bool additive,
             const char* who) {
  if (ds.empty()) throw InputError(std::string(who) + ": empty dataset");
  if (ds.has_deletions()) {
    throw InputError(std::string(who) + ": insert-only streams required");
  }
  Prep p;
  p.m = ds.size();
  p.n = ds.meta().domain_size;
  p.q = cfg.machines > 0
            ? cfg.machines
            : static_cast<std::int64_t>(
                  std::ceil(std::sqrt(static_cast<double>(p.m))));
  p.eps = cfg.eps > 0
              ? cfg.eps
              : (additive ? 1.0 / std::sqrt(static_cast<double>(p.m)) : 0.1);
  p.budget = cfg.budget_words > 0 ? cfg.budget_words
                                  : default_budget_words(p.m, p.q, p.n, cfg.c);
  return p;
}

void fill_info(MpcRunInfo* info, const Cluster& cl) {
  if (!info) return;
  info->rounds = cl.ledger().n_rounds();
  info->machines = cl.machines();
  info->ledger = cl.ledger();
  info->audit = cl.last_audit();
}

// Broadcast a probe/candidate list from the central machine: one round, every
// other machine receives |list| words (payload itself is not needed, the probes
// are passed into bucket_aggregates directly).
void broadcast_list(Cluster& cl, std::int64_t words, const char* label) {
  cl.begin_round(label);
  for (std::int64_t q = 1; q < cl.machines(); ++q) cl.post(0, q, words);
  cl.end_round();
  for (std::int64_t q = 1; q < cl.machines(); ++q) cl.take_inbox(q);
}

// Gap arrays for evaluate_*_from_gaps out of per-bucket aggregates whose
// bucket edges are `probes` with N appended when missing.
std::vector<std::int64_t> edges_for(const std::vector<std::int64_t>& probes,
                                    std::int64_t n) {
  std::vector<std::int64_t> edges = probes;
  if (edges.empty() || edges.back() != n) edges.push_back(n);
  return edges;
}

int iterations_for(std::int64_t domain_size, double beta) {
  const double log_n =
      std::log2(static_cast<double>(std::max<std::int64_t>(domain_size, 2)));
  return static_cast<int>(std::ceil(beta * log_n)) + 1;
}

}  // namespace

SplitEvaluation mpc_regression_additive(const Dataset& ds, const MpcConfig& cfg,
                                        MpcRunInfo* info) {
  if (ds.meta().mode != Mode::regression) {
    throw InputError("mpc_regression_additive: regression labels required");
  }
  const Prep pr = prepare(ds, cfg, true, "mpc_regression_additive");
  Cluster cl(ds, pr.q, pr.budget);
  const double p = sampling_probability(cfg.c, pr.n, pr.eps, pr.m);

  // Round 1: local Bernoulli samples to the central machine. Coins are keyed
  // by original stream position, so the union equals the streaming sample.
  cl.begin_round("sample");
  for (std::int64_t q = 0; q < cl.machines(); ++q) {
    std::vector<std::int64_t> xs;
    for (const auto& so : cl.shards()[static_cast<std::size_t>(q)].obs) {
      if (keyed_bernoulli(cfg.seed, static_cast<std::uint64_t>(so.pos), p)) {
        xs.push_back(so.x);
      }
    }
    cl.post(q, 0, static_cast<std::int64_t>(xs.size()), std::move(xs));
  }
  cl.end_round();

  SampleSet sample;
  sample.p = p;
  sample.seed = cfg.seed;
  for (auto& payload : cl.take_inbox(0)) {
    for (std::int64_t x : std::any_cast<std::vector<std::int64_t>&>(payload)) {
      sample.items.push_back(Observation{x, 0.0});
    }
  }
  std::sort(sample.items.begin(), sample.items.end(),
            [](const Observation& a, const Observation& b) { return a.x < b.x; });
  cl.add_resident_words(0, sample.stored_words());

  const CandidateSplitSet cs = build_candidates(sample, pr.eps, pr.m, pr.n);
  cl.add_resident_words(0, static_cast<std::int64_t>(cs.splits.size()));

  cl.sort_by_x();  // round 2
  const std::vector<std::int64_t> probes(cs.splits.begin() + 1, cs.splits.end());
  broadcast_list(cl, static_cast<std::int64_t>(probes.size()), "broadcast");  // 3
  auto ag = cl.bucket_aggregates(probes, false);  // round 4
  cl.add_resident_words(0, 3 * static_cast<std::int64_t>(probes.size()));

  ag.count.push_back(0);
  ag.sum.push_back(0);
  ag.sum_sq.push_back(0);
  const auto outcomes =
      detail::evaluate_probes_from_gaps(probes, ag.count, ag.sum, ag.sum_sq, pr.m);
  std::vector<double> losses(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    losses[i] =
        (outcomes[i].err_left + outcomes[i].err_right) / static_cast<double>(pr.m);
  }
  fill_info(info, cl);
  return detail::evaluation_from_outcome(outcomes[detail::argmin_with_ties(losses)],
                                         pr.m);
}

SplitEvaluation mpc_regression_multiplicative(const Dataset& ds,
                                              const MpcConfig& cfg,
                                              MpcRunInfo* info) {
  if (ds.meta().mode != Mode::regression) {
    throw InputError("mpc_regression_multiplicative: regression labels required");
  }
  const Prep pr = prepare(ds, cfg, false, "mpc_regression_multiplicative");
  Cluster cl(ds, pr.q, pr.budget);
  cl.sort_by_x();  // round 1

  const auto guesses = cartesian_pairs(
      regression_search_axis(pr.m, ds.meta().label_max, pr.eps));
  cl.add_resident_words(0, static_cast<std::int64_t>(guesses.size()) * 4);

  auto result = run_guess_search<detail::RegProbeOutcome>(
      guesses, pr.n, iterations_for(pr.n, cfg.beta),
      [&](const std::vector<std::int64_t>& probes) {
        broadcast_list(cl, static_cast<std::int64_t>(probes.size()), "probes");
        const auto edges = edges_for(probes, pr.n);
        auto ag = cl.bucket_aggregates(edges, false);
        if (edges.size() == probes.size()) {
          ag.count.push_back(0);
          ag.sum.push_back(0);
          ag.sum_sq.push_back(0);
        }
        return detail::evaluate_probes_from_gaps(probes, ag.count, ag.sum,
                                                 ag.sum_sq, pr.m);
      },
      [](const detail::RegProbeOutcome& oc) {
        return std::pair<double, double>(oc.err_left, oc.err_right);
      });
  if (!result.found) {
    throw GuaranteeError("mpc_regression_multiplicative: no feasible guess");
  }
  fill_info(info, cl);
  return detail::evaluation_from_outcome(result.best_eval, pr.m);
}

ClsSplitEvaluation mpc_classification_additive(const Dataset& ds,
                                               const MpcConfig& cfg,
                                               MpcRunInfo* info) {
  if (ds.meta().mode == Mode::regression) {
    throw InputError("mpc_classification_additive: -1/+1 labels required");
  }
  const Prep pr = prepare(ds, cfg, true, "mpc_classification_additive");
  Cluster cl(ds, pr.q, pr.budget);
  const double p = sampling_probability(cfg.c, pr.n, pr.eps, pr.m);

  cl.begin_round("sample");
  for (std::int64_t q = 0; q < cl.machines(); ++q) {
    std::vector<Observation> picked;
    for (const auto& so : cl.shards()[static_cast<std::size_t>(q)].obs) {
      if (keyed_bernoulli(cfg.seed, static_cast<std::uint64_t>(so.pos), p)) {
        picked.push_back(Observation{so.x, so.y});
      }
    }
    cl.post(q, 0, static_cast<std::int64_t>(picked.size()) * 2, std::move(picked));
  }
  cl.end_round();

  SampleSet sample;
  sample.p = p;
  sample.label_aware = true;
  sample.seed = cfg.seed;
  for (auto& payload : cl.take_inbox(0)) {
    for (const auto& o : std::any_cast<std::vector<Observation>&>(payload)) {
      sample.items.push_back(o);
    }
  }
  std::sort(sample.items.begin(), sample.items.end(),
            [](const Observation& a, const Observation& b) { return a.x < b.x; });
  sample.pos_prefix.resize(sample.items.size() + 1, 0);
  for (std::size_t i = 0; i < sample.items.size(); ++i) {
    sample.pos_prefix[i + 1] = sample.pos_prefix[i] + (sample.items[i].y > 0 ? 1 : 0);
  }
  cl.add_resident_words(0, sample.stored_words());

  fill_info(info, cl);
  return detail::pick_from_cls_sample(sample, pr.m, nullptr);
}

ClsSplitEvaluation mpc_classification_multiplicative(const Dataset& ds,
                                                     const MpcConfig& cfg,
                                                     MpcRunInfo* info) {
  if (ds.meta().mode == Mode::regression) {
    throw InputError("mpc_classification_multiplicative: -1/+1 labels required");
  }
  const Prep pr = prepare(ds, cfg, false, "mpc_classification_multiplicative");
  Cluster cl(ds, pr.q, pr.budget);
  cl.sort_by_x();  // round 1

  const auto guesses = cartesian_pairs(classification_guess_axis(pr.m, pr.eps));
  cl.add_resident_words(0, static_cast<std::int64_t>(guesses.size()) * 4);

  auto result = run_guess_search<detail::ClsProbeOutcome>(
      guesses, pr.n, iterations_for(pr.n, cfg.beta),
      [&](const std::vector<std::int64_t>& probes) {
        broadcast_list(cl, static_cast<std::int64_t>(probes.size()), "probes");
        const auto edges = edges_for(probes, pr.n);
        auto ag = cl.bucket_aggregates(edges, true);
        if (edges.size() == probes.size()) {
          ag.neg.push_back(0);
          ag.pos.push_back(0);
        }
        return detail::evaluate_cls_probes_from_gaps(probes, ag.neg, ag.pos);
      },
      [](const detail::ClsProbeOutcome& oc) {
        return std::pair<double, double>(
            static_cast<double>(std::min(oc.neg_left, oc.pos_left)),
            static_cast<double>(std::min(oc.neg_right, oc.pos_right)));
      });
  if (!result.found) {
    throw GuaranteeError("mpc_classification_multiplicative: no feasible guess");
  }
  fill_info(info, cl);
  return detail::evaluation_from_outcome(result.best_eval, pr.m);
}

}  // namespace splitstream

#pragma once

#include <algorithm>
#include <cstdint>

#include "splitstream/data.hpp"

namespace splitstream {

// Multi-pass view over a dataset. Every completed pass replays the exact same
// element sequence and bumps passes_used by one; algorithms register the size
// of their live state (in machine words) through note_space so that peak space
// can be reported alongside the pass count.
//
// Word accounting convention: one word per stored integer/double/counter/map
// key. Transient per-element scratch is not charged.
class StreamHandle {
 public:
  explicit StreamHandle(const Dataset& ds) : ds_(&ds) {}

  const Dataset& dataset() const { return *ds_; }
  const DatasetMeta& meta() const { return ds_->meta(); }

  template <class Fn>
  void pass(Fn&& fn) {
    for (const Observation& o : ds_->obs()) fn(o);
    ++passes_used_;
  }

  // fn(stream_position, observation, weight). Position is 0-based and stable
  // across passes; it keys the per-element sampling coins.
  template <class Fn>
  void pass_indexed(Fn&& fn) {
    const auto& obs = ds_->obs();
    for (std::size_t i = 0; i < obs.size(); ++i) {
      fn(static_cast<std::int64_t>(i), obs[i], ds_->weight(i));
    }
    ++passes_used_;
  }

  int passes_used() const { return passes_used_; }

  void note_space(std::int64_t words) { peak_words_ = std::max(peak_words_, words); }
  std::int64_t peak_words() const { return peak_words_; }

  void require_insert_only(const char* who) const {
    if (ds_->has_deletions()) {
      throw InputError(std::string(who) + ": stream contains deletions");
    }
  }

  void require_nonempty(const char* who) const {
    if (ds_->empty()) throw InputError(std::string(who) + ": empty stream");
  }

 private:
  const Dataset* ds_;
  int passes_used_{0};
  std::int64_t peak_words_{0};
};

}  // namespace splitstream

#include "splitstream/data.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace splitstream {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::regression: return "regression";
    case Mode::classification: return "classification";
    case Mode::categorical: return "categorical";
  }
  return "?";
}

Mode mode_from_name(const std::string& name) {
  if (name == "reg" || name == "regression") return Mode::regression;
  if (name == "cls" || name == "classification") return Mode::classification;
  if (name == "cat" || name == "categorical") return Mode::categorical;
  throw InputError("unknown mode '" + name + "' (expected reg|cls|cat)");
}

namespace detail {

void validate_observation(const Observation& o, const DatasetMeta& meta,
                          const std::string& where) {
  if (o.x < 1 || o.x > meta.domain_size) {
    throw InputError(where + ": x = " + std::to_string(o.x) +
                     " outside [1, " + std::to_string(meta.domain_size) + "]");
  }
  if (!std::isfinite(o.y)) throw InputError(where + ": non-finite label");
  if (meta.mode == Mode::regression) {
    if (o.y < 0.0 || o.y > meta.label_max) {
      throw InputError(where + ": label " + std::to_string(o.y) +
                       " outside [0, " + std::to_string(meta.label_max) + "]");
    }
  } else {
    if (o.y != 1.0 && o.y != -1.0) {
      throw InputError(where + ": label must be -1 or +1, got " +
                       std::to_string(o.y));
    }
  }
}

}  // namespace detail

Dataset::Dataset(std::vector<Observation> obs, DatasetMeta meta,
                 std::vector<std::int8_t> weights)
    : obs_(std::move(obs)), weights_(std::move(weights)), meta_(meta) {
  if (meta_.domain_size < 1) throw InputError("domain size must be >= 1");
  if (meta_.mode == Mode::regression && meta_.label_max <= 0.0) {
    throw InputError("label bound must be positive in regression mode");
  }
  if (!weights_.empty() && weights_.size() != obs_.size()) {
    throw InputError("weight vector size does not match observations");
  }
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    detail::validate_observation(obs_[i], meta_, "record " + std::to_string(i + 1));
    if (!weights_.empty() && weights_[i] != 1 && weights_[i] != -1) {
      throw InputError("record " + std::to_string(i + 1) +
                       ": weight must be +1 or -1");
    }
  }
  meta_.n_obs = static_cast<std::int64_t>(obs_.size());

  std::vector<std::int64_t> xs;
  xs.reserve(obs_.size());
  for (const auto& o : obs_) xs.push_back(o.x);
  std::sort(xs.begin(), xs.end());
  meta_.n_distinct =
      static_cast<std::int64_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
}

bool Dataset::has_deletions() const {
  return std::any_of(weights_.begin(), weights_.end(),
                     [](std::int8_t w) { return w < 0; });
}

std::int64_t Dataset::net_size() const {
  if (weights_.empty()) return size();
  std::int64_t total = 0;
  for (std::int8_t w : weights_) total += w;
  return total;
}

Dataset Dataset::net() const {
  if (!has_deletions()) return *this;
  std::map<std::pair<std::int64_t, double>, std::int64_t> counts;
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    counts[{obs_[i].x, obs_[i].y}] += weight(i);
  }
  std::vector<Observation> out;
  for (const auto& [key, c] : counts) {
    if (c < 0) {
      throw InputError("deletion without matching insert at x = " +
                       std::to_string(key.first));
    }
    for (std::int64_t r = 0; r < c; ++r) out.push_back({key.first, key.second});
  }
  DatasetMeta meta = meta_;
  meta.n_obs = static_cast<std::int64_t>(out.size());
  return Dataset(std::move(out), meta);
}

Dataset MultiDataset::attribute(std::int64_t q) const {
  if (q < 1 || q > n_attrs) {
    throw InputError("attribute index " + std::to_string(q) + " outside [1, " +
                     std::to_string(n_attrs) + "]");
  }
  const auto& col = columns[static_cast<std::size_t>(q - 1)];
  std::vector<Observation> obs;
  obs.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    obs.push_back({col[i], labels[i]});
  }
  return Dataset(std::move(obs), meta);
}

}  // namespace splitstream

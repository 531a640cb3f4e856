#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitstream {

// Split-finding task family. Regression labels live in [0, M]; classification
// and categorical labels are exactly -1 or +1. In categorical mode the x values
// are unordered category ids, still encoded as integers in [1, N].
enum class Mode { regression, classification, categorical };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);  // accepts reg|cls|cat and long forms

struct Observation {
  std::int64_t x{0};
  double y{0.0};
};

struct DatasetMeta {
  std::int64_t n_obs{0};        // number of stream elements (deletions counted too)
  std::int64_t domain_size{1};  // x ranges over [1, domain_size]
  double label_max{1.0};        // upper bound for regression labels
  std::int64_t n_distinct{0};   // distinct x values actually present
  Mode mode{Mode::regression};
};

// Malformed or out-of-contract input (bad file, bad record, empty stream, ...).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A resource guard tripped: machine memory budget, category-count guard, ...
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict-mode check failed: an algorithm's advertised guarantee did not hold.
struct GuaranteeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An in-memory stream: the element order is the stream order (file order or
// generation order), replayed identically on every pass. Weights, when present,
// are +1/-1 (insert/delete); most algorithms require insert-only streams.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Observation> obs, DatasetMeta meta,
          std::vector<std::int8_t> weights = {});

  const std::vector<Observation>& obs() const { return obs_; }
  const std::vector<std::int8_t>& weights() const { return weights_; }
  const DatasetMeta& meta() const { return meta_; }
  std::int64_t size() const { return static_cast<std::int64_t>(obs_.size()); }
  bool empty() const { return obs_.empty(); }

  std::int8_t weight(std::size_t i) const {
    return weights_.empty() ? std::int8_t{1} : weights_[i];
  }
  bool has_deletions() const;
  // Sum of weights (equals size() for insert-only streams).
  std::int64_t net_size() const;

  // Materializes the net multiset after applying deletions, sorted by (x, y).
  // Throws InputError if some deletion has no matching prior insert.
  Dataset net() const;

 private:
  std::vector<Observation> obs_;
  std::vector<std::int8_t> weights_;
  DatasetMeta meta_;
};

// One label column shared by d attribute columns; attribute(q) projects a
// single-attribute dataset (q is 1-based).
struct MultiDataset {
  std::int64_t n_attrs{0};
  std::vector<std::vector<std::int64_t>> columns;  // [attr][row]
  std::vector<double> labels;
  DatasetMeta meta;  // domain/label bounds shared across attributes

  std::int64_t n_rows() const { return static_cast<std::int64_t>(labels.size()); }
  Dataset attribute(std::int64_t q) const;
};

namespace detail {
// Throws InputError naming `where` (e.g. "line 12") when the observation
// violates the meta contract.
void validate_observation(const Observation& o, const DatasetMeta& meta,
                          const std::string& where);
}  // namespace detail

}  // namespace splitstream

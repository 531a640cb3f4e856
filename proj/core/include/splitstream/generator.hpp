#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "splitstream/data.hpp"

namespace splitstream {

// Seeded synthetic datasets; identical spec -> identical bytes, everywhere.
//
//   piecewise_step  regression. x uniform on [1,N]; y = 0.75*M left of the step
//                   at j* = floor(N/2), 0.25*M right of it, plus uniform noise
//                   of amplitude noise*M/4. noise = 0 makes the optimum loss 0
//                   at exactly j* (given both sides are populated).
//   two_cluster     classification/categorical. x uniform on [1,N]; label +1 on
//                   the low half of the domain, -1 on the high half, flipped
//                   with probability noise. noise = 0 is perfectly separable at
//                   j* = floor(N/2).
//   uniform_noise   structureless baseline: x uniform; y uniform on [0,M]
//                   (regression) or a fair +/-1 coin. noise is ignored.
//   time_drift      non-stationary stream: element i draws x from a window that
//                   slides across [1,N] with stream position; y follows x/N
//                   (regression) or the window side (classification), with
//                   noise-scaled perturbation. Exercises order-sensitivity.
enum class GeneratorKind { piecewise_step, two_cluster, uniform_noise, time_drift };

const char* generator_kind_name(GeneratorKind kind);
GeneratorKind generator_kind_from_name(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind{GeneratorKind::uniform_noise};
  std::int64_t n_obs{0};
  std::int64_t domain_size{1};
  double label_max{1.0};
  double noise{0.0};  // in [0, 1]
  std::uint64_t seed{0};
  // Defaults to the kind's natural mode (piecewise_step -> regression,
  // two_cluster -> classification); uniform_noise/time_drift accept any.
  std::optional<Mode> mode;
};

Dataset generate(const GeneratorSpec& spec);

// Attribute 1 carries the kind's structure; attributes 2..d are uniform x noise
// over the same domain (independent seeds derived from spec.seed).
MultiDataset generate_multi(const GeneratorSpec& spec, std::int64_t n_attrs);

// The split index piecewise_step / two_cluster place their structure at.
std::int64_t planted_split(const GeneratorSpec& spec);

}  // namespace splitstream

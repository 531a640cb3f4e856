#pragma once

#include <optional>
#include <string>

#include "splitstream/data.hpp"

namespace splitstream {

// File formats:
//   CSV   header "x,y" (or "x1,...,xd,y" for d attributes), one record per line.
//   JSONL one object per line: {"x": <int>, "y": <number>} with an optional
//         "w": 1 or -1 insert/delete flag (CSV is insert-only).
// The format is chosen by extension (.csv / .jsonl). Parse errors report the
// 1-based line number. If domain_size / label_max are not supplied they are
// inferred as max(x) / max(y); supplied bounds are enforced per record.
Dataset load_dataset(const std::string& path, Mode mode,
                     std::optional<std::int64_t> domain_size = std::nullopt,
                     std::optional<double> label_max = std::nullopt);

MultiDataset load_multi_dataset(const std::string& path, std::int64_t n_attrs,
                                Mode mode,
                                std::optional<std::int64_t> domain_size = std::nullopt,
                                std::optional<double> label_max = std::nullopt);

void save_dataset(const Dataset& ds, const std::string& path);
void save_multi_dataset(const MultiDataset& ds, const std::string& path);

}  // namespace splitstream

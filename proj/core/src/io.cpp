#include "splitstream/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace splitstream {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string line_tag(std::int64_t line_no) {
  return "line " + std::to_string(line_no);
}

std::int64_t parse_int(const std::string& field, std::int64_t line_no) {
  std::int64_t v = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw InputError(line_tag(line_no) + ": bad integer '" + field + "'");
  }
  return v;
}

double parse_double(const std::string& field, std::int64_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw InputError(line_tag(line_no) + ": bad number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

struct RawRows {
  std::int64_t n_attrs{1};
  std::vector<std::vector<std::int64_t>> xs;  // [attr][row]
  std::vector<double> ys;
  std::vector<std::int8_t> ws;  // empty unless some record carried a weight
};

RawRows read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);

  RawRows rows;
  std::string line;
  std::int64_t line_no = 0;

  if (!std::getline(in, line)) throw InputError(path + ": missing header");
  ++line_no;
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y") {
    throw InputError(path + ": " + line_tag(1) + ": header must be x,y or x1,...,xd,y");
  }
  rows.n_attrs = static_cast<std::int64_t>(header.size()) - 1;
  if (rows.n_attrs == 1) {
    if (header[0] != "x" && header[0] != "x1") {
      throw InputError(path + ": " + line_tag(1) + ": header must be x,y or x1,...,xd,y");
    }
  } else {
    for (std::int64_t q = 0; q < rows.n_attrs; ++q) {
      if (header[static_cast<std::size_t>(q)] != "x" + std::to_string(q + 1)) {
        throw InputError(path + ": " + line_tag(1) + ": header must be x,y or x1,...,xd,y");
      }
    }
  }
  rows.xs.resize(static_cast<std::size_t>(rows.n_attrs));

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (static_cast<std::int64_t>(fields.size()) != rows.n_attrs + 1) {
      throw InputError(line_tag(line_no) + ": expected " +
                       std::to_string(rows.n_attrs + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::int64_t q = 0; q < rows.n_attrs; ++q) {
      rows.xs[static_cast<std::size_t>(q)].push_back(
          parse_int(fields[static_cast<std::size_t>(q)], line_no));
    }
    rows.ys.push_back(parse_double(fields.back(), line_no));
  }
  return rows;
}

RawRows read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);

  RawRows rows;
  rows.xs.resize(1);
  std::string line;
  std::int64_t line_no = 0;
  bool any_weight = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(line_tag(line_no) + ": " + e.what());
    }
    if (!rec.is_object() || !rec.contains("x") || !rec.contains("y")) {
      throw InputError(line_tag(line_no) + ": record needs \"x\" and \"y\"");
    }
    if (!rec["x"].is_number_integer()) {
      throw InputError(line_tag(line_no) + ": \"x\" must be an integer");
    }
    if (!rec["y"].is_number()) {
      throw InputError(line_tag(line_no) + ": \"y\" must be a number");
    }
    rows.xs[0].push_back(rec["x"].get<std::int64_t>());
    rows.ys.push_back(rec["y"].get<double>());
    std::int8_t w = 1;
    if (rec.contains("w")) {
      if (!rec["w"].is_number_integer()) {
        throw InputError(line_tag(line_no) + ": \"w\" must be 1 or -1");
      }
      const auto wi = rec["w"].get<std::int64_t>();
      if (wi != 1 && wi != -1) {
        throw InputError(line_tag(line_no) + ": \"w\" must be 1 or -1");
      }
      w = static_cast<std::int8_t>(wi);
      any_weight = any_weight || w < 0;
    }
    rows.ws.push_back(w);
  }
  if (!any_weight) rows.ws.clear();
  return rows;
}

RawRows read_rows(const std::string& path) {
  if (ends_with(path, ".jsonl")) return read_jsonl(path);
  if (ends_with(path, ".csv")) return read_csv(path);
  throw InputError(path + ": unknown extension (expected .csv or .jsonl)");
}

DatasetMeta infer_meta(const RawRows& rows, Mode mode,
                       std::optional<std::int64_t> domain_size,
                       std::optional<double> label_max) {
  DatasetMeta meta;
  meta.mode = mode;
  if (domain_size) {
    meta.domain_size = *domain_size;
  } else {
    std::int64_t max_x = 1;
    for (const auto& col : rows.xs) {
      for (std::int64_t x : col) max_x = std::max(max_x, x);
    }
    meta.domain_size = max_x;
  }
  if (mode == Mode::regression) {
    if (label_max) {
      meta.label_max = *label_max;
    } else {
      double max_y = 0.0;
      for (double y : rows.ys) max_y = std::max(max_y, y);
      meta.label_max = max_y > 0.0 ? max_y : 1.0;
    }
  } else {
    meta.label_max = 1.0;
  }
  return meta;
}

}  // namespace

Dataset load_dataset(const std::string& path, Mode mode,
                     std::optional<std::int64_t> domain_size,
                     std::optional<double> label_max) {
  RawRows rows = read_rows(path);
  if (rows.n_attrs != 1) {
    throw InputError(path + ": multi-attribute file; pass --attrs " +
                     std::to_string(rows.n_attrs));
  }
  const DatasetMeta meta = infer_meta(rows, mode, domain_size, label_max);

  std::vector<Observation> obs;
  obs.reserve(rows.ys.size());
  for (std::size_t i = 0; i < rows.ys.size(); ++i) {
    Observation o{rows.xs[0][i], rows.ys[i]};
    // Header is line 1, records start at line 2.
    detail::validate_observation(o, meta,
                                 line_tag(static_cast<std::int64_t>(i) + 2));
    obs.push_back(o);
  }
  return Dataset(std::move(obs), meta, std::move(rows.ws));
}

MultiDataset load_multi_dataset(const std::string& path, std::int64_t n_attrs,
                                Mode mode,
                                std::optional<std::int64_t> domain_size,
                                std::optional<double> label_max) {
  RawRows rows = read_rows(path);
  if (rows.n_attrs != n_attrs) {
    throw InputError(path + ": file has " + std::to_string(rows.n_attrs) +
                     " attributes, --attrs says " + std::to_string(n_attrs));
  }
  if (!rows.ws.empty()) {
    throw InputError(path + ": deletions are not supported for multi-attribute data");
  }
  MultiDataset mds;
  mds.n_attrs = n_attrs;
  mds.columns = std::move(rows.xs);
  mds.labels = std::move(rows.ys);
  mds.meta = infer_meta({n_attrs, mds.columns, mds.labels, {}}, mode,
                        domain_size, label_max);
  for (std::int64_t q = 1; q <= n_attrs; ++q) {
    (void)mds.attribute(q);  // validates every column against the meta
  }
  return mds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  if (ends_with(path, ".jsonl")) {
    for (std::size_t i = 0; i < ds.obs().size(); ++i) {
      nlohmann::json rec;
      rec["x"] = ds.obs()[i].x;
      rec["y"] = ds.obs()[i].y;
      if (!ds.weights().empty() && ds.weight(i) < 0) rec["w"] = -1;
      out << rec.dump() << '\n';
    }
    return;
  }
  if (!ds.weights().empty()) {
    throw InputError("CSV cannot carry deletions; write .jsonl instead");
  }
  out << "x,y\n";
  std::ostringstream fmt;
  fmt.precision(17);
  for (const auto& o : ds.obs()) {
    fmt.str("");
    fmt << o.x << ',' << o.y << '\n';
    out << fmt.str();
  }
}

void save_multi_dataset(const MultiDataset& ds, const std::string& path) {
  if (!ends_with(path, ".csv")) {
    throw InputError("multi-attribute data is CSV only");
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  for (std::int64_t q = 1; q <= ds.n_attrs; ++q) {
    out << 'x' << q << ',';
  }
  out << "y\n";
  out.precision(17);
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    for (std::int64_t q = 0; q < ds.n_attrs; ++q) {
      out << ds.columns[static_cast<std::size_t>(q)][i] << ',';
    }
    out << ds.labels[i] << '\n';
  }
}

}  // namespace splitstream

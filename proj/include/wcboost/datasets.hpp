/*
 * Copyright 2026 The wcboost Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Synthetic Gaussian-blob generators for the balanced and imbalanced toy
// problems, stratified train/validation splitting, and dataset file I/O
// (CSV `label,f1,...,fd` and the equivalent JSON-lines form).

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "wcboost/core.hpp"
#include "wcboost/errors.hpp"

namespace wcboost {

// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw_contract("cannot format double");
  return std::string(buf.data(), end);
}

// ---------------------------------------------------------------------------
// Blob specifications
// ---------------------------------------------------------------------------

struct BlobClass {
  std::array<double, 2> mean{};
  // Row-major 2x2 covariance; must be symmetric positive-definite.
  std::array<double, 4> covariance{1.0, 0.0, 0.0, 1.0};
  std::size_t train_count = 1;
  std::size_t test_count = 1;
};

struct BlobSpec {
  std::vector<BlobClass> classes;

  void validate() const {
    if (classes.size() < 2) throw_config("a blob spec needs at least 2 classes");
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const auto& c = classes[k];
      const auto& s = c.covariance;
      const std::string where = "class " + std::to_string(k + 1);
      if (s[1] != s[2]) throw_config(where + ": covariance is not symmetric");
      if (!(s[0] > 0.0) || !(s[0] * s[3] - s[1] * s[2] > 0.0)) {
        throw_config(where + ": covariance is not positive-definite");
      }
      if (c.train_count < 1 || c.test_count < 1) {
        throw_config(where + ": train and test counts must be at least 1");
      }
    }
  }
};

inline void to_json(json& j, const BlobClass& c) {
  j = json{{"mean", c.mean},
           {"covariance", c.covariance},
           {"train_count", c.train_count},
           {"test_count", c.test_count}};
}

inline void from_json(const json& j, BlobClass& c) {
  j.at("mean").get_to(c.mean);
  if (j.contains("covariance")) j.at("covariance").get_to(c.covariance);
  j.at("train_count").get_to(c.train_count);
  j.at("test_count").get_to(c.test_count);
}

inline void to_json(json& j, const BlobSpec& s) { j = json{{"classes", s.classes}}; }
inline void from_json(const json& j, BlobSpec& s) { j.at("classes").get_to(s.classes); }

struct DatasetSplit {
  LabeledDataset train;
  LabeledDataset test;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Standard normals from mt19937_64 via the Box-Muller transform. Both the
// engine and the transform are fully specified, so streams are identical
// across standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  // Uniform on (0, 1), 53 random bits.
  double uniform() {
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline LabeledDataset sample_blobs(const BlobSpec& spec, bool train,
                                   std::uint64_t stream_seed) {
  GaussianSampler gen(stream_seed);
  std::vector<double> features;
  std::vector<int> labels;
  for (std::size_t k = 0; k < spec.classes.size(); ++k) {
    const auto& c = spec.classes[k];
    const auto& s = c.covariance;
    const double l11 = std::sqrt(s[0]);
    const double l21 = s[2] / l11;
    const double l22 = std::sqrt(s[3] - l21 * l21);
    const std::size_t count = train ? c.train_count : c.test_count;
    for (std::size_t i = 0; i < count; ++i) {
      const double z1 = gen.normal();
      const double z2 = gen.normal();
      features.push_back(c.mean[0] + l11 * z1);
      features.push_back(c.mean[1] + l21 * z1 + l22 * z2);
      labels.push_back(static_cast<int>(k));
    }
  }
  return LabeledDataset(std::move(features), 2, std::move(labels),
                        static_cast<int>(spec.classes.size()));
}

}  // namespace detail

// Train and test samples come from independent streams derived from `seed`;
// rows are grouped by class in class order.
inline DatasetSplit generate_blobs(const BlobSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::uint64_t base = detail::splitmix64(seed);
  return DatasetSplit{detail::sample_blobs(spec, true, detail::splitmix64(base ^ 0x7261696eULL)),
                      detail::sample_blobs(spec, false, detail::splitmix64(base ^ 0x74657374ULL))};
}

// Five isotropic blobs (sigma = 0.8). Class 2 sits midway between classes 1
// and 3 at separation 1.4; classes 4 and 5 lie 3.5 above classes 1 and 3.
// An average-error minimiser gives class 2 roughly twice the error of its
// neighbours. 100 training and 100000 test instances per class.
inline BlobSpec balanced_toy_spec() {
  const std::array<double, 4> cov{0.64, 0.0, 0.0, 0.64};
  BlobSpec spec;
  for (const auto& m : std::vector<std::array<double, 2>>{
           {-1.4, 0.0}, {0.0, 0.0}, {1.4, 0.0}, {-1.4, 3.5}, {1.4, 3.5}}) {
    spec.classes.push_back(BlobClass{m, cov, 100, 100000});
  }
  return spec;
}

// Four unit-variance blobs: minority class 2 at the origin between classes 1
// and 3 (separation 2.5) with class 4 at (0, 3.5). The minimax class error is
// about 0.15, so theta = 0.75 is attainable. Class 2 gets min_nk training / 10000 test instances; the others
// 10 * min_nk / 100000.
inline BlobSpec imbalanced_toy_spec(std::size_t min_nk) {
  if (min_nk < 1) throw_config("min_nk must be at least 1");
  const std::array<double, 4> cov{1.0, 0.0, 0.0, 1.0};
  BlobSpec spec;
  spec.classes = {
      BlobClass{{-2.5, 0.0}, cov, 10 * min_nk, 100000},
      BlobClass{{0.0, 0.0}, cov, min_nk, 10000},
      BlobClass{{2.5, 0.0}, cov, 10 * min_nk, 100000},
      BlobClass{{0.0, 3.5}, cov, 10 * min_nk, 100000},
  };
  return spec;
}

inline DatasetSplit gen_balanced_toy(std::uint64_t seed) {
  return generate_blobs(balanced_toy_spec(), seed);
}

inline DatasetSplit gen_imbalanced_toy(std::size_t min_nk, std::uint64_t seed) {
  return generate_blobs(imbalanced_toy_spec(min_nk), seed);
}

// Stratified split: each class sends round(ratio * n_k) instances to the
// validation side, keeping at least one instance on each side when n_k >= 2.
inline DatasetSplit train_validation_split(const LabeledDataset& data,
                                           double validation_ratio,
                                           std::uint64_t seed) {
  if (!(validation_ratio > 0.0 && validation_ratio < 1.0)) {
    throw_config("validation ratio must lie in (0, 1)");
  }
  auto parts = partition_by_class(data);
  std::mt19937_64 rng(detail::splitmix64(seed ^ 0x76616c6964ULL));
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  for (auto& rows : parts) {
    std::shuffle(rows.begin(), rows.end(), rng);
    auto n_val = static_cast<std::size_t>(
        std::llround(validation_ratio * static_cast<double>(rows.size())));
    if (rows.size() >= 2) {
      n_val = std::clamp<std::size_t>(n_val, 1, rows.size() - 1);
    } else {
      n_val = 0;
    }
    val_rows.insert(val_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_val));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_val), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
  return DatasetSplit{data.subset(train_rows), data.subset(val_rows)};
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Rows collected from a file with 1-based external labels.
struct RawRows {
  std::vector<double> features;
  std::vector<int> labels;  // 1-based, as written
  std::vector<std::size_t> lines;
  std::size_t dim = 0;
};

inline LabeledDataset finish_rows(RawRows raw, std::optional<int> num_classes) {
  if (raw.labels.empty()) throw ParseError(1, "no data rows");
  int k = num_classes.value_or(0);
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    if (raw.labels[i] < 1) {
      throw LabelError(raw.lines[i], "label " + std::to_string(raw.labels[i]) + " < 1");
    }
    if (!num_classes) k = std::max(k, raw.labels[i]);
  }
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    if (raw.labels[i] > k) {
      throw LabelError(raw.lines[i], "label " + std::to_string(raw.labels[i]) +
                                         " outside 1.." + std::to_string(k));
    }
    --raw.labels[i];
  }
  return LabeledDataset(std::move(raw.features), raw.dim, std::move(raw.labels), k);
}

}  // namespace detail

// CSV with header `label,f1,...,fd`. Without `num_classes`, K is the largest
// label present.
inline LabeledDataset read_csv(std::istream& in,
                               std::optional<int> num_classes = std::nullopt) {
  std::string line;
  std::size_t line_no = 0;
  detail::RawRows raw;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto cells = detail::split_commas(trimmed);
    if (!header) {
      if (cells.front() != "label" || cells.size() < 2) {
        throw ParseError(line_no, "expected header 'label,f1,...,fd'");
      }
      raw.dim = cells.size() - 1;
      header = true;
      continue;
    }
    if (cells.size() != raw.dim + 1) {
      throw ParseError(line_no, "expected " + std::to_string(raw.dim + 1) +
                                    " columns, found " + std::to_string(cells.size()));
    }
    const auto label = detail::parse_number<int>(cells[0]);
    if (!label) throw ParseError(line_no, "bad label '" + std::string(cells[0]) + "'");
    for (std::size_t f = 1; f < cells.size(); ++f) {
      const auto v = detail::parse_number<double>(cells[f]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(line_no, "bad feature '" + std::string(cells[f]) + "'");
      }
      raw.features.push_back(*v);
    }
    raw.labels.push_back(*label);
    raw.lines.push_back(line_no);
  }
  if (!header) throw ParseError(1, "missing header");
  return detail::finish_rows(std::move(raw), num_classes);
}

// One JSON object per line: {"label": k, "features": [...]}.
inline LabeledDataset read_jsonl(std::istream& in,
                                 std::optional<int> num_classes = std::nullopt) {
  std::string line;
  std::size_t line_no = 0;
  detail::RawRows raw;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json row;
    std::vector<double> x;
    int label = 0;
    try {
      row = json::parse(line);
      label = row.at("label").get<int>();
      x = row.at("features").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (x.empty()) throw ParseError(line_no, "empty feature vector");
    if (raw.dim == 0) raw.dim = x.size();
    if (x.size() != raw.dim) throw ParseError(line_no, "feature dimension changed");
    raw.features.insert(raw.features.end(), x.begin(), x.end());
    raw.labels.push_back(label);
    raw.lines.push_back(line_no);
  }
  return detail::finish_rows(std::move(raw), num_classes);
}

inline void write_csv(std::ostream& os, const LabeledDataset& data) {
  os << "label";
  for (std::size_t f = 0; f < data.dim(); ++f) os << ",f" << (f + 1);
  os << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    os << (data.label(i) + 1);
    for (double v : data.features(i)) os << ',' << format_double(v);
    os << '\n';
  }
}

inline void write_jsonl(std::ostream& os, const LabeledDataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto x = data.features(i);
    os << json{{"label", data.label(i) + 1},
               {"features", std::vector<double>(x.begin(), x.end())}}
              .dump()
       << '\n';
  }
}

// Reads CSV or JSON lines; the format is detected from the first non-blank
// character ('{' means JSON lines).
inline LabeledDataset load_dataset(const std::string& path,
                                   std::optional<int> num_classes = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  char first = 0;
  while (in.get(first) && std::isspace(static_cast<unsigned char>(first))) {
  }
  in.clear();
  in.seekg(0);
  return first == '{' ? read_jsonl(in, num_classes) : read_csv(in, num_classes);
}

inline LabeledDataset load_csv(const std::string& path,
                               std::optional<int> num_classes = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  return read_csv(in, num_classes);
}

inline void save_csv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  write_csv(out, data);
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path + "'");
}

}  // namespace wcboost

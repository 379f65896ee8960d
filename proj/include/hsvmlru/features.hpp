/*
 * Copyright 2026 The hsvmlru Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hsvmlru/labeling.hpp"
#include "hsvmlru/workload.hpp"

namespace hsvmlru {

enum class FeatureSchema { Online, History };

std::string_view to_string(FeatureSchema s);
std::optional<FeatureSchema> parse_schema(std::string_view s);

// Column names in vector order.
const std::vector<std::string>& feature_names(FeatureSchema s);
inline Eigen::Index feature_count(FeatureSchema s) {
  return static_cast<Eigen::Index>(feature_names(s).size());
}
// Non-categorical columns (counts, sizes, times).
const std::vector<Eigen::Index>& continuous_columns(FeatureSchema s);

inline constexpr std::uint64_t kJobNameBuckets = 16;

using FeatureVector = Eigen::VectorXd;

struct BlockStats {
  std::uint64_t last_access_ms = 0;
  std::uint64_t count = 0;
};

// Per-block access history consumed by the online feature extractor.
class AccessStats {
 public:
  explicit AccessStats(std::uint64_t trace_start_ms = 0) : start_ms_(trace_start_ms) {}

  void record(const Request& r);
  const BlockStats* find(const BlockId& b) const;
  std::uint64_t trace_start_ms() const { return start_ms_; }

 private:
  std::uint64_t start_ms_;
  std::unordered_map<BlockId, BlockStats> stats_;
};

// [type one-hot x3, size_mb, recency_ms, frequency]. A first access has
// frequency 0 and recency = time since trace start.
FeatureVector extract_online_features(const Request& r, const DataBlock& block, const AccessStats& stats);

FeatureVector extract_history_features(const HistoryRow& row);

struct Dataset {
  FeatureSchema schema = FeatureSchema::Online;
  Eigen::MatrixXd x;  // one row per sample
  std::vector<Label> y;

  std::size_t size() const { return y.size(); }
  std::size_t count(Label l) const;
};

Dataset make_dataset(FeatureSchema schema, const std::vector<FeatureVector>& rows, std::vector<Label> labels);

// Features of every request (stats strictly before it) labelled by its oracle label.
Dataset online_dataset(const Trace& labeled_trace);
Dataset history_dataset(const std::vector<LabeledRow>& rows);

Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& rows);

struct Scaler {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  friend bool operator==(const Scaler& a, const Scaler& b) {
    return a.min.size() == b.min.size() && a.min == b.min && a.max == b.max;
  }
};

Scaler fit_scaler(const Dataset& train);

// (x - min) / (max - min) per column; constant columns map to 0. Values
// outside the training range are not clipped.
template <typename Derived>
Eigen::MatrixXd scale_rows(const Scaler& s, const Eigen::MatrixBase<Derived>& x) {
  const Eigen::ArrayXd span = (s.max - s.min).array();
  const Eigen::ArrayXd inv = (span > 0.0).select(span.inverse(), 0.0);
  Eigen::MatrixXd out = (x.rowwise() - s.min.transpose()).array().rowwise() * inv.transpose();
  return out;
}

Dataset apply_scaler(const Scaler& s, Dataset d);

// Deterministic shuffle; train gets round(n * train_fraction) rows.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction, std::uint64_t seed);

struct OutlierResult {
  Dataset data;
  std::size_t dropped = 0;
};

// Drops rows where a continuous column lies more than k * IQR from its median.
// Columns with IQR 0 are left alone.
OutlierResult eliminate_outliers(const Dataset& d, double k = 5.0);

// dataset.csv: header of feature names then "label".
void write_dataset_csv(const Dataset& d, std::ostream& out);
Dataset parse_dataset_csv(std::istream& in);

}  // namespace hsvmlru

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

#include "hsvmlru/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "hsvmlru/csv.hpp"
#include "hsvmlru/error.hpp"
#include "hsvmlru/rng.hpp"

namespace hsvmlru {

std::string_view to_string(FeatureSchema s) { return s == FeatureSchema::Online ? "online" : "history"; }

std::optional<FeatureSchema> parse_schema(std::string_view s) {
  if (s == "online") return FeatureSchema::Online;
  if (s == "history") return FeatureSchema::History;
  return std::nullopt;
}

const std::vector<std::string>& feature_names(FeatureSchema s) {
  static const std::vector<std::string> online = {"type_map_input", "type_intermediate", "type_reduce_output",
                                                  "size_mb",        "recency_ms",        "frequency"};
  static const std::vector<std::string> history = [] {
    std::vector<std::string> n = {"job_name_bucket", "maps_total", "maps_completed", "reduces_total",
                                  "reduces_completed"};
    for (auto st : kJobStatuses) n.push_back("job_status_" + std::string(to_string(st)));
    for (auto a : {Affinity::Low, Affinity::Medium, Affinity::High}) {
      n.push_back("cache_affinity_" + std::string(to_string(a)));
    }
    n.insert(n.end(), {"start_time", "finish_time", "task_type_map", "task_type_reduce"});
    for (auto st : kTaskStatuses) n.push_back("task_status_" + std::string(to_string(st)));
    n.insert(n.end(), {"avg_map_time", "avg_reduce_time", "progress", "target_map_input", "target_reduce_input"});
    return n;
  }();
  return s == FeatureSchema::Online ? online : history;
}

const std::vector<Eigen::Index>& continuous_columns(FeatureSchema s) {
  static const std::vector<Eigen::Index> online = {3, 4, 5};
  static const std::vector<Eigen::Index> history = {1, 2, 3, 4, 15, 16, 26, 27, 28};
  return s == FeatureSchema::Online ? online : history;
}

void AccessStats::record(const Request& r) {
  auto& s = stats_[r.block];
  s.last_access_ms = r.time_ms;
  ++s.count;
}

const BlockStats* AccessStats::find(const BlockId& b) const {
  auto it = stats_.find(b);
  return it == stats_.end() ? nullptr : &it->second;
}

FeatureVector extract_online_features(const Request& r, const DataBlock& block, const AccessStats& stats) {
  if (block.id != r.block) throw std::invalid_argument("block does not match request");
  FeatureVector v = FeatureVector::Zero(6);
  v(static_cast<Eigen::Index>(block.type)) = 1.0;
  v(3) = static_cast<double>(block.size_mb);
  if (const auto* s = stats.find(r.block)) {
    v(4) = static_cast<double>(r.time_ms - s->last_access_ms);
    v(5) = static_cast<double>(s->count);
  } else {
    v(4) = static_cast<double>(r.time_ms - stats.trace_start_ms());
    v(5) = 0.0;
  }
  return v;
}

FeatureVector extract_history_features(const HistoryRow& row) {
  const auto& j = row.job;
  const auto& t = row.task;
  FeatureVector v = FeatureVector::Zero(feature_count(FeatureSchema::History));
  v(0) = static_cast<double>(fnv1a(j.job_name) % kJobNameBuckets);
  v(1) = static_cast<double>(j.maps_total);
  v(2) = static_cast<double>(j.maps_completed);
  v(3) = static_cast<double>(j.reduces_total);
  v(4) = static_cast<double>(j.reduces_completed);
  v(5 + static_cast<Eigen::Index>(j.job_status)) = 1.0;
  v(12 + static_cast<Eigen::Index>(j.cache_affinity)) = 1.0;
  v(15) = static_cast<double>(j.start_time_ms);
  v(16) = static_cast<double>(j.finish_time_ms);
  v(17 + static_cast<Eigen::Index>(t.task_type)) = 1.0;
  v(19 + static_cast<Eigen::Index>(t.task_status)) = 1.0;
  v(26) = static_cast<double>(t.avg_map_time_ms);
  v(27) = static_cast<double>(t.avg_reduce_time_ms);
  v(28) = t.progress_pct;
  v(29 + static_cast<Eigen::Index>(row.target)) = 1.0;
  return v;
}

std::size_t Dataset::count(Label l) const { return static_cast<std::size_t>(std::count(y.begin(), y.end(), l)); }

Dataset make_dataset(FeatureSchema schema, const std::vector<FeatureVector>& rows, std::vector<Label> labels) {
  if (rows.size() != labels.size()) throw std::invalid_argument("rows/labels size mismatch");
  Dataset d;
  d.schema = schema;
  const auto n_features = feature_count(schema);
  d.x.resize(static_cast<Eigen::Index>(rows.size()), n_features);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n_features) throw std::invalid_argument("feature vector length mismatch");
    if (!rows[i].allFinite()) throw DataError("non-finite feature value");
    d.x.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  d.y = std::move(labels);
  return d;
}

Dataset online_dataset(const Trace& trace) {
  AccessStats stats(trace.requests.empty() ? 0 : trace.requests.front().time_ms);
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  rows.reserve(trace.requests.size());
  for (const auto& r : trace.requests) {
    if (!r.oracle_label) throw DataError("request " + std::to_string(r.seq) + " has no label");
    rows.push_back(extract_online_features(r, trace.block(r.block), stats));
    labels.push_back(*r.oracle_label);
    stats.record(r);
  }
  return make_dataset(FeatureSchema::Online, rows, std::move(labels));
}

Dataset history_dataset(const std::vector<LabeledRow>& rows) {
  std::vector<FeatureVector> x;
  std::vector<Label> y;
  x.reserve(rows.size());
  for (const auto& r : rows) {
    x.push_back(extract_history_features(r.row));
    y.push_back(r.label);
  }
  return make_dataset(FeatureSchema::History, x, std::move(y));
}

Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.schema = d.schema;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), d.x.cols());
  out.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = d.x.row(static_cast<Eigen::Index>(rows[i]));
    out.y.push_back(d.y.at(rows[i]));
  }
  return out;
}

Scaler fit_scaler(const Dataset& train) {
  if (train.size() == 0) throw std::invalid_argument("cannot fit scaler on an empty dataset");
  return {train.x.colwise().minCoeff().transpose(), train.x.colwise().maxCoeff().transpose()};
}

Dataset apply_scaler(const Scaler& s, Dataset d) {
  if (s.min.size() != d.x.cols()) throw std::invalid_argument("scaler dimension mismatch");
  d.x = scale_rows(s, d.x);
  return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  }
  if (d.size() == 0) throw std::invalid_argument("cannot split an empty dataset");
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(idx);
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(d.size()) * train_fraction));
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  return {select_rows(d, train), select_rows(d, test)};
}

namespace {

// Linear-interpolated quantile of sorted values.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

OutlierResult eliminate_outliers(const Dataset& d, double k) {
  if (d.size() == 0) return {d, 0};
  std::vector<bool> keep(d.size(), true);
  for (auto c : continuous_columns(d.schema)) {
    std::vector<double> col(d.x.col(c).data(), d.x.col(c).data() + d.x.rows());
    std::sort(col.begin(), col.end());
    const double iqr = quantile(col, 0.75) - quantile(col, 0.25);
    if (iqr <= 0.0) continue;
    const double median = quantile(col, 0.5);
    for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
      if (std::abs(d.x(i, c) - median) > k * iqr) keep[static_cast<std::size_t>(i)] = false;
    }
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) rows.push_back(i);
  }
  return {select_rows(d, rows), d.size() - rows.size()};
}

void write_dataset_csv(const Dataset& d, std::ostream& out) {
  auto header = feature_names(d.schema);
  header.push_back("label");
  out << csv::join(header) << '\n';
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    std::vector<std::string> f;
    f.reserve(static_cast<std::size_t>(d.x.cols()) + 1);
    for (Eigen::Index c = 0; c < d.x.cols(); ++c) f.push_back(csv::format(d.x(i, c)));
    f.push_back(std::to_string(to_int(d.y[static_cast<std::size_t>(i)])));
    out << csv::join(f) << '\n';
  }
}

Dataset parse_dataset_csv(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw DataError("dataset csv: empty input");
  auto header = csv::split(text);
  if (header.empty() || header.back() != "label") throw DataError("dataset csv: last column must be 'label'");
  header.pop_back();
  std::optional<FeatureSchema> schema;
  for (auto s : {FeatureSchema::Online, FeatureSchema::History}) {
    if (header == feature_names(s)) schema = s;
  }
  if (!schema) throw DataError("dataset csv: header matches no feature schema");
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  std::size_t line = 1;
  const auto width = header.size();
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const auto f = csv::split(text);
    if (f.size() != width + 1) throw DataError("line " + std::to_string(line) + ": wrong field count");
    FeatureVector v(static_cast<Eigen::Index>(width));
    for (std::size_t c = 0; c < width; ++c) {
      auto x = csv::to_double(f[c]);
      if (!x) throw DataError("line " + std::to_string(line) + ": bad number '" + f[c] + "'");
      v(static_cast<Eigen::Index>(c)) = *x;
    }
    if (f.back() != "0" && f.back() != "1") throw DataError("line " + std::to_string(line) + ": label must be 0 or 1");
    rows.push_back(std::move(v));
    labels.push_back(f.back() == "1" ? Label::Reused : Label::NotReused);
  }
  return make_dataset(*schema, rows, std::move(labels));
}

}  // namespace hsvmlru

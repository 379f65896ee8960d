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

#include "doctest.h"

#include <set>
#include <sstream>

#include "hsvmlru/error.hpp"
#include "hsvmlru/features.hpp"
#include "hsvmlru/labeling.hpp"

using namespace hsvmlru;

namespace {

Request req(std::uint64_t seq, std::uint64_t t, const char* block) {
  Request r;
  r.seq = seq;
  r.time_ms = t;
  r.task_id = "a0.m-0";
  r.block = BlockId(block);
  return r;
}

HistoryRow history_row(Affinity a, TaskStatus ts) {
  HistoryRow h;
  h.job.job_id = "job_1";
  h.job.job_name = "grep";
  h.job.maps_total = 4;
  h.job.maps_completed = 2;
  h.job.reduces_total = 1;
  h.job.job_status = JobStatus::Running;
  h.job.cache_affinity = a;
  h.job.start_time_ms = 100;
  h.job.finish_time_ms = 100;
  h.task.job_id = "job_1";
  h.task.task_status = ts;
  h.task.progress_pct = ts == TaskStatus::Succeeded ? 100.0 : 40.0;
  return h;
}

Dataset column(std::initializer_list<double> v) {
  std::vector<FeatureVector> rows;
  std::vector<Label> y;
  for (double x : v) {
    FeatureVector f = FeatureVector::Zero(6);
    f(3) = x;
    rows.push_back(f);
    y.push_back(Label::Reused);
  }
  return make_dataset(FeatureSchema::Online, rows, y);
}

Dataset numbered(std::size_t n) {
  std::vector<FeatureVector> rows;
  std::vector<Label> y;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector f = FeatureVector::Zero(6);
    f(3) = static_cast<double>(i);
    rows.push_back(f);
    y.push_back(label_from_bool(i % 2 == 0));
  }
  return make_dataset(FeatureSchema::Online, rows, y);
}

}  // namespace

TEST_CASE("online vector fields") {
  const DataBlock b{BlockId("b"), 64, DataType::MapInput, {}};
  AccessStats stats(0);
  stats.record(req(0, 0, "b"));
  stats.record(req(1, 500, "b"));
  stats.record(req(2, 1000, "b"));
  const auto f = extract_online_features(req(3, 2000, "b"), b, stats);
  FeatureVector expect(6);
  expect << 1, 0, 0, 64, 1000, 3;
  CHECK(f == expect);
}

TEST_CASE("first access") {
  const DataBlock b{BlockId("b"), 128, DataType::Intermediate, {}};
  AccessStats stats(40);
  const auto f = extract_online_features(req(0, 250, "b"), b, stats);
  CHECK(f(5) == 0.0);
  CHECK(f(4) == 210.0);
  CHECK(f(0) == 0.0);
  CHECK(f(1) == 1.0);
  CHECK(f(2) == 0.0);
  CHECK(f(3) == 128.0);
}

TEST_CASE("history vectors") {
  const auto lo = extract_history_features(history_row(Affinity::Low, TaskStatus::Running));
  const auto hi = extract_history_features(history_row(Affinity::High, TaskStatus::Running));
  REQUIRE(lo.size() == feature_count(FeatureSchema::History));
  std::set<Eigen::Index> diff;
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (lo(i) != hi(i)) diff.insert(i);
  }
  CHECK(diff == std::set<Eigen::Index>{12, 14});
  const std::vector<std::string>& names = feature_names(FeatureSchema::History);
  for (Eigen::Index i : {12, 13, 14}) CHECK(names[static_cast<std::size_t>(i)].rfind("cache_affinity_", 0) == 0);

  const auto done = extract_history_features(history_row(Affinity::Low, TaskStatus::Succeeded));
  CHECK(done(28) == 100.0);
  CHECK(names[28] == "progress");
}

TEST_CASE("history dataset width is constant") {
  WorkloadSpec s;
  s.apps = {AppSpec{"Grep", Affinity::High, 4, 1.0, std::nullopt, 1}};
  const auto d = history_dataset(label_history(synthesize_history(s, 1)));
  CHECK(d.x.cols() == feature_count(FeatureSchema::History));
  CHECK(d.size() == static_cast<std::size_t>(d.x.rows()));
}

TEST_CASE("min-max scaling") {
  SUBCASE("[0,5,10]") {
    const auto d = column({0, 5, 10});
    const auto s = apply_scaler(fit_scaler(d), d);
    CHECK(s.x(0, 3) == 0.0);
    CHECK(s.x(1, 3) == 0.5);
    CHECK(s.x(2, 3) == 1.0);
  }
  SUBCASE("constant column") {
    const auto d = column({3, 3, 3});
    const auto s = apply_scaler(fit_scaler(d), d);
    for (int i = 0; i < 3; ++i) CHECK(s.x(i, 3) == 0.0);
  }
  SUBCASE("no clipping above the training max") {
    const auto sc = fit_scaler(column({0, 10}));
    const auto t = apply_scaler(sc, column({15}));
    CHECK(t.x(0, 3) == 1.5);
  }
}

TEST_CASE("75/25 split") {
  const auto d = numbered(100);
  const auto [tr, te] = split_dataset(d, 0.75, 3);
  CHECK(tr.size() == 75);
  CHECK(te.size() == 25);
  const auto [tr2, te2] = split_dataset(d, 0.75, 3);
  CHECK(tr2.x == tr.x);
  CHECK(te2.y == te.y);
  std::set<double> all;
  for (Eigen::Index i = 0; i < tr.x.rows(); ++i) all.insert(tr.x(i, 3));
  for (Eigen::Index i = 0; i < te.x.rows(); ++i) all.insert(te.x(i, 3));
  CHECK(all.size() == 100);
  CHECK_THROWS_AS(split_dataset(d, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(d, 0.0, 0), std::invalid_argument);
}

TEST_CASE("outlier elimination") {
  std::vector<FeatureVector> rows;
  std::vector<Label> y;
  for (int i = 0; i < 20; ++i) {
    FeatureVector f = FeatureVector::Zero(6);
    f(0) = 1;
    f(3) = 64;
    f(4) = 100 + i;
    f(5) = i % 4;
    rows.push_back(f);
    y.push_back(Label::Reused);
  }
  rows[7](4) = 1e9;
  const auto res = eliminate_outliers(make_dataset(FeatureSchema::Online, rows, y));
  CHECK(res.dropped == 1);
  CHECK(res.data.size() == 19);
  for (Eigen::Index i = 0; i < res.data.x.rows(); ++i) CHECK(res.data.x(i, 4) < 1e9);
}

TEST_CASE("online dataset from a labeled trace") {
  const auto t = fig2_trace();
  const auto d = online_dataset(t);
  REQUIRE(d.size() == 10);
  CHECK(d.schema == FeatureSchema::Online);
  CHECK(d.x(7, 5) == 1.0);  // DB2 seen once before
  CHECK(d.x(0, 5) == 0.0);
  CHECK(d.y[1] == Label::Reused);
  Trace unlabeled = t;
  unlabeled.requests[3].oracle_label.reset();
  CHECK_THROWS_AS(online_dataset(unlabeled), DataError);
}

TEST_CASE("dataset csv round trip") {
  WorkloadSpec s;
  s.apps = {AppSpec{"Grep", Affinity::High, 4, 1.0, std::nullopt, 1}};
  for (const auto& d : {online_dataset(fig2_trace()), history_dataset(label_history(synthesize_history(s, 2)))}) {
    std::ostringstream a;
    write_dataset_csv(d, a);
    std::istringstream in(a.str());
    const auto back = parse_dataset_csv(in);
    CHECK(back.schema == d.schema);
    CHECK(back.x == d.x);
    CHECK(back.y == d.y);
    std::ostringstream b;
    write_dataset_csv(back, b);
    CHECK(a.str() == b.str());
  }
}

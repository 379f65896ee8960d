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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hsvmlru/classifier.hpp"
#include "hsvmlru/cluster.hpp"
#include "hsvmlru/svm.hpp"
#include "hsvmlru/workload.hpp"

namespace hsvmlru {

struct SimResult {
  std::string scenario;
  std::string workload;
  std::size_t cache_blocks = 0;
  int block_mb = 0;
  std::vector<AccessOutcome> outcomes;
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t evictions = 0;
  std::int64_t bytes_hit_mb = 0;
  std::int64_t bytes_total_mb = 0;

  std::size_t requests() const { return hits + misses; }
};

// Per-block access costs.
struct CostModel {
  double t_cache_ms = 10.0;
  double t_disk_ms = 640.0;
  double t_cpu_ms = 50.0;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

void validate(const CostModel& cm);
// 64 MB defaults; 128 MB blocks double disk and cpu time.
CostModel default_cost_model(int block_mb);
// "tc,td,tcpu"
CostModel parse_cost_model(std::string_view s);

std::string scenario_name(const PolicyConfig& p);

// Replays `trace` on a fresh cluster. `classifier` is required for hsvmlru.
SimResult run_simulation(const Trace& trace, const ClusterConfig& cfg, const PolicyConfig& policy,
                         const Classifier* classifier);

double hit_ratio(const SimResult& r);
double byte_hit_ratio(const SimResult& r);
// 100 * (hr_new - hr_base) / hr_base
double improvement_ratio(double hr_new, double hr_base);
// hits * t_cache + misses * t_disk + requests * t_cpu
double model_runtime(const SimResult& r, const CostModel& cm);
double normalized_runtime(double runtime, double baseline_nocache);

struct RunRecord {
  SimResult result;
  double runtime_ms = 0.0;
};

struct ReportRow {
  std::string scenario;
  std::string workload;
  std::size_t cache_blocks = 0;
  int block_mb = 0;
  std::size_t requests = 0;
  std::size_t hits = 0;
  std::size_t misses = 0;
  double hit_ratio = 0.0;
  double byte_hit_ratio = 0.0;
  std::optional<double> ir_vs_lru_pct;       // absent when there is no LRU run or its hit ratio is 0
  double runtime_ms = 0.0;
  std::optional<double> normalized_runtime;  // absent without a nocache run

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
  std::vector<ReportRow> rows;

  const ReportRow* find(std::string_view scenario, std::string_view workload, std::size_t cache_blocks,
                        int block_mb) const;
  friend bool operator==(const Report&, const Report&) = default;
};

// Rows sorted by (scenario, workload, block_mb, cache_blocks). IR and
// normalized runtime are computed within each (workload, block_mb, cache_blocks) group.
Report make_report(const std::vector<RunRecord>& runs);

std::vector<PolicyConfig> default_scenarios();

// "lo:hi:step"
std::vector<std::size_t> parse_size_range(std::string_view s);
// 6..24 step 2 for 64 MB blocks, 6..12 step 2 for 128 MB.
std::vector<std::size_t> default_sweep_sizes(int block_mb);

Report sweep_cache_sizes(const Trace& trace, const ClusterConfig& cfg, const std::vector<std::size_t>& sizes,
                         const std::vector<PolicyConfig>& scenarios, const Classifier* classifier,
                         const CostModel& cost);

struct IrRow {
  std::size_t cache_blocks = 0;
  std::optional<double> ir_64mb;
  std::optional<double> ir_128mb;
};

// hsvmlru IR over LRU per cache size; N/A where a block size was not swept.
std::vector<IrRow> ir_table(const Report& report);

// Single-node hit-ratio benchmark: about 2 GB of input split into blocks.
WorkloadSpec benchmark_spec(int block_mb);

// Application templates: Sort, WordCount, Grep, Join, Aggregation.
AppSpec app_template(const std::string& name, std::size_t n_blocks, double reuse_factor);

// Four-application workloads W1..W6.
std::vector<WorkloadSpec> table8_workloads(int block_mb = 64, std::size_t blocks_per_app = 160,
                                           double reuse_factor = 1.0);

// Builds the classifier used for hsvmlru runs of one workload.
using ClassifierSource = std::function<Classifier(const WorkloadSpec& spec, std::uint64_t seed)>;

ClassifierSource oracle_source();

// Trains an online-schema SVM on a separate trace of the same workload
// (seed + seed_offset), subsampled to at most max_rows rows.
ClassifierSource trained_model_source(TrainConfig cfg, std::uint64_t seed_offset = 1000,
                                      std::size_t max_rows = 1500);

// Online dataset from a fresh trace of `spec`, subsampled to max_rows.
Dataset online_training_set(const WorkloadSpec& spec, std::uint64_t seed, std::size_t max_rows);

struct AppRow {
  std::string workload;
  std::size_t app_index = 0;
  std::string app;
  std::string scenario;
  std::size_t requests = 0;
  std::size_t hits = 0;
  double runtime_ms = 0.0;
  std::optional<double> normalized_runtime;
};

struct SuiteResult {
  Report report;
  std::vector<AppRow> apps;
};

SuiteResult run_workload_suite(const std::vector<WorkloadSpec>& specs, const ClusterConfig& cfg,
                               const CostModel& cost, const ClassifierSource& source, std::uint64_t seed,
                               const std::vector<PolicyConfig>& scenarios = default_scenarios());

// Mean normalized runtime of `scenario` over the workloads in a suite report.
double mean_normalized_runtime(const Report& r, std::string_view scenario);

}  // namespace hsvmlru

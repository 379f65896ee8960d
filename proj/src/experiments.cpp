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

#include "hsvmlru/experiments.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "hsvmlru/csv.hpp"
#include "hsvmlru/error.hpp"
#include "hsvmlru/rng.hpp"

namespace hsvmlru {

void validate(const CostModel& cm) {
  if (cm.t_cache_ms < 0 || cm.t_disk_ms < 0 || cm.t_cpu_ms < 0) throw std::invalid_argument("costs must be non-negative");
  if (cm.t_disk_ms < cm.t_cache_ms) throw std::invalid_argument("t_disk_ms must be >= t_cache_ms");
}

CostModel default_cost_model(int block_mb) {
  CostModel cm;
  if (block_mb == 128) {
    cm.t_disk_ms *= 2;
    cm.t_cpu_ms *= 2;
  }
  return cm;
}

CostModel parse_cost_model(std::string_view s) {
  const auto f = csv::split(s);
  if (f.size() != 3) throw std::invalid_argument("cost model must be tc,td,tcpu");
  CostModel cm;
  double* out[] = {&cm.t_cache_ms, &cm.t_disk_ms, &cm.t_cpu_ms};
  for (std::size_t i = 0; i < 3; ++i) {
    auto v = csv::to_double(f[i]);
    if (!v) throw std::invalid_argument("cost model: bad number '" + f[i] + "'");
    *out[i] = *v;
  }
  validate(cm);
  return cm;
}

std::string scenario_name(const PolicyConfig& p) {
  std::string s(to_string(p.id));
  if (p.id == PolicyId::HsvmLru && p.demotion == HitDemotion::Top) s += "-top";
  return s;
}

SimResult run_simulation(const Trace& trace, const ClusterConfig& cfg, const PolicyConfig& policy,
                         const Classifier* classifier) {
  if (policy.id == PolicyId::HsvmLru && !classifier) throw std::invalid_argument("hsvmlru requires a classifier");
  auto state = build_cluster(cfg, trace.catalog);
  AccessStats stats(trace.requests.empty() ? 0 : trace.requests.front().time_ms);
  SimResult res;
  res.scenario = scenario_name(policy);
  res.workload = trace.meta.workload_name;
  res.cache_blocks = cfg.cache_capacity_blocks;
  res.block_mb = cfg.block_size_mb;
  res.outcomes.reserve(trace.requests.size());
  for (const auto& r : trace.requests) {
    auto out = state.process_request(r, policy, classifier, stats);
    stats.record(r);
    const auto size = state.block(r.block).size_mb;
    res.bytes_total_mb += size;
    if (out.hit) {
      ++res.hits;
      res.bytes_hit_mb += size;
    } else {
      ++res.misses;
    }
    if (out.evicted) ++res.evictions;
    res.outcomes.push_back(std::move(out));
  }
  state.check_coherence();
  return res;
}

double hit_ratio(const SimResult& r) {
  if (r.requests() == 0) throw std::invalid_argument("hit ratio of an empty result");
  return static_cast<double>(r.hits) / static_cast<double>(r.requests());
}

double byte_hit_ratio(const SimResult& r) {
  if (r.bytes_total_mb <= 0) throw std::invalid_argument("byte hit ratio with zero bytes requested");
  return static_cast<double>(r.bytes_hit_mb) / static_cast<double>(r.bytes_total_mb);
}

double improvement_ratio(double hr_new, double hr_base) {
  if (!(hr_base > 0.0)) throw std::invalid_argument("improvement ratio needs a positive baseline");
  return 100.0 * (hr_new / hr_base - 1.0);
}

double model_runtime(const SimResult& r, const CostModel& cm) {
  return static_cast<double>(r.hits) * cm.t_cache_ms + static_cast<double>(r.misses) * cm.t_disk_ms +
         static_cast<double>(r.requests()) * cm.t_cpu_ms;
}

double normalized_runtime(double runtime, double baseline_nocache) {
  if (!(baseline_nocache > 0.0)) throw std::invalid_argument("normalized runtime needs a positive baseline");
  return runtime / baseline_nocache;
}

const ReportRow* Report::find(std::string_view scenario, std::string_view workload, std::size_t cache_blocks,
                              int block_mb) const {
  for (const auto& r : rows) {
    if (r.scenario == scenario && r.workload == workload && r.cache_blocks == cache_blocks && r.block_mb == block_mb) {
      return &r;
    }
  }
  return nullptr;
}

Report make_report(const std::vector<RunRecord>& runs) {
  using Key = std::tuple<std::string, int, std::size_t>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& run : runs) {
    groups[{run.result.workload, run.result.block_mb, run.result.cache_blocks}].push_back(&run);
  }
  Report rep;
  for (const auto& [key, members] : groups) {
    std::optional<double> lru_hr;
    std::optional<double> base_rt;
    for (const auto* m : members) {
      if (m->result.scenario == "lru" && m->result.requests() > 0) lru_hr = hit_ratio(m->result);
      if (m->result.scenario == "nocache") base_rt = m->runtime_ms;
    }
    for (const auto* m : members) {
      const auto& r = m->result;
      ReportRow row;
      row.scenario = r.scenario;
      row.workload = r.workload;
      row.cache_blocks = r.cache_blocks;
      row.block_mb = r.block_mb;
      row.requests = r.requests();
      row.hits = r.hits;
      row.misses = r.misses;
      row.hit_ratio = r.requests() ? hit_ratio(r) : 0.0;
      row.byte_hit_ratio = r.bytes_total_mb > 0 ? byte_hit_ratio(r) : 0.0;
      if (lru_hr && *lru_hr > 0.0) row.ir_vs_lru_pct = improvement_ratio(row.hit_ratio, *lru_hr);
      row.runtime_ms = m->runtime_ms;
      if (base_rt && *base_rt > 0.0) row.normalized_runtime = normalized_runtime(m->runtime_ms, *base_rt);
      rep.rows.push_back(std::move(row));
    }
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.scenario, a.cache_blocks, a.workload, a.block_mb) <
           std::tie(b.scenario, b.cache_blocks, b.workload, b.block_mb);
  });
  return rep;
}

std::vector<PolicyConfig> default_scenarios() {
  return {{PolicyId::NoCache, HitDemotion::EndOfUnused},
          {PolicyId::Lru, HitDemotion::EndOfUnused},
          {PolicyId::HsvmLru, HitDemotion::EndOfUnused}};
}

std::vector<std::size_t> parse_size_range(std::string_view s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(':', start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3 && parts.size() != 1) throw std::invalid_argument("size range must be lo:hi:step or N");
  std::vector<long long> v;
  for (const auto& p : parts) {
    auto x = csv::to_int(p);
    if (!x || *x < 1) throw std::invalid_argument("size range: bad value '" + p + "'");
    v.push_back(*x);
  }
  if (v.size() == 1) return {static_cast<std::size_t>(v[0])};
  if (v[1] < v[0]) throw std::invalid_argument("size range: hi < lo");
  std::vector<std::size_t> out;
  for (long long x = v[0]; x <= v[1]; x += v[2]) out.push_back(static_cast<std::size_t>(x));
  return out;
}

std::vector<std::size_t> default_sweep_sizes(int block_mb) {
  return parse_size_range(block_mb == 128 ? "6:12:2" : "6:24:2");
}

Report sweep_cache_sizes(const Trace& trace, const ClusterConfig& cfg, const std::vector<std::size_t>& sizes,
                         const std::vector<PolicyConfig>& scenarios, const Classifier* classifier,
                         const CostModel& cost) {
  if (sizes.empty()) throw std::invalid_argument("no cache sizes to sweep");
  std::vector<RunRecord> runs;
  for (auto size : sizes) {
    ClusterConfig c = cfg;
    c.cache_capacity_blocks = size;
    for (const auto& p : scenarios) {
      auto res = run_simulation(trace, c, p, classifier);
      const double rt = model_runtime(res, cost);
      runs.push_back({std::move(res), rt});
    }
  }
  return make_report(runs);
}

std::vector<IrRow> ir_table(const Report& report) {
  std::map<std::size_t, IrRow> rows;
  for (const auto& r : report.rows) {
    if (r.scenario != "hsvmlru") continue;
    auto& row = rows[r.cache_blocks];
    row.cache_blocks = r.cache_blocks;
    (r.block_mb == 128 ? row.ir_128mb : row.ir_64mb) = r.ir_vs_lru_pct;
  }
  std::vector<IrRow> out;
  for (auto& [k, v] : rows) out.push_back(v);
  return out;
}

AppSpec app_template(const std::string& name, std::size_t n_blocks, double reuse_factor) {
  AppSpec a;
  a.name = name;
  a.n_blocks = n_blocks;
  a.reuse_factor = reuse_factor;
  if (name == "Sort") {
    a.affinity = Affinity::Low;
    a.sharing_group = "text";
  } else if (name == "WordCount") {
    a.affinity = Affinity::Medium;
    a.sharing_group = "text";
  } else if (name == "Grep") {
    a.affinity = Affinity::High;
    a.sharing_group = "text";
  } else if (name == "Join") {
    a.affinity = Affinity::Medium;
    a.sharing_group = "tables";
    a.stages = 2;
  } else if (name == "Aggregation") {
    a.affinity = Affinity::High;
    a.sharing_group = "tables";
  } else {
    throw std::invalid_argument("unknown application template " + name);
  }
  return a;
}

WorkloadSpec benchmark_spec(int block_mb) {
  WorkloadSpec s;
  s.name = "bench-" + std::to_string(block_mb) + "mb";
  s.block_size_mb = block_mb;
  s.n_datanodes = 1;
  s.replication = 1;
  const std::size_t total = static_cast<std::size_t>(2048 / block_mb);
  AppSpec grep{"Grep", Affinity::High, total / 2, 1.0, std::nullopt, 1};
  AppSpec wc{"WordCount", Affinity::Medium, total / 4, 1.0, std::nullopt, 1};
  AppSpec join{"Join", Affinity::Medium, total / 4, 0.5, std::nullopt, 2};
  s.apps = {grep, wc, join};
  return s;
}

std::vector<WorkloadSpec> table8_workloads(int block_mb, std::size_t blocks_per_app, double reuse_factor) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"W1", {"Aggregation", "Grep", "Join", "WordCount"}},
      {"W2", {"Aggregation", "Grep", "Sort", "WordCount"}},
      {"W3", {"Aggregation", "WordCount", "Grep", "Grep"}},
      {"W4", {"Aggregation", "Sort", "Grep", "Grep"}},
      {"W5", {"Grep", "Grep", "Sort", "WordCount"}},
      {"W6", {"Aggregation", "Grep", "Join", "Sort"}},
  };
  std::vector<WorkloadSpec> out;
  for (const auto& [name, apps] : table) {
    WorkloadSpec s;
    s.name = name;
    s.block_size_mb = block_mb;
    for (const auto& a : apps) s.apps.push_back(app_template(a, blocks_per_app, reuse_factor));
    out.push_back(std::move(s));
  }
  return out;
}

ClassifierSource oracle_source() {
  return [](const WorkloadSpec&, std::uint64_t) -> Classifier { return OracleClassifier{}; };
}

Dataset online_training_set(const WorkloadSpec& spec, std::uint64_t seed, std::size_t max_rows) {
  const auto trace = attach_oracle_labels(generate_trace(spec, seed));
  auto data = eliminate_outliers(online_dataset(trace)).data;
  if (data.size() <= max_rows) return data;
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed ^ 0x5bd1e995ULL);
  rng.shuffle(idx);
  idx.resize(max_rows);
  std::sort(idx.begin(), idx.end());
  return select_rows(data, idx);
}

ClassifierSource trained_model_source(TrainConfig cfg, std::uint64_t seed_offset, std::size_t max_rows) {
  return [cfg, seed_offset, max_rows](const WorkloadSpec& spec, std::uint64_t seed) -> Classifier {
    const auto data = online_training_set(spec, seed + seed_offset, max_rows);
    return make_model_classifier(fit(data, cfg));
  };
}

SuiteResult run_workload_suite(const std::vector<WorkloadSpec>& specs, const ClusterConfig& cfg,
                               const CostModel& cost, const ClassifierSource& source, std::uint64_t seed,
                               const std::vector<PolicyConfig>& scenarios) {
  for (const auto& spec : specs) {
    if (spec.apps.size() != 4) throw std::invalid_argument("workload " + spec.name + " must have exactly 4 apps");
  }
  SuiteResult suite;
  std::vector<RunRecord> runs;
  for (const auto& spec : specs) {
    const auto trace = attach_oracle_labels(generate_trace(spec, seed));
    const bool needs_classifier = std::any_of(scenarios.begin(), scenarios.end(),
                                              [](const PolicyConfig& p) { return p.id == PolicyId::HsvmLru; });
    std::optional<Classifier> classifier;
    if (needs_classifier) classifier = source(spec, seed);

    // Per-app runtimes, keyed by scenario, for the breakdown rows.
    std::map<std::string, std::vector<AppRow>> per_app;
    for (const auto& p : scenarios) {
      auto res = run_simulation(trace, cfg, p, classifier ? &*classifier : nullptr);
      std::vector<AppRow> apps(spec.apps.size());
      for (std::size_t a = 0; a < apps.size(); ++a) {
        apps[a].workload = spec.name;
        apps[a].app_index = a;
        apps[a].app = spec.apps[a].name;
        apps[a].scenario = res.scenario;
      }
      for (std::size_t i = 0; i < trace.requests.size(); ++i) {
        const auto a = app_index_of(trace.requests[i]);
        if (!a || *a >= apps.size()) throw InvariantViolation("request without a valid app index");
        auto& row = apps[*a];
        ++row.requests;
        const bool hit = res.outcomes[i].hit;
        row.hits += hit ? 1 : 0;
        row.runtime_ms += (hit ? cost.t_cache_ms : cost.t_disk_ms) + cost.t_cpu_ms;
      }
      per_app[res.scenario] = std::move(apps);
      const double rt = model_runtime(res, cost);
      runs.push_back({std::move(res), rt});
    }
    const auto base = per_app.find("nocache");
    for (auto& [scenario, apps] : per_app) {
      for (std::size_t a = 0; a < apps.size(); ++a) {
        if (base != per_app.end() && base->second[a].runtime_ms > 0.0) {
          apps[a].normalized_runtime = apps[a].runtime_ms / base->second[a].runtime_ms;
        }
        suite.apps.push_back(apps[a]);
      }
    }
  }
  suite.report = make_report(runs);
  return suite;
}

double mean_normalized_runtime(const Report& r, std::string_view scenario) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : r.rows) {
    if (row.scenario == scenario && row.normalized_runtime) {
      sum += *row.normalized_runtime;
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("no normalized runtimes for scenario " + std::string(scenario));
  return sum / static_cast<double>(n);
}

}  // namespace hsvmlru

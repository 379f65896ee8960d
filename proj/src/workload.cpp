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

#include "hsvmlru/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "hsvmlru/error.hpp"
#include "hsvmlru/rng.hpp"

namespace hsvmlru {

std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::MapInput: return "map_input";
    case DataType::Intermediate: return "intermediate";
    case DataType::ReduceOutput: return "reduce_output";
  }
  return "?";
}

std::string_view to_string(TaskType t) { return t == TaskType::Map ? "map" : "reduce"; }

std::string_view to_string(Affinity a) {
  switch (a) {
    case Affinity::Low: return "low";
    case Affinity::Medium: return "medium";
    case Affinity::High: return "high";
  }
  return "?";
}

std::optional<DataType> parse_data_type(std::string_view s) {
  if (s == "map_input") return DataType::MapInput;
  if (s == "intermediate") return DataType::Intermediate;
  if (s == "reduce_output") return DataType::ReduceOutput;
  return std::nullopt;
}

std::optional<TaskType> parse_task_type(std::string_view s) {
  if (s == "map") return TaskType::Map;
  if (s == "reduce") return TaskType::Reduce;
  return std::nullopt;
}

std::optional<Affinity> parse_affinity(std::string_view s) {
  if (s == "low") return Affinity::Low;
  if (s == "medium") return Affinity::Medium;
  if (s == "high") return Affinity::High;
  return std::nullopt;
}

const DataBlock& Trace::block(const BlockId& id) const {
  auto it = catalog.find(id);
  if (it == catalog.end()) throw DataError("unknown block " + id.str());
  return it->second;
}

bool Trace::labeled() const {
  return std::all_of(requests.begin(), requests.end(),
                     [](const Request& r) { return r.oracle_label.has_value(); });
}

double affinity_multiplier(Affinity a) {
  switch (a) {
    case Affinity::Low: return 0.5;
    case Affinity::Medium: return 1.0;
    case Affinity::High: return 2.0;
  }
  return 1.0;
}

std::string block_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "b-%04zu", index);
  return buf;
}

std::string node_name(int index) { return "dn-" + std::to_string(index); }

std::optional<std::size_t> app_index_of(const Request& r) {
  const auto& t = r.task_id;
  if (t.size() < 3 || t[0] != 'a') return std::nullopt;
  const auto dot = t.find('.');
  if (dot == std::string::npos || dot == 1) return std::nullopt;
  std::size_t v = 0;
  for (std::size_t i = 1; i < dot; ++i) {
    if (t[i] < '0' || t[i] > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(t[i] - '0');
  }
  return v;
}

namespace {

struct Access {
  TaskType task_type;
  BlockId block;
};

// Draws ranks 0..n-1 with P(r) proportional to 1/(r+1)^s.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double s) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), s);
      cdf_[r] = acc;
    }
    for (auto& c : cdf_) c /= acc;
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

class CatalogBuilder {
 public:
  CatalogBuilder(const WorkloadSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {}

  BlockId add(DataType type) {
    BlockId id{block_name(next_++)};
    DataBlock b;
    b.id = id;
    b.size_mb = spec_.block_size_mb;
    b.type = type;
    std::vector<int> nodes(static_cast<std::size_t>(spec_.n_datanodes));
    for (int i = 0; i < spec_.n_datanodes; ++i) nodes[static_cast<std::size_t>(i)] = i + 1;
    rng_.shuffle(nodes);
    for (int i = 0; i < spec_.replication; ++i) {
      b.replicas.emplace_back(node_name(nodes[static_cast<std::size_t>(i)]));
    }
    catalog_.emplace(id, std::move(b));
    return id;
  }

  BlockCatalog take() { return std::move(catalog_); }

 private:
  const WorkloadSpec& spec_;
  Rng& rng_;
  BlockCatalog catalog_;
  std::size_t next_ = 0;
};

void validate(const WorkloadSpec& spec) {
  if (spec.apps.empty()) throw std::invalid_argument("workload spec has no apps");
  if (spec.block_size_mb != 64 && spec.block_size_mb != 128) {
    throw std::invalid_argument("block_size_mb must be 64 or 128");
  }
  if (spec.n_datanodes < 1 || spec.replication < 1 || spec.replication > spec.n_datanodes) {
    throw std::invalid_argument("replication must be in [1, n_datanodes]");
  }
  for (const auto& app : spec.apps) {
    if (app.n_blocks == 0) throw std::invalid_argument("app " + app.name + ": n_blocks must be positive");
    if (!(app.reuse_factor >= 0.0)) {
      throw std::invalid_argument("app " + app.name + ": reuse_factor must be non-negative");
    }
    if (app.stages < 1 || app.stages > 2) throw std::invalid_argument("app " + app.name + ": stages must be 1 or 2");
  }
}

}  // namespace

Trace fig2_trace() {
  Trace t;
  t.meta.workload_name = "fig2";
  const int order[] = {1, 2, 3, 4, 5, 6, 7, 2, 8, 3};
  const int classes[] = {0, 1, 1, 1, 0, 0, 0, 0, 1, 1};
  for (int i = 1; i <= 8; ++i) {
    DataBlock b;
    b.id = BlockId{"DB" + std::to_string(i)};
    b.size_mb = 64;
    b.type = DataType::MapInput;
    b.replicas = {NodeId{"dn-1"}, NodeId{"dn-2"}, NodeId{"dn-3"}};
    t.catalog.emplace(b.id, b);
  }
  for (std::size_t i = 0; i < 10; ++i) {
    Request r;
    r.seq = i;
    r.time_ms = i * 10;
    r.task_id = "a0.m-" + std::to_string(i);
    r.task_type = TaskType::Map;
    r.block = BlockId{"DB" + std::to_string(order[i])};
    r.oracle_label = static_cast<Label>(classes[i]);
    t.requests.push_back(std::move(r));
  }
  return t;
}

Trace generate_trace(const WorkloadSpec& spec, std::uint64_t seed) {
  if (spec.canned) {
    if (*spec.canned == "fig2") return fig2_trace();
    throw std::invalid_argument("unknown canned workload " + *spec.canned);
  }
  validate(spec);

  Rng rng(seed);
  CatalogBuilder catalog(spec, rng);

  // Input pools: one per sharing group, sized for its largest member; Zipf
  // ranks are assigned per pool so members agree on which blocks are hot.
  struct Pool {
    std::vector<BlockId> blocks;
    std::vector<std::size_t> rank_to_block;
  };
  std::map<std::string, Pool> shared;
  std::vector<Pool> private_pools(spec.apps.size());
  auto fill = [&](Pool& p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) p.blocks.push_back(catalog.add(DataType::MapInput));
  };
  for (std::size_t a = 0; a < spec.apps.size(); ++a) {
    const auto& app = spec.apps[a];
    if (!app.sharing_group) {
      fill(private_pools[a], app.n_blocks);
      continue;
    }
    if (shared.count(*app.sharing_group)) continue;
    std::size_t n = 0;
    for (const auto& other : spec.apps) {
      if (other.sharing_group == app.sharing_group) n = std::max(n, other.n_blocks);
    }
    fill(shared[*app.sharing_group], n);
  }

  std::vector<std::vector<Access>> streams(spec.apps.size());
  for (std::size_t a = 0; a < spec.apps.size(); ++a) {
    const auto& app = spec.apps[a];
    const Pool& pool = app.sharing_group ? shared.at(*app.sharing_group) : private_pools[a];
    // Members use the pool prefix, so every pair in a group overlaps.
    const std::size_t n = app.n_blocks;
    std::vector<std::size_t> hot(n);
    for (std::size_t i = 0; i < n; ++i) hot[i] = i;
    Rng rank_rng(seed ^ fnv1a(app.sharing_group.value_or("app" + std::to_string(a))));
    rank_rng.shuffle(hot);

    auto& s = streams[a];
    for (std::size_t i = 0; i < n; ++i) s.push_back({TaskType::Map, pool.blocks[i]});
    const auto extra = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * app.reuse_factor * affinity_multiplier(app.affinity)));
    ZipfSampler zipf(n, spec.zipf_s);
    for (std::size_t k = 0; k < extra; ++k) s.push_back({TaskType::Map, pool.blocks[hot[zipf.draw(rng)]]});
    rng.shuffle(s);

    if (app.stages > 1) {
      const std::size_t n_inter = std::max<std::size_t>(1, n / 4);
      const std::size_t n_out = std::max<std::size_t>(1, n / 8);
      for (std::size_t i = 0; i < n_inter; ++i) s.push_back({TaskType::Reduce, catalog.add(DataType::Intermediate)});
      for (std::size_t i = 0; i < n_out; ++i) s.push_back({TaskType::Reduce, catalog.add(DataType::ReduceOutput)});
    }
  }

  Trace trace;
  trace.catalog = catalog.take();
  trace.meta = {seed, spec.name};
  std::vector<std::size_t> cursor(streams.size(), 0);
  std::vector<std::size_t> map_count(streams.size(), 0), reduce_count(streams.size(), 0);
  auto emit = [&](std::size_t a) {
    const Access& acc = streams[a][cursor[a]++];
    Request r;
    r.seq = trace.requests.size();
    r.time_ms = r.seq * spec.tick_ms;
    const bool map = acc.task_type == TaskType::Map;
    r.task_id = "a" + std::to_string(a) + (map ? ".m-" : ".r-") +
                std::to_string(map ? map_count[a]++ : reduce_count[a]++);
    r.task_type = acc.task_type;
    r.block = acc.block;
    trace.requests.push_back(std::move(r));
  };
  if (spec.interleave == Interleave::Sequential) {
    for (std::size_t a = 0; a < streams.size(); ++a) {
      while (cursor[a] < streams[a].size()) emit(a);
    }
  } else {
    bool any = true;
    while (any) {
      any = false;
      for (std::size_t a = 0; a < streams.size(); ++a) {
        if (cursor[a] < streams[a].size()) {
          emit(a);
          any = true;
        }
      }
    }
  }
  return trace;
}

Trace attach_oracle_labels(Trace trace) {
  std::unordered_set<BlockId> seen_later;
  for (auto it = trace.requests.rbegin(); it != trace.requests.rend(); ++it) {
    it->oracle_label = label_from_bool(seen_later.count(it->block) > 0);
    seen_later.insert(it->block);
  }
  return trace;
}

}  // namespace hsvmlru

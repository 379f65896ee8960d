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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsvmlru/types.hpp"

namespace hsvmlru {

struct DataBlock {
  BlockId id;
  std::int64_t size_mb = 0;
  DataType type = DataType::MapInput;
  std::vector<NodeId> replicas;  // replicas.front() is the home node

  friend bool operator==(const DataBlock&, const DataBlock&) = default;
};

struct Request {
  std::uint64_t seq = 0;
  std::uint64_t time_ms = 0;
  std::string task_id;
  TaskType task_type = TaskType::Map;
  BlockId block;
  std::optional<Label> oracle_label;

  friend bool operator==(const Request&, const Request&) = default;
};

using BlockCatalog = std::map<BlockId, DataBlock>;

struct TraceMeta {
  std::uint64_t seed = 0;
  std::string workload_name;

  friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

struct Trace {
  std::vector<Request> requests;
  BlockCatalog catalog;
  TraceMeta meta;

  const DataBlock& block(const BlockId& id) const;
  bool labeled() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class Interleave { RoundRobin, Sequential };

struct AppSpec {
  std::string name;
  Affinity affinity = Affinity::Medium;
  std::size_t n_blocks = 1;
  double reuse_factor = 1.0;
  std::optional<std::string> sharing_group;
  // 2 = multi-stage (Join-like): reduce tasks read intermediate and
  // reduce-output blocks produced by the previous stage.
  int stages = 1;
};

struct WorkloadSpec {
  std::string name = "workload";
  // "fig2" selects the hard-coded ten-request example instead of generation.
  std::optional<std::string> canned;
  std::vector<AppSpec> apps;
  int block_size_mb = 64;
  Interleave interleave = Interleave::RoundRobin;
  int n_datanodes = 9;
  int replication = 3;
  std::uint64_t tick_ms = 10;
  double zipf_s = 0.9;
};

// Expected extra repeats per block relative to reuse_factor.
double affinity_multiplier(Affinity a);

Trace generate_trace(const WorkloadSpec& spec, std::uint64_t seed);

// DB1..DB7, DB2, DB8, DB3 with the published classes (0,1,1,1,0,0,0,0,1,1),
// every block homed on dn-1.
Trace fig2_trace();

// oracle_label = Reused iff the block appears again later in the trace.
Trace attach_oracle_labels(Trace trace);

// Index of the application that issued a request, decoded from "a<k>.<task>".
std::optional<std::size_t> app_index_of(const Request& r);

std::string block_name(std::size_t index);
std::string node_name(int index);  // 1-based: dn-1 ... dn-N

}  // namespace hsvmlru

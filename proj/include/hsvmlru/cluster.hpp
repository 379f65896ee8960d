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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "hsvmlru/classifier.hpp"
#include "hsvmlru/node_cache.hpp"
#include "hsvmlru/workload.hpp"

namespace hsvmlru {

struct ClusterConfig {
  int n_datanodes = 9;
  std::size_t cache_capacity_blocks = 12;  // per node
  int replication = 3;
  int block_size_mb = 64;

  friend bool operator==(const ClusterConfig&, const ClusterConfig&) = default;
};

void validate(const ClusterConfig& cfg);
ClusterConfig cluster_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json cluster_config_to_json(const ClusterConfig& cfg);
ClusterConfig load_cluster_config(const std::filesystem::path& file);

enum class PolicyId { NoCache, Lru, HsvmLru };
std::string_view to_string(PolicyId p);
std::optional<PolicyId> parse_policy(std::string_view s);

struct PolicyConfig {
  PolicyId id = PolicyId::HsvmLru;
  HitDemotion demotion = HitDemotion::EndOfUnused;
};

struct AccessOutcome {
  std::uint64_t seq = 0;
  BlockId block;
  bool hit = false;
  NodeId node;
  std::optional<BlockId> evicted;
  std::optional<Label> class_used;

  friend bool operator==(const AccessOutcome&, const AccessOutcome&) = default;
};

struct Resolution {
  std::optional<NodeId> cached;
  NodeId home;  // first replica
};

// Coordinator view of the cluster: block locations, the single cached
// location of each cached block, and the per-node caches. Cache reports are
// applied synchronously after every mutation.
class ClusterState {
 public:
  const ClusterConfig& config() const { return config_; }
  const std::map<BlockId, std::vector<NodeId>>& block_metadata() const { return block_metadata_; }
  const std::unordered_map<BlockId, NodeId>& cache_metadata() const { return cache_metadata_; }
  const std::map<NodeId, NodeCache>& node_caches() const { return node_caches_; }
  const NodeCache& node_cache(const NodeId& n) const;
  const DataBlock& block(const BlockId& b) const;

  Resolution resolve(const BlockId& b) const;

  // Hit: policy get on the caching node. Miss: policy put on the home node.
  // `classifier` is required for HsvmLru; `stats` must reflect accesses
  // strictly before `r`.
  AccessOutcome process_request(const Request& r, const PolicyConfig& policy, const Classifier* classifier,
                                const AccessStats& stats);

  // Makes the cache metadata entries for `node` equal `resident`. Returns the
  // number of entries that had to change.
  std::size_t apply_cache_report(const NodeId& node, const std::set<BlockId>& resident);

  // Throws InvariantViolation unless metadata and node caches agree.
  void check_coherence() const;

  std::size_t report_discrepancies() const { return discrepancies_; }

  friend ClusterState build_cluster(const ClusterConfig& cfg, const BlockCatalog& catalog, std::uint64_t seed);

 private:
  void sync_report(const NodeId& node);

  ClusterConfig config_;
  BlockCatalog catalog_;
  std::map<BlockId, std::vector<NodeId>> block_metadata_;
  std::unordered_map<BlockId, NodeId> cache_metadata_;
  std::map<NodeId, NodeCache> node_caches_;
  std::size_t discrepancies_ = 0;
};

// Nodes are dn-1 ... dn-N. Replica lists must reference those nodes and have
// length cfg.replication.
ClusterState build_cluster(const ClusterConfig& cfg, const BlockCatalog& catalog, std::uint64_t seed = 0);

}  // namespace hsvmlru

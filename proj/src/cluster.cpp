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

#include "hsvmlru/cluster.hpp"

#include <fstream>
#include <stdexcept>

#include "hsvmlru/error.hpp"

namespace hsvmlru {

using nlohmann::json;
using nlohmann::ordered_json;

void validate(const ClusterConfig& cfg) {
  if (cfg.n_datanodes < 1) throw std::invalid_argument("n_datanodes must be positive");
  if (cfg.cache_capacity_blocks < 1) throw std::invalid_argument("cache_capacity_blocks must be positive");
  if (cfg.replication < 1 || cfg.replication > cfg.n_datanodes) {
    throw std::invalid_argument("replication must be in [1, n_datanodes]");
  }
  if (cfg.block_size_mb != 64 && cfg.block_size_mb != 128) throw std::invalid_argument("block_size_mb must be 64 or 128");
}

ClusterConfig cluster_config_from_json(const json& j) {
  ClusterConfig c;
  try {
    c.n_datanodes = j.at("n_datanodes").get<int>();
    const auto cap = j.at("cache_capacity_blocks").get<std::int64_t>();
    if (cap < 1) throw DataError("cluster: cache_capacity_blocks must be positive");
    c.cache_capacity_blocks = static_cast<std::size_t>(cap);
    c.replication = j.at("replication").get<int>();
    c.block_size_mb = j.at("block_size_mb").get<int>();
  } catch (const json::exception& e) {
    throw DataError(std::string("cluster: ") + e.what());
  }
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("cluster: ") + e.what());
  }
  return c;
}

ordered_json cluster_config_to_json(const ClusterConfig& cfg) {
  ordered_json j;
  j["n_datanodes"] = cfg.n_datanodes;
  j["cache_capacity_blocks"] = cfg.cache_capacity_blocks;
  j["replication"] = cfg.replication;
  j["block_size_mb"] = cfg.block_size_mb;
  return j;
}

ClusterConfig load_cluster_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read " + file.string());
  try {
    return cluster_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw DataError(file.string() + ": " + e.what());
  }
}

std::string_view to_string(PolicyId p) {
  switch (p) {
    case PolicyId::NoCache: return "nocache";
    case PolicyId::Lru: return "lru";
    case PolicyId::HsvmLru: return "hsvmlru";
  }
  return "?";
}

std::optional<PolicyId> parse_policy(std::string_view s) {
  if (s == "nocache") return PolicyId::NoCache;
  if (s == "lru") return PolicyId::Lru;
  if (s == "hsvmlru") return PolicyId::HsvmLru;
  return std::nullopt;
}

ClusterState build_cluster(const ClusterConfig& cfg, const BlockCatalog& catalog, std::uint64_t /*seed*/) {
  validate(cfg);
  ClusterState s;
  s.config_ = cfg;
  for (int i = 1; i <= cfg.n_datanodes; ++i) {
    NodeId n{node_name(i)};
    s.node_caches_.emplace(n, NodeCache(n, cfg.cache_capacity_blocks));
  }
  for (const auto& [id, b] : catalog) {
    if (b.replicas.size() != static_cast<std::size_t>(cfg.replication)) {
      throw DataError("block " + id.str() + " has " + std::to_string(b.replicas.size()) +
                      " replicas, cluster replication is " + std::to_string(cfg.replication));
    }
    for (const auto& r : b.replicas) {
      if (!s.node_caches_.count(r)) throw DataError("block " + id.str() + " references unknown node " + r.str());
    }
    s.block_metadata_.emplace(id, b.replicas);
  }
  s.catalog_ = catalog;
  return s;
}

const NodeCache& ClusterState::node_cache(const NodeId& n) const {
  auto it = node_caches_.find(n);
  if (it == node_caches_.end()) throw std::invalid_argument("unknown node " + n.str());
  return it->second;
}

const DataBlock& ClusterState::block(const BlockId& b) const {
  auto it = catalog_.find(b);
  if (it == catalog_.end()) throw DataError("unknown block " + b.str());
  return it->second;
}

Resolution ClusterState::resolve(const BlockId& b) const {
  auto it = block_metadata_.find(b);
  if (it == block_metadata_.end()) throw DataError("unknown block " + b.str());
  Resolution r;
  r.home = it->second.front();
  if (auto c = cache_metadata_.find(b); c != cache_metadata_.end()) r.cached = c->second;
  return r;
}

AccessOutcome ClusterState::process_request(const Request& r, const PolicyConfig& policy,
                                            const Classifier* classifier, const AccessStats& stats) {
  if (policy.id == PolicyId::HsvmLru && !classifier) throw std::invalid_argument("hsvmlru requires a classifier");
  const auto where = resolve(r.block);
  AccessOutcome out;
  out.seq = r.seq;
  out.block = r.block;

  if (policy.id == PolicyId::NoCache) {
    out.node = where.home;
    return out;
  }

  auto classify_now = [&] { return classify(*classifier, r, block(r.block), stats); };

  if (where.cached) {
    auto& cache = node_caches_.at(*where.cached);
    if (!cache.contains(r.block)) {
      throw InvariantViolation("metadata places " + r.block.str() + " on " + where.cached->str() +
                               " but the node does not hold it");
    }
    out.hit = true;
    out.node = *where.cached;
    if (policy.id == PolicyId::Lru) {
      cache.lru_get(r.block);
    } else {
      const Label cls = classify_now();
      out.class_used = cls;
      cache.hsvmlru_get(r.block, cls, policy.demotion);
    }
    return out;
  }

  out.node = where.home;
  auto& cache = node_caches_.at(where.home);
  if (cache.contains(r.block)) {
    throw InvariantViolation("node " + where.home.str() + " holds " + r.block.str() + " unknown to cache metadata");
  }
  std::optional<EvictionEvent> ev;
  if (policy.id == PolicyId::Lru) {
    ev = cache.lru_put(r.block, r.seq);
  } else {
    // Victim is chosen before the incoming block is classified.
    ev = cache.evict_if_full(r.seq);
    const Label cls = classify_now();
    out.class_used = cls;
    cache.insert_classified(r.block, cls);
  }
  if (ev) {
    out.evicted = ev->victim;
    cache_metadata_.erase(ev->victim);
  }
  cache_metadata_[r.block] = where.home;
  sync_report(where.home);
  return out;
}

void ClusterState::sync_report(const NodeId& node) {
  const auto& order = node_caches_.at(node).order();
  const std::set<BlockId> resident(order.begin(), order.end());
  if (apply_cache_report(node, resident) != 0) {
    throw InvariantViolation("cache report from " + node.str() + " disagrees with coordinator metadata");
  }
}

std::size_t ClusterState::apply_cache_report(const NodeId& node, const std::set<BlockId>& resident) {
  if (!node_caches_.count(node)) throw std::invalid_argument("unknown node " + node.str());
  std::size_t changed = 0;
  for (auto it = cache_metadata_.begin(); it != cache_metadata_.end();) {
    if (it->second == node && !resident.count(it->first)) {
      it = cache_metadata_.erase(it);
      ++changed;
    } else {
      ++it;
    }
  }
  for (const auto& b : resident) {
    auto [it, inserted] = cache_metadata_.try_emplace(b, node);
    if (inserted) {
      ++changed;
    } else if (it->second != node) {
      it->second = node;
      ++changed;
    }
  }
  discrepancies_ += changed;
  return changed;
}

void ClusterState::check_coherence() const {
  std::size_t resident = 0;
  for (const auto& [node, cache] : node_caches_) {
    cache.check_invariants();
    for (const auto& b : cache.order()) {
      ++resident;
      auto it = cache_metadata_.find(b);
      if (it == cache_metadata_.end() || it->second != node) {
        throw InvariantViolation("block " + b.str() + " resident on " + node.str() + " but metadata disagrees");
      }
    }
  }
  if (resident != cache_metadata_.size()) throw InvariantViolation("cache metadata holds stale entries");
}

}  // namespace hsvmlru

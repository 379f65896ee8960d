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

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hsvmlru/types.hpp"

namespace hsvmlru {

// Where a resident block classified NotReused goes on a cache hit.
enum class HitDemotion {
  EndOfUnused,  // end of the unused-class region (same slot as a NotReused insert)
  Top,          // absolute top, i.e. next victim
};

struct EvictionEvent {
  BlockId victim;
  NodeId node;
  std::uint64_t seq = 0;

  friend bool operator==(const EvictionEvent&, const EvictionEvent&) = default;
};

// Bounded recency-ordered block cache of one DataNode. Position 0 ("top") is
// the next eviction victim, the last position ("bottom") the most protected.
// The first unused_len() entries form the unused-class region.
//
// Single writer: one thread of control mutates a given NodeCache.
class NodeCache {
 public:
  NodeCache(NodeId node, std::size_t capacity_blocks);
  NodeCache(const NodeCache& other);
  NodeCache(NodeCache&& other) noexcept;
  NodeCache& operator=(NodeCache other) noexcept;
  ~NodeCache() = default;

  const NodeId& node() const { return node_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return order_.size(); }
  bool full() const { return order_.size() >= capacity_; }
  bool contains(const BlockId& b) const { return index_.count(b) > 0; }
  std::size_t unused_len() const { return unused_len_; }

  // Snapshot, top to bottom.
  std::vector<BlockId> order() const;

  // Plain LRU. Requires a cache that holds no unused-class entries.
  void lru_get(const BlockId& b);
  std::optional<EvictionEvent> lru_put(const BlockId& b, std::uint64_t seq = 0);

  // Reused -> bottom. NotReused -> end of the unused region, or top with
  // HitDemotion::Top; either way the unused region grows to include it.
  void hsvmlru_get(const BlockId& b, Label cls, HitDemotion demotion = HitDemotion::EndOfUnused);

  // Evicts first if full, then inserts: Reused at bottom, NotReused at the
  // end of the unused region (at the top when the region is empty).
  std::optional<EvictionEvent> hsvmlru_put(const BlockId& b, Label cls, std::uint64_t seq = 0);

  // The two halves of hsvmlru_put, so a caller can classify after the victim
  // has been chosen.
  std::optional<EvictionEvent> evict_if_full(std::uint64_t seq = 0);
  void insert_classified(const BlockId& b, Label cls);

  // Throws InvariantViolation if internal structures disagree.
  void check_invariants() const;

 private:
  struct Entry {
    BlockId id;
    bool unused;
  };
  using List = std::list<Entry>;

  List::iterator locate(const BlockId& b);
  void erase(List::iterator it);
  void insert_bottom(const BlockId& b);
  void insert_unused_end(const BlockId& b);
  void insert_top(const BlockId& b);
  void rebuild_links();

  NodeId node_;
  std::size_t capacity_;
  List order_;
  std::unordered_map<BlockId, List::iterator> index_;
  // First entry after the unused region (end() when all entries are unused).
  List::iterator unused_end_;
  std::size_t unused_len_ = 0;
};

}  // namespace hsvmlru

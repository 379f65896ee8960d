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

#include "hsvmlru/node_cache.hpp"

#include <stdexcept>

#include "hsvmlru/error.hpp"

namespace hsvmlru {

NodeCache::NodeCache(NodeId node, std::size_t capacity_blocks)
    : node_(std::move(node)), capacity_(capacity_blocks), unused_end_(order_.end()) {
  if (capacity_ == 0) throw std::invalid_argument("cache capacity must be positive");
}

NodeCache::NodeCache(const NodeCache& other)
    : node_(other.node_), capacity_(other.capacity_), order_(other.order_), unused_len_(other.unused_len_) {
  rebuild_links();
}

NodeCache::NodeCache(NodeCache&& other) noexcept
    : node_(std::move(other.node_)),
      capacity_(other.capacity_),
      order_(std::move(other.order_)),
      unused_len_(other.unused_len_) {
  rebuild_links();
}

NodeCache& NodeCache::operator=(NodeCache other) noexcept {
  node_ = std::move(other.node_);
  capacity_ = other.capacity_;
  order_ = std::move(other.order_);
  unused_len_ = other.unused_len_;
  rebuild_links();
  return *this;
}

// Iterators into order_ do not survive a copy, and end() does not survive a move.
void NodeCache::rebuild_links() {
  index_.clear();
  unused_end_ = order_.end();
  std::size_t pos = 0;
  for (auto it = order_.begin(); it != order_.end(); ++it, ++pos) {
    index_.emplace(it->id, it);
    if (pos == unused_len_) unused_end_ = it;
  }
}

std::vector<BlockId> NodeCache::order() const {
  std::vector<BlockId> out;
  out.reserve(order_.size());
  for (const auto& e : order_) out.push_back(e.id);
  return out;
}

NodeCache::List::iterator NodeCache::locate(const BlockId& b) {
  auto it = index_.find(b);
  if (it == index_.end()) throw std::invalid_argument("block " + b.str() + " not resident on " + node_.str());
  return it->second;
}

void NodeCache::erase(List::iterator it) {
  if (it == unused_end_) unused_end_ = std::next(it);
  if (it->unused) --unused_len_;
  index_.erase(it->id);
  order_.erase(it);
}

void NodeCache::insert_bottom(const BlockId& b) {
  auto it = order_.insert(order_.end(), Entry{b, false});
  if (unused_end_ == order_.end()) unused_end_ = it;
  index_.emplace(b, it);
}

void NodeCache::insert_unused_end(const BlockId& b) {
  auto it = order_.insert(unused_end_, Entry{b, true});
  ++unused_len_;
  index_.emplace(b, it);
}

void NodeCache::insert_top(const BlockId& b) {
  order_.push_front(Entry{b, true});
  ++unused_len_;
  index_.emplace(b, order_.begin());
}

void NodeCache::lru_get(const BlockId& b) {
  auto it = locate(b);
  if (unused_len_ != 0) throw InvariantViolation("lru_get on a cache with unused-class entries");
  order_.splice(order_.end(), order_, it);
  unused_end_ = order_.begin();
}

std::optional<EvictionEvent> NodeCache::lru_put(const BlockId& b, std::uint64_t seq) {
  if (contains(b)) throw std::invalid_argument("block " + b.str() + " already resident on " + node_.str());
  if (unused_len_ != 0) throw InvariantViolation("lru_put on a cache with unused-class entries");
  std::optional<EvictionEvent> ev;
  if (full()) {
    ev = EvictionEvent{order_.front().id, node_, seq};
    index_.erase(order_.front().id);
    order_.pop_front();
  }
  auto it = order_.insert(order_.end(), Entry{b, false});
  index_.emplace(b, it);
  unused_end_ = order_.begin();
  return ev;
}

void NodeCache::hsvmlru_get(const BlockId& b, Label cls, HitDemotion demotion) {
  auto it = locate(b);
  erase(it);
  if (cls == Label::Reused) {
    insert_bottom(b);
  } else if (demotion == HitDemotion::Top) {
    insert_top(b);
  } else {
    insert_unused_end(b);
  }
}

std::optional<EvictionEvent> NodeCache::evict_if_full(std::uint64_t seq) {
  if (!full()) return std::nullopt;
  EvictionEvent ev{order_.front().id, node_, seq};
  erase(order_.begin());
  return ev;
}

void NodeCache::insert_classified(const BlockId& b, Label cls) {
  if (contains(b)) throw std::invalid_argument("block " + b.str() + " already resident on " + node_.str());
  if (full()) throw InvariantViolation("insert into a full cache");
  if (cls == Label::Reused) {
    insert_bottom(b);
  } else {
    // With an empty unused region unused_end_ is the first entry, so this is the top.
    insert_unused_end(b);
  }
}

std::optional<EvictionEvent> NodeCache::hsvmlru_put(const BlockId& b, Label cls, std::uint64_t seq) {
  if (contains(b)) throw std::invalid_argument("block " + b.str() + " already resident on " + node_.str());
  auto ev = evict_if_full(seq);
  insert_classified(b, cls);
  return ev;
}

void NodeCache::check_invariants() const {
  if (order_.size() > capacity_) throw InvariantViolation("cache over capacity on " + node_.str());
  if (index_.size() != order_.size()) throw InvariantViolation("cache index size mismatch on " + node_.str());
  std::size_t pos = 0;
  List::const_iterator boundary = order_.end();
  for (auto it = order_.begin(); it != order_.end(); ++it, ++pos) {
    auto idx = index_.find(it->id);
    if (idx == index_.end() || idx->second != it) throw InvariantViolation("cache index stale on " + node_.str());
    if (pos < unused_len_ && !it->unused) throw InvariantViolation("unused region not contiguous on " + node_.str());
    if (pos >= unused_len_ && it->unused) throw InvariantViolation("unused entry below region on " + node_.str());
    if (pos == unused_len_) boundary = it;
  }
  if (unused_len_ > order_.size()) throw InvariantViolation("unused_len exceeds size on " + node_.str());
  if (boundary != List::const_iterator(unused_end_)) {
    throw InvariantViolation("unused region boundary stale on " + node_.str());
  }
}

}  // namespace hsvmlru

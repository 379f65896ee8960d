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

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace hsvmlru {

// Opaque string identifier, distinct per Tag so block and node ids cannot be mixed.
template <typename Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value_; }

 private:
  std::string value_;
};

using BlockId = Id<struct BlockTag>;
using NodeId = Id<struct NodeTag>;

enum class DataType { MapInput, Intermediate, ReduceOutput };
enum class TaskType { Map, Reduce };
enum class Label : int { NotReused = 0, Reused = 1 };
enum class Affinity { Low, Medium, High };

inline int to_int(Label l) { return static_cast<int>(l); }
inline Label label_from_bool(bool reused) { return reused ? Label::Reused : Label::NotReused; }

std::string_view to_string(DataType t);
std::string_view to_string(TaskType t);
std::string_view to_string(Affinity a);

// Inverse mappings; return nullopt for unknown names.
std::optional<DataType> parse_data_type(std::string_view s);
std::optional<TaskType> parse_task_type(std::string_view s);
std::optional<Affinity> parse_affinity(std::string_view s);

}  // namespace hsvmlru

template <typename Tag>
struct std::hash<hsvmlru::Id<Tag>> {
  std::size_t operator()(const hsvmlru::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

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

#include "hsvmlru/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "hsvmlru/error.hpp"

namespace hsvmlru {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

json parse_line(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail(line, "expected a JSON object");
  return j;
}

const json& field(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) fail(line, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& j, const char* key, std::size_t line) {
  const auto& v = field(j, key, line);
  if (!v.is_string()) fail(line, std::string("field '") + key + "' must be a string");
  auto s = v.get<std::string>();
  if (s.empty()) fail(line, std::string("field '") + key + "' must be non-empty");
  return s;
}

std::uint64_t uint_field(const json& j, const char* key, std::size_t line) {
  const auto& v = field(j, key, line);
  if (!v.is_number_unsigned()) fail(line, std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

// Calls fn(json, line) for each non-empty line.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    fn(parse_line(text, line), line);
  }
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  return in;
}

}  // namespace

BlockCatalog parse_blocks(std::istream& in) {
  BlockCatalog catalog;
  for_each_line(in, [&](const json& j, std::size_t line) {
    DataBlock b;
    b.id = BlockId{string_field(j, "id", line)};
    const auto& size = field(j, "size_mb", line);
    if (!size.is_number_integer() || size.get<std::int64_t>() <= 0) fail(line, "size_mb must be a positive integer");
    b.size_mb = size.get<std::int64_t>();
    auto type = parse_data_type(string_field(j, "type", line));
    if (!type) fail(line, "unknown block type");
    b.type = *type;
    const auto& reps = field(j, "replicas", line);
    if (!reps.is_array() || reps.empty()) fail(line, "replicas must be a non-empty array");
    for (const auto& r : reps) {
      if (!r.is_string() || r.get<std::string>().empty()) fail(line, "replica ids must be non-empty strings");
      b.replicas.emplace_back(r.get<std::string>());
    }
    if (catalog.count(b.id)) fail(line, "duplicate block id " + b.id.str());
    catalog.emplace(b.id, std::move(b));
  });
  return catalog;
}

void write_blocks(const BlockCatalog& catalog, std::ostream& out) {
  for (const auto& [id, b] : catalog) {
    ordered_json j;
    j["id"] = id.str();
    j["size_mb"] = b.size_mb;
    j["type"] = to_string(b.type);
    auto reps = ordered_json::array();
    for (const auto& r : b.replicas) reps.push_back(r.str());
    j["replicas"] = std::move(reps);
    out << j.dump() << '\n';
  }
}

Trace parse_trace(std::istream& in, const BlockCatalog& catalog) {
  Trace trace;
  trace.catalog = catalog;
  for_each_line(in, [&](const json& j, std::size_t line) {
    Request r;
    r.seq = uint_field(j, "seq", line);
    r.time_ms = uint_field(j, "t", line);
    r.task_id = string_field(j, "task", line);
    auto tt = parse_task_type(string_field(j, "task_type", line));
    if (!tt) fail(line, "unknown task_type");
    r.task_type = *tt;
    r.block = BlockId{string_field(j, "block", line)};
    if (!catalog.count(r.block)) fail(line, "unknown block " + r.block.str());
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer() || (it->get<int>() != 0 && it->get<int>() != 1)) {
        fail(line, "label must be 0, 1 or null");
      }
      r.oracle_label = static_cast<Label>(it->get<int>());
    }
    if (!trace.requests.empty()) {
      const auto& prev = trace.requests.back();
      if (r.seq <= prev.seq) fail(line, "seq not strictly increasing");
      if (r.time_ms < prev.time_ms) fail(line, "time decreasing");
    }
    trace.requests.push_back(std::move(r));
  });
  if (trace.requests.empty()) throw DataError("no requests");
  return trace;
}

void write_trace(const Trace& trace, std::ostream& out) {
  for (const auto& r : trace.requests) {
    ordered_json j;
    j["seq"] = r.seq;
    j["t"] = r.time_ms;
    j["task"] = r.task_id;
    j["task_type"] = to_string(r.task_type);
    j["block"] = r.block.str();
    if (r.oracle_label) {
      j["label"] = to_int(*r.oracle_label);
    } else {
      j["label"] = nullptr;
    }
    out << j.dump() << '\n';
  }
}

Trace load_trace(const std::filesystem::path& trace_file, const std::filesystem::path& blocks_file) {
  auto bin = open_in(blocks_file);
  const auto catalog = parse_blocks(bin);
  auto tin = open_in(trace_file);
  auto trace = parse_trace(tin, catalog);
  const auto dir = std::filesystem::absolute(trace_file).parent_path().filename().string();
  trace.meta.workload_name = dir.empty() ? "trace" : dir;
  return trace;
}

void save_trace(const Trace& trace, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto t = open_out(dir / "trace.jsonl");
  write_trace(trace, t);
  auto b = open_out(dir / "blocks.jsonl");
  write_blocks(trace.catalog, b);
}

WorkloadSpec workload_spec_from_json(const json& j) {
  if (!j.is_object()) throw DataError("workload spec must be a JSON object");
  WorkloadSpec s;
  try {
    s.name = j.value("name", s.name);
    if (j.contains("canned")) s.canned = j.at("canned").get<std::string>();
    s.block_size_mb = j.value("block_size_mb", s.block_size_mb);
    const auto inter = j.value("interleave", std::string("round_robin"));
    if (inter == "round_robin") {
      s.interleave = Interleave::RoundRobin;
    } else if (inter == "sequential") {
      s.interleave = Interleave::Sequential;
    } else {
      throw DataError("unknown interleave " + inter);
    }
    s.n_datanodes = j.value("n_datanodes", s.n_datanodes);
    s.replication = j.value("replication", s.replication);
    s.tick_ms = j.value("tick_ms", s.tick_ms);
    s.zipf_s = j.value("zipf_s", s.zipf_s);
    for (const auto& a : j.value("apps", json::array())) {
      AppSpec app;
      app.name = a.at("name").get<std::string>();
      auto aff = parse_affinity(a.value("affinity", std::string("medium")));
      if (!aff) throw DataError("app " + app.name + ": unknown affinity");
      app.affinity = *aff;
      const auto n = a.at("n_blocks").get<std::int64_t>();
      if (n <= 0) throw DataError("app " + app.name + ": n_blocks must be positive");
      app.n_blocks = static_cast<std::size_t>(n);
      app.reuse_factor = a.value("reuse_factor", app.reuse_factor);
      if (a.contains("sharing_group") && !a.at("sharing_group").is_null()) {
        app.sharing_group = a.at("sharing_group").get<std::string>();
      }
      app.stages = a.value("stages", app.stages);
      s.apps.push_back(std::move(app));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("workload spec: ") + e.what());
  }
  return s;
}

ordered_json workload_spec_to_json(const WorkloadSpec& s) {
  ordered_json j;
  j["name"] = s.name;
  if (s.canned) j["canned"] = *s.canned;
  j["block_size_mb"] = s.block_size_mb;
  j["interleave"] = s.interleave == Interleave::RoundRobin ? "round_robin" : "sequential";
  j["n_datanodes"] = s.n_datanodes;
  j["replication"] = s.replication;
  j["tick_ms"] = s.tick_ms;
  j["zipf_s"] = s.zipf_s;
  auto apps = ordered_json::array();
  for (const auto& a : s.apps) {
    ordered_json o;
    o["name"] = a.name;
    o["affinity"] = to_string(a.affinity);
    o["n_blocks"] = a.n_blocks;
    o["reuse_factor"] = a.reuse_factor;
    if (a.sharing_group) o["sharing_group"] = *a.sharing_group;
    o["stages"] = a.stages;
    apps.push_back(std::move(o));
  }
  j["apps"] = std::move(apps);
  return j;
}

std::vector<WorkloadSpec> load_workload_specs(const std::filesystem::path& file) {
  auto in = open_in(file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(file.string() + ": " + e.what());
  }
  std::vector<WorkloadSpec> out;
  if (j.is_object() && j.contains("workloads")) {
    for (const auto& w : j.at("workloads")) out.push_back(workload_spec_from_json(w));
  } else {
    out.push_back(workload_spec_from_json(j));
  }
  return out;
}

}  // namespace hsvmlru

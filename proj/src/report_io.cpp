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

#include "hsvmlru/report_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hsvmlru/csv.hpp"
#include "hsvmlru/error.hpp"

namespace hsvmlru {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kNa = "N/A";

std::string opt(const std::optional<double>& v) { return v ? csv::format(*v) : std::string(kNa); }

double req_double(const std::string& s, std::size_t line, const char* col) {
  auto v = csv::to_double(s);
  if (!v) throw DataError("line " + std::to_string(line) + ": bad " + col + " '" + s + "'");
  return *v;
}

std::size_t req_count(const std::string& s, std::size_t line, const char* col) {
  auto v = csv::to_int(s);
  if (!v || *v < 0) throw DataError("line " + std::to_string(line) + ": bad " + col + " '" + s + "'");
  return static_cast<std::size_t>(*v);
}

std::optional<double> opt_double(const std::string& s, std::size_t line, const char* col) {
  if (s == kNa) return std::nullopt;
  return req_double(s, line, col);
}

}  // namespace

const std::string& report_csv_header() {
  static const std::string h =
      "scenario,workload,cache_blocks,block_mb,requests,hits,misses,hit_ratio,byte_hit_ratio,ir_vs_lru_pct,"
      "runtime_ms,normalized_runtime";
  return h;
}

void write_report_csv(const Report& r, std::ostream& out) {
  out << report_csv_header() << '\n';
  for (const auto& row : r.rows) {
    out << csv::join({row.scenario, row.workload, std::to_string(row.cache_blocks), std::to_string(row.block_mb),
                      std::to_string(row.requests), std::to_string(row.hits), std::to_string(row.misses),
                      csv::format(row.hit_ratio), csv::format(row.byte_hit_ratio), opt(row.ir_vs_lru_pct),
                      csv::format(row.runtime_ms), opt(row.normalized_runtime)})
        << '\n';
  }
}

Report parse_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("report: empty input");
  if (line != report_csv_header()) throw DataError("line 1: unexpected report header");
  Report rep;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 12) throw DataError("line " + std::to_string(n) + ": expected 12 fields");
    ReportRow row;
    row.scenario = f[0];
    row.workload = f[1];
    row.cache_blocks = req_count(f[2], n, "cache_blocks");
    row.block_mb = static_cast<int>(req_count(f[3], n, "block_mb"));
    row.requests = req_count(f[4], n, "requests");
    row.hits = req_count(f[5], n, "hits");
    row.misses = req_count(f[6], n, "misses");
    row.hit_ratio = req_double(f[7], n, "hit_ratio");
    row.byte_hit_ratio = req_double(f[8], n, "byte_hit_ratio");
    row.ir_vs_lru_pct = opt_double(f[9], n, "ir_vs_lru_pct");
    row.runtime_ms = req_double(f[10], n, "runtime_ms");
    row.normalized_runtime = opt_double(f[11], n, "normalized_runtime");
    if (row.hits + row.misses != row.requests) {
      throw DataError("line " + std::to_string(n) + ": hits + misses != requests");
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

void save_report_csv(const Report& r, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw DataError("cannot write " + file.string());
  write_report_csv(r, out);
}

Report load_report_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot read " + file.string());
  return parse_report_csv(in);
}

ordered_json result_to_json(const SimResult& r, double runtime_ms, const CostModel& cost) {
  ordered_json j;
  j["scenario"] = r.scenario;
  j["workload"] = r.workload;
  j["cache_blocks"] = r.cache_blocks;
  j["block_mb"] = r.block_mb;
  j["requests"] = r.requests();
  j["hits"] = r.hits;
  j["misses"] = r.misses;
  j["evictions"] = r.evictions;
  j["bytes_hit_mb"] = r.bytes_hit_mb;
  j["bytes_total_mb"] = r.bytes_total_mb;
  j["hit_ratio"] = r.requests() ? hit_ratio(r) : 0.0;
  j["runtime_ms"] = runtime_ms;
  j["cost"] = {{"t_cache_ms", cost.t_cache_ms}, {"t_disk_ms", cost.t_disk_ms}, {"t_cpu_ms", cost.t_cpu_ms}};
  auto outcomes = ordered_json::array();
  for (const auto& o : r.outcomes) {
    ordered_json e;
    e["seq"] = o.seq;
    e["block"] = o.block.str();
    e["hit"] = o.hit;
    e["node"] = o.node.str();
    e["evicted"] = o.evicted ? ordered_json(o.evicted->str()) : ordered_json(nullptr);
    e["class"] = o.class_used ? ordered_json(to_int(*o.class_used)) : ordered_json(nullptr);
    outcomes.push_back(std::move(e));
  }
  j["outcomes"] = std::move(outcomes);
  return j;
}

RunRecord result_from_json(const json& j) {
  RunRecord rec;
  auto& r = rec.result;
  try {
    r.scenario = j.at("scenario").get<std::string>();
    r.workload = j.at("workload").get<std::string>();
    r.cache_blocks = j.at("cache_blocks").get<std::size_t>();
    r.block_mb = j.at("block_mb").get<int>();
    r.hits = j.at("hits").get<std::size_t>();
    r.misses = j.at("misses").get<std::size_t>();
    r.evictions = j.at("evictions").get<std::size_t>();
    r.bytes_hit_mb = j.at("bytes_hit_mb").get<std::int64_t>();
    r.bytes_total_mb = j.at("bytes_total_mb").get<std::int64_t>();
    rec.runtime_ms = j.at("runtime_ms").get<double>();
    for (const auto& e : j.at("outcomes")) {
      AccessOutcome o;
      o.seq = e.at("seq").get<std::uint64_t>();
      o.block = BlockId(e.at("block").get<std::string>());
      o.hit = e.at("hit").get<bool>();
      o.node = NodeId(e.at("node").get<std::string>());
      if (!e.at("evicted").is_null()) o.evicted = BlockId(e.at("evicted").get<std::string>());
      if (!e.at("class").is_null()) o.class_used = label_from_bool(e.at("class").get<int>() != 0);
      r.outcomes.push_back(std::move(o));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("result: ") + e.what());
  }
  if (r.outcomes.size() != r.requests()) throw DataError("result: outcome count does not match requests");
  return rec;
}

void write_result_json(const SimResult& r, double runtime_ms, const CostModel& cost, std::ostream& out) {
  out << result_to_json(r, runtime_ms, cost).dump(2) << '\n';
}

RunRecord parse_result_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("result: ") + e.what());
  }
  return result_from_json(j);
}

void write_hit_ratio_dat(const Report& r, std::string_view workload, int block_mb, std::ostream& out) {
  std::set<std::string> scenarios;
  std::map<std::size_t, std::map<std::string, double>> grid;
  for (const auto& row : r.rows) {
    if (row.workload != workload || row.block_mb != block_mb) continue;
    scenarios.insert(row.scenario);
    grid[row.cache_blocks][row.scenario] = row.hit_ratio;
  }
  out << "# cache_blocks";
  for (const auto& s : scenarios) out << ' ' << s;
  out << '\n';
  for (const auto& [size, vals] : grid) {
    out << size;
    for (const auto& s : scenarios) {
      auto it = vals.find(s);
      out << ' ' << (it == vals.end() ? std::string("NaN") : csv::format(it->second));
    }
    out << '\n';
  }
}

void write_runtime_dat(const Report& r, std::ostream& out) {
  std::set<std::string> scenarios;
  std::map<std::string, std::map<std::string, double>> grid;
  for (const auto& row : r.rows) {
    if (!row.normalized_runtime) continue;
    scenarios.insert(row.scenario);
    grid[row.workload][row.scenario] = *row.normalized_runtime;
  }
  out << "# workload";
  for (const auto& s : scenarios) out << ' ' << s;
  out << '\n';
  for (const auto& [w, vals] : grid) {
    out << w;
    for (const auto& s : scenarios) {
      auto it = vals.find(s);
      out << ' ' << (it == vals.end() ? std::string("NaN") : csv::format(it->second));
    }
    out << '\n';
  }
}

void write_apps_csv(const std::vector<AppRow>& apps, std::ostream& out) {
  out << "workload,app_index,app,scenario,requests,hits,runtime_ms,normalized_runtime\n";
  for (const auto& a : apps) {
    out << csv::join({a.workload, std::to_string(a.app_index), a.app, a.scenario, std::to_string(a.requests),
                      std::to_string(a.hits), csv::format(a.runtime_ms), opt(a.normalized_runtime)})
        << '\n';
  }
}

void write_ir_table_csv(const std::vector<IrRow>& rows, std::ostream& out) {
  out << "cache_blocks,ir_64mb_pct,ir_128mb_pct\n";
  for (const auto& r : rows) {
    out << csv::join({std::to_string(r.cache_blocks), opt(r.ir_64mb), opt(r.ir_128mb)}) << '\n';
  }
}

}  // namespace hsvmlru

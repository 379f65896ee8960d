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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "hsvmlru/workload.hpp"

namespace hsvmlru {

// blocks.jsonl: {"id":"b-0007","size_mb":64,"type":"map_input","replicas":["dn-1","dn-4","dn-6"]}
BlockCatalog parse_blocks(std::istream& in);
void write_blocks(const BlockCatalog& catalog, std::ostream& out);

// trace.jsonl: {"seq":0,"t":0,"task":"m-12","task_type":"map","block":"b-0007","label":1}
// Errors name the offending line (1-based).
Trace parse_trace(std::istream& in, const BlockCatalog& catalog);
void write_trace(const Trace& trace, std::ostream& out);

// The workload name is taken from the trace file's directory.
Trace load_trace(const std::filesystem::path& trace_file, const std::filesystem::path& blocks_file);
// Writes <dir>/trace.jsonl and <dir>/blocks.jsonl.
void save_trace(const Trace& trace, const std::filesystem::path& dir);

WorkloadSpec workload_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json workload_spec_to_json(const WorkloadSpec& spec);

// Accepts a single spec object or {"workloads":[spec, ...]}.
std::vector<WorkloadSpec> load_workload_specs(const std::filesystem::path& file);

}  // namespace hsvmlru

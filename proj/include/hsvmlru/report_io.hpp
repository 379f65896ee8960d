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
#include <string>
#include <vector>

#include "json.hpp"

#include "hsvmlru/experiments.hpp"

namespace hsvmlru {

const std::string& report_csv_header();

// Absent optional columns are written as N/A.
void write_report_csv(const Report& r, std::ostream& out);
Report parse_report_csv(std::istream& in);
void save_report_csv(const Report& r, const std::filesystem::path& file);
Report load_report_csv(const std::filesystem::path& file);

nlohmann::ordered_json result_to_json(const SimResult& r, double runtime_ms, const CostModel& cost);
RunRecord result_from_json(const nlohmann::json& j);
void write_result_json(const SimResult& r, double runtime_ms, const CostModel& cost, std::ostream& out);
RunRecord parse_result_json(std::istream& in);

// Gnuplot data: one row per cache size, one column per scenario.
void write_hit_ratio_dat(const Report& r, std::string_view workload, int block_mb, std::ostream& out);
// One row per workload, one column per scenario (normalized runtime).
void write_runtime_dat(const Report& r, std::ostream& out);

void write_apps_csv(const std::vector<AppRow>& apps, std::ostream& out);
void write_ir_table_csv(const std::vector<IrRow>& rows, std::ostream& out);

}  // namespace hsvmlru

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

#include "json.hpp"

#include "hsvmlru/svm.hpp"

namespace hsvmlru {

nlohmann::ordered_json model_to_json(const SvmModel& m);
SvmModel model_from_json(const nlohmann::json& j);

void write_model(const SvmModel& m, std::ostream& out);
SvmModel parse_model(std::istream& in);

void save_model(const SvmModel& m, const std::filesystem::path& file);
SvmModel load_model(const std::filesystem::path& file);

}  // namespace hsvmlru

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

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "hsvmlru/features.hpp"
#include "hsvmlru/svm.hpp"
#include "hsvmlru/workload.hpp"

namespace hsvmlru {

// Trained online-schema SVM applied to request features.
struct ModelClassifier {
  std::shared_ptr<const SvmModel> model;
};

// Ground truth carried by a labeled trace.
struct OracleClassifier {};

struct ConstantClassifier {
  Label label = Label::Reused;
};

using Classifier = std::variant<ModelClassifier, OracleClassifier, ConstantClassifier>;

Classifier make_model_classifier(SvmModel model);

Label classify(const Classifier& c, const Request& r, const DataBlock& block, const AccessStats& stats);

// "model:PATH", "oracle", "const:0" or "const:1".
Classifier parse_classifier(std::string_view spec);
std::string describe(const Classifier& c);

}  // namespace hsvmlru

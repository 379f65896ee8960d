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

#include "hsvmlru/classifier.hpp"

#include <stdexcept>

#include "hsvmlru/error.hpp"
#include "hsvmlru/model_io.hpp"

namespace hsvmlru {

Classifier make_model_classifier(SvmModel model) {
  if (model.schema != FeatureSchema::Online) {
    throw std::invalid_argument("request classification needs an online-schema model");
  }
  return ModelClassifier{std::make_shared<const SvmModel>(std::move(model))};
}

Label classify(const Classifier& c, const Request& r, const DataBlock& block, const AccessStats& stats) {
  struct Visitor {
    const Request& r;
    const DataBlock& block;
    const AccessStats& stats;

    Label operator()(const ModelClassifier& m) const {
      if (!m.model || m.model->schema != FeatureSchema::Online) {
        throw std::invalid_argument("request classification needs an online-schema model");
      }
      return predict(*m.model, extract_online_features(r, block, stats));
    }
    Label operator()(const OracleClassifier&) const {
      if (!r.oracle_label) throw DataError("oracle classifier on unlabeled request " + std::to_string(r.seq));
      return *r.oracle_label;
    }
    Label operator()(const ConstantClassifier& k) const { return k.label; }
  };
  return std::visit(Visitor{r, block, stats}, c);
}

Classifier parse_classifier(std::string_view spec) {
  if (spec == "oracle") return OracleClassifier{};
  if (spec == "const:0") return ConstantClassifier{Label::NotReused};
  if (spec == "const:1") return ConstantClassifier{Label::Reused};
  if (spec.substr(0, 6) == "model:" && spec.size() > 6) {
    return make_model_classifier(load_model(std::string(spec.substr(6))));
  }
  throw std::invalid_argument("classifier must be model:PATH, oracle, const:0 or const:1");
}

std::string describe(const Classifier& c) {
  if (std::holds_alternative<OracleClassifier>(c)) return "oracle";
  if (const auto* k = std::get_if<ConstantClassifier>(&c)) return "const:" + std::to_string(to_int(k->label));
  return "model";
}

}  // namespace hsvmlru

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

#include "hsvmlru/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "hsvmlru/error.hpp"

namespace hsvmlru {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json vec_to_json(const Eigen::VectorXd& v) {
  auto a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  if (!a.is_array()) throw DataError("model: expected numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

}  // namespace

ordered_json model_to_json(const SvmModel& m) {
  ordered_json j;
  j["kernel"] = {{"kind", to_string(m.kernel.kind)},
                 {"gamma", m.kernel.gamma},
                 {"degree", m.kernel.degree},
                 {"coef0", m.kernel.coef0}};
  auto svs = ordered_json::array();
  for (Eigen::Index r = 0; r < m.support_vectors.rows(); ++r) {
    svs.push_back(vec_to_json(m.support_vectors.row(r).transpose()));
  }
  j["support_vectors"] = std::move(svs);
  j["dual_coef"] = vec_to_json(m.dual_coef);
  j["bias"] = m.bias;
  j["scaler"] = {{"min", vec_to_json(m.scaler.min)}, {"max", vec_to_json(m.scaler.max)}};
  j["schema"] = to_string(m.schema);
  return j;
}

SvmModel model_from_json(const json& j) {
  SvmModel m;
  try {
    const auto& k = j.at("kernel");
    auto kind = parse_kernel_kind(k.at("kind").get<std::string>());
    if (!kind) throw DataError("model: unknown kernel kind");
    m.kernel.kind = *kind;
    m.kernel.gamma = k.at("gamma").get<double>();
    m.kernel.degree = k.at("degree").get<int>();
    m.kernel.coef0 = k.at("coef0").get<double>();
    auto schema = parse_schema(j.at("schema").get<std::string>());
    if (!schema) throw DataError("model: unknown schema");
    m.schema = *schema;
    m.scaler.min = vec_from_json(j.at("scaler").at("min"));
    m.scaler.max = vec_from_json(j.at("scaler").at("max"));
    m.dual_coef = vec_from_json(j.at("dual_coef"));
    m.bias = j.at("bias").get<double>();
    const auto& svs = j.at("support_vectors");
    const auto dim = m.scaler.min.size();
    if (m.scaler.max.size() != dim || dim != feature_count(m.schema)) {
      throw DataError("model: scaler dimension does not match schema");
    }
    if (svs.size() != static_cast<std::size_t>(m.dual_coef.size())) {
      throw DataError("model: support_vectors and dual_coef differ in length");
    }
    m.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), dim);
    for (std::size_t r = 0; r < svs.size(); ++r) {
      const auto v = vec_from_json(svs[r]);
      if (v.size() != dim) throw DataError("model: support vector dimension mismatch");
      m.support_vectors.row(static_cast<Eigen::Index>(r)) = v.transpose();
    }
    validate(m.kernel);
  } catch (const json::exception& e) {
    throw DataError(std::string("model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model: ") + e.what());
  }
  return m;
}

void write_model(const SvmModel& m, std::ostream& out) { out << model_to_json(m).dump() << '\n'; }

SvmModel parse_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model: ") + e.what());
  }
  return model_from_json(j);
}

void save_model(const SvmModel& m, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  write_model(m, out);
}

SvmModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read " + file.string());
  return parse_model(in);
}

}  // namespace hsvmlru

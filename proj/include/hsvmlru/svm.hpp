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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsvmlru/features.hpp"
#include "hsvmlru/kernel.hpp"

namespace hsvmlru {

struct TrainConfig {
  double c = 1.0;
  double tol = 1e-3;
  // Iteration budget is max_passes * n pair updates.
  int max_passes = 50;
  KernelSpec kernel;
  std::uint64_t seed = 0;
};

// Soft-margin binary SVM. Labels map NotReused -> -1, Reused -> +1.
struct SvmModel {
  Eigen::MatrixXd support_vectors;  // one row per support vector, scaled space
  Eigen::VectorXd dual_coef;        // alpha_i * y_i
  double bias = 0.0;
  KernelSpec kernel;
  Scaler scaler;
  FeatureSchema schema = FeatureSchema::Online;

  Eigen::Index n_features() const { return scaler.min.size(); }
};

struct TrainDiagnostics {
  std::size_t iterations = 0;
  bool converged = false;
  double gap = 0.0;  // final maximal KKT violation gap
  // Full alpha vector over the training rows.
  Eigen::VectorXd alpha;
};

inline constexpr std::size_t kKernelCacheMaxRows = 5000;

// Trains on already-scaled data; `scaler` is stored in the model and applied
// to raw inputs at prediction time.
SvmModel train(const Dataset& scaled, const TrainConfig& cfg, Scaler scaler,
               TrainDiagnostics* diagnostics = nullptr);

// Scaler with min 0 / max 1, i.e. the identity map.
Scaler identity_scaler(Eigen::Index n_features);

// Fits a min-max scaler on `raw`, scales and trains.
SvmModel fit(const Dataset& raw, const TrainConfig& cfg, TrainDiagnostics* diagnostics = nullptr);

// 1 / (n_features * var(X)) over all entries; 1 / n_features when var is 0.
double default_gamma(const Eigen::MatrixXd& scaled);

// f(x) = sum_i dual_coef_i K(sv_i, scale(x)) + bias, x in raw feature space.
double decision_value(const SvmModel& m, const FeatureVector& raw);
Eigen::VectorXd decision_values(const SvmModel& m, const Eigen::MatrixXd& raw_rows);

// Reused iff f(x) > 0.
Label predict(const SvmModel& m, const FeatureVector& raw);
std::vector<Label> predict_all(const SvmModel& m, const Eigen::MatrixXd& raw_rows);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ConfusionReport {
  // Counts with Reused as the positive class.
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::array<ClassMetrics, 2> per_class{};  // indexed by Label value
  ClassMetrics macro;
  double accuracy = 0.0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

// Metrics for class c: precision = TP/(TP+FP), recall = TP/(TP+FN),
// f1 = 2PR/(P+R); empty denominators give 0.
ConfusionReport confusion_report(std::span<const Label> truth, std::span<const Label> predicted);

ConfusionReport evaluate(const SvmModel& m, const Dataset& test);

// Per-class rows plus accuracy, laid out like a kernel comparison table.
std::string format_report(const ConfusionReport& r, const std::string& title = "");

struct KernelTrial {
  KernelSpec kernel;
  std::optional<ConfusionReport> report;
  std::optional<std::string> error;
};

struct KernelSelection {
  KernelSpec best;
  std::vector<KernelTrial> trials;
};

// Trains each candidate on one seeded 75/25 split of `raw`; best by accuracy,
// then macro F1, then candidate order.
KernelSelection select_kernel(const Dataset& raw, const std::vector<KernelSpec>& candidates,
                              const TrainConfig& cfg, std::uint64_t seed);

std::vector<KernelSpec> default_kernel_candidates();

}  // namespace hsvmlru

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

#include "hsvmlru/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hsvmlru/error.hpp"

namespace hsvmlru {

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Polynomial: return "poly";
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Sigmoid: return "sigmoid";
  }
  return "?";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view s) {
  if (s == "linear") return KernelKind::Linear;
  if (s == "poly" || s == "polynomial") return KernelKind::Polynomial;
  if (s == "rbf") return KernelKind::Rbf;
  if (s == "sigmoid") return KernelKind::Sigmoid;
  return std::nullopt;
}

double default_gamma(const Eigen::MatrixXd& x) {
  const double n_features = static_cast<double>(std::max<Eigen::Index>(x.cols(), 1));
  if (x.size() == 0) return 1.0 / n_features;
  const double var = (x.array() - x.mean()).square().mean();
  return var > 0.0 ? 1.0 / (n_features * var) : 1.0 / n_features;
}

Scaler identity_scaler(Eigen::Index n_features) {
  return {Eigen::VectorXd::Zero(n_features), Eigen::VectorXd::Ones(n_features)};
}

namespace {

// Kernel rows over the training set, from a precomputed Gram matrix when small enough.
class KernelRows {
 public:
  KernelRows(const KernelSpec& k, const Eigen::MatrixXd& x) : kernel_(k), x_(x) {
    if (static_cast<std::size_t>(x.rows()) <= kKernelCacheMaxRows) {
      gram_ = kernel_matrix(k, x, x);
      diag_ = gram_.diagonal();
    } else {
      diag_.resize(x.rows());
      for (Eigen::Index i = 0; i < x.rows(); ++i) diag_(i) = kernel_eval(k, x.row(i), x.row(i));
    }
  }

  Eigen::VectorXd row(Eigen::Index i) const {
    if (gram_.size() > 0) return gram_.col(i);
    return kernel_matrix(kernel_, x_, x_.row(i)).col(0);
  }

  const Eigen::VectorXd& diagonal() const { return diag_; }

 private:
  KernelSpec kernel_;
  const Eigen::MatrixXd& x_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd diag_;
};

constexpr double kTau = 1e-12;

}  // namespace

SvmModel train(const Dataset& d, const TrainConfig& cfg, Scaler scaler, TrainDiagnostics* diagnostics) {
  if (!(cfg.c > 0.0)) throw std::invalid_argument("C must be positive");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (cfg.max_passes < 1) throw std::invalid_argument("max_passes must be positive");
  if (d.size() == 0 || d.count(Label::Reused) == 0 || d.count(Label::NotReused) == 0) {
    throw std::invalid_argument("single-class dataset");
  }
  if (!d.x.allFinite()) throw DataError("non-finite features");
  if (scaler.min.size() != d.x.cols()) throw std::invalid_argument("scaler dimension mismatch");

  KernelSpec kernel = cfg.kernel;
  if (kernel.kind != KernelKind::Linear && !(kernel.gamma > 0.0)) kernel.gamma = default_gamma(d.x);
  validate(kernel);

  const Eigen::Index n = d.x.rows();
  const double c = cfg.c;
  Eigen::VectorXd y(n);
  for (Eigen::Index t = 0; t < n; ++t) y(t) = d.y[static_cast<std::size_t>(t)] == Label::Reused ? 1.0 : -1.0;

  const KernelRows k(kernel, d.x);
  const Eigen::VectorXd& qd = k.diagonal();
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  // Gradient of the dual objective: G = Q alpha - 1, Q_ts = y_t y_s K_ts.
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);

  auto in_up = [&](Eigen::Index t) { return (y(t) > 0) ? alpha(t) < c : alpha(t) > 0; };
  auto in_low = [&](Eigen::Index t) { return (y(t) > 0) ? alpha(t) > 0 : alpha(t) < c; };

  const std::size_t max_iter = static_cast<std::size_t>(cfg.max_passes) * static_cast<std::size_t>(n);
  std::size_t iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    // First index: maximal violator in I_up.
    Eigen::Index i = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -y(t) * grad(t) >= gmax) {
        gmax = -y(t) * grad(t);
        i = t;
      }
    }
    if (i < 0) {
      converged = true;
      break;
    }
    const Eigen::VectorXd ki = k.row(i);

    // Second index: largest second-order decrease among violating pairs in I_low.
    Eigen::Index j = -1;
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y(t) * grad(t);
      gmin = std::min(gmin, v);
      const double b = gmax - v;
      if (b > 0) {
        double a = qd(i) + qd(t) - 2.0 * ki(t);
        if (a <= 0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj <= best) {
          best = obj;
          j = t;
        }
      }
    }
    if (j < 0 || gmax - gmin < cfg.tol) {
      converged = true;
      break;
    }
    const Eigen::VectorXd kj = k.row(j);

    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    const double qij = y(i) * y(j) * ki(j);
    double ai = old_ai;
    double aj = old_aj;
    if (y(i) != y(j)) {
      double quad = qd(i) + qd(j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = qd(i) + qd(j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }
    alpha(i) = ai;
    alpha(j) = aj;
    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    grad.array() += y.array() * (y(i) * dai * ki.array() + y(j) * daj * kj.array());
  }

  // Bias: midpoint of the feasible interval [max_{I_up} -yG, min_{I_low} -yG].
  double m = -std::numeric_limits<double>::infinity();
  double big_m = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    const double v = -y(t) * grad(t);
    if (in_up(t)) m = std::max(m, v);
    if (in_low(t)) big_m = std::min(big_m, v);
  }
  double bias = 0.0;
  if (std::isfinite(m) && std::isfinite(big_m)) {
    bias = 0.5 * (m + big_m);
  } else if (std::isfinite(m)) {
    bias = m;
  } else if (std::isfinite(big_m)) {
    bias = big_m;
  }

  SvmModel model;
  model.kernel = kernel;
  model.bias = bias;
  model.scaler = std::move(scaler);
  model.schema = d.schema;
  std::vector<Eigen::Index> sv;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha(t) > 0) sv.push_back(t);
  }
  model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), d.x.cols());
  model.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const auto row = static_cast<Eigen::Index>(s);
    model.support_vectors.row(row) = d.x.row(sv[s]);
    model.dual_coef(row) = alpha(sv[s]) * y(sv[s]);
  }
  if (diagnostics) {
    diagnostics->iterations = iter;
    diagnostics->converged = converged;
    diagnostics->gap = std::isfinite(m) && std::isfinite(big_m) ? m - big_m : 0.0;
    diagnostics->alpha = alpha;
  }
  return model;
}

SvmModel fit(const Dataset& raw, const TrainConfig& cfg, TrainDiagnostics* diagnostics) {
  auto scaler = fit_scaler(raw);
  const auto scaled = apply_scaler(scaler, raw);
  return train(scaled, cfg, std::move(scaler), diagnostics);
}

Eigen::VectorXd decision_values(const SvmModel& m, const Eigen::MatrixXd& raw_rows) {
  if (raw_rows.cols() != m.n_features()) throw std::invalid_argument("feature vector does not match model schema");
  const Eigen::MatrixXd xs = scale_rows(m.scaler, raw_rows);
  if (m.support_vectors.rows() == 0) return Eigen::VectorXd::Constant(raw_rows.rows(), m.bias);
  const Eigen::MatrixXd k = kernel_matrix(m.kernel, xs, m.support_vectors);
  return (k * m.dual_coef).array() + m.bias;
}

double decision_value(const SvmModel& m, const FeatureVector& raw) {
  return decision_values(m, raw.transpose())(0);
}

Label predict(const SvmModel& m, const FeatureVector& raw) { return label_from_bool(decision_value(m, raw) > 0.0); }

std::vector<Label> predict_all(const SvmModel& m, const Eigen::MatrixXd& raw_rows) {
  const auto f = decision_values(m, raw_rows);
  std::vector<Label> out(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) out[static_cast<std::size_t>(i)] = label_from_bool(f(i) > 0.0);
  return out;
}

KernelSelection select_kernel(const Dataset& raw, const std::vector<KernelSpec>& candidates, const TrainConfig& cfg,
                              std::uint64_t seed) {
  if (candidates.empty()) throw std::invalid_argument("no kernel candidates");
  auto [train_set, test_set] = split_dataset(raw, 0.75, seed);
  auto scaler = fit_scaler(train_set);
  const auto scaled = apply_scaler(scaler, train_set);

  KernelSelection sel;
  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    KernelTrial trial{candidates[c], std::nullopt, std::nullopt};
    try {
      TrainConfig tc = cfg;
      tc.kernel = candidates[c];
      const auto model = train(scaled, tc, scaler);
      trial.kernel = model.kernel;
      trial.report = evaluate(model, test_set);
      if (!best) {
        best = c;
      } else {
        const auto& cur = *sel.trials[*best].report;
        const auto& r = *trial.report;
        if (r.accuracy > cur.accuracy || (r.accuracy == cur.accuracy && r.macro.f1 > cur.macro.f1)) best = c;
      }
    } catch (const std::exception& e) {
      trial.error = e.what();
    }
    sel.trials.push_back(std::move(trial));
  }
  if (!best) throw DataError("all kernel candidates failed: " + sel.trials.front().error.value_or("?"));
  sel.best = sel.trials[*best].kernel;
  return sel;
}

std::vector<KernelSpec> default_kernel_candidates() {
  return {
      {KernelKind::Linear, 0.0, 1, 0.0},
      {KernelKind::Polynomial, 0.0, 3, 1.0},
      {KernelKind::Rbf, 0.0, 3, 0.0},
      {KernelKind::Sigmoid, 0.0, 3, 0.0},
  };
}

}  // namespace hsvmlru

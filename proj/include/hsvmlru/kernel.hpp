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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

namespace hsvmlru {

enum class KernelKind { Linear, Polynomial, Rbf, Sigmoid };

std::string_view to_string(KernelKind k);
std::optional<KernelKind> parse_kernel_kind(std::string_view s);

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  // <= 0 means "choose from the data" when passed to train(); a trained
  // model always holds the resolved value.
  double gamma = 0.0;
  int degree = 3;
  double coef0 = 0.0;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

inline void validate(const KernelSpec& k) {
  if (k.kind != KernelKind::Linear && !(k.gamma > 0.0)) throw std::invalid_argument("kernel gamma must be positive");
  if (k.degree < 1) throw std::invalid_argument("kernel degree must be >= 1");
}

namespace detail {

template <typename Scalar>
Scalar apply_inner(const KernelSpec& k, Scalar dot) {
  switch (k.kind) {
    case KernelKind::Linear: return dot;
    case KernelKind::Polynomial: return std::pow(Scalar(k.gamma) * dot + Scalar(k.coef0), Scalar(k.degree));
    case KernelKind::Sigmoid: return std::tanh(Scalar(k.gamma) * dot + Scalar(k.coef0));
    case KernelKind::Rbf: break;
  }
  throw std::logic_error("apply_inner called for rbf");
}

}  // namespace detail

// K(x, y) for two vectors of equal length.
template <typename A, typename B>
typename A::Scalar kernel_eval(const KernelSpec& k, const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  using Scalar = typename A::Scalar;
  if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  validate(k);
  if (k.kind == KernelKind::Rbf) {
    return std::exp(-Scalar(k.gamma) * (x.reshaped() - y.reshaped()).squaredNorm());
  }
  return detail::apply_inner<Scalar>(k, x.reshaped().dot(y.reshaped()));
}

// out(i, j) = K(a.row(i), b.row(j)).
template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_matrix(const KernelSpec& k,
                                                                              const Eigen::MatrixBase<A>& a,
                                                                              const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.cols() != b.cols()) throw std::invalid_argument("kernel_matrix: dimension mismatch");
  validate(k);
  Mat gram = a * b.transpose();
  if (k.kind == KernelKind::Rbf) {
    const auto an = a.rowwise().squaredNorm().eval();
    const auto bn = b.rowwise().squaredNorm().eval();
    Mat d2 = (-2 * gram).colwise() + an;
    d2.rowwise() += bn.transpose();
    return (-Scalar(k.gamma) * d2.cwiseMax(Scalar(0))).array().exp().matrix();
  }
  return gram.unaryExpr([&k](Scalar v) { return detail::apply_inner<Scalar>(k, v); });
}

}  // namespace hsvmlru

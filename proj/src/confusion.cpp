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

#include <cstdio>
#include <stdexcept>

#include "hsvmlru/svm.hpp"

namespace hsvmlru {

namespace {

ClassMetrics metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.support = tp + fn;
  return m;
}

}  // namespace

ConfusionReport confusion_report(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("truth/prediction length mismatch");
  ConfusionReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == Label::Reused;
    const bool p = predicted[i] == Label::Reused;
    if (t && p) {
      ++r.tp;
    } else if (!t && p) {
      ++r.fp;
    } else if (!t) {
      ++r.tn;
    } else {
      ++r.fn;
    }
  }
  // Class 0 swaps the roles: its TP is tn, FP is fn, FN is fp.
  r.per_class[0] = metrics(r.tn, r.fn, r.fp);
  r.per_class[1] = metrics(r.tp, r.fp, r.fn);
  r.macro.precision = 0.5 * (r.per_class[0].precision + r.per_class[1].precision);
  r.macro.recall = 0.5 * (r.per_class[0].recall + r.per_class[1].recall);
  r.macro.f1 = 0.5 * (r.per_class[0].f1 + r.per_class[1].f1);
  r.macro.support = r.total();
  r.accuracy = r.total() ? static_cast<double>(r.tp + r.tn) / static_cast<double>(r.total()) : 0.0;
  return r;
}

ConfusionReport evaluate(const SvmModel& m, const Dataset& test) {
  if (test.size() == 0) throw std::invalid_argument("cannot evaluate on an empty dataset");
  const auto pred = predict_all(m, test.x);
  return confusion_report(test.y, pred);
}

std::string format_report(const ConfusionReport& r, const std::string& title) {
  std::string out;
  char buf[160];
  if (!title.empty()) out += title + "\n";
  out += "class  precision  recall  f1-score  support\n";
  for (int c = 0; c < 2; ++c) {
    const auto& m = r.per_class[static_cast<std::size_t>(c)];
    std::snprintf(buf, sizeof buf, "%-5d  %9.4f  %6.4f  %8.4f  %7zu\n", c, m.precision, m.recall, m.f1, m.support);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "macro  %9.4f  %6.4f  %8.4f  %7zu\n", r.macro.precision, r.macro.recall, r.macro.f1,
                r.macro.support);
  out += buf;
  std::snprintf(buf, sizeof buf, "accuracy %.4f  (tp=%zu fp=%zu tn=%zu fn=%zu)\n", r.accuracy, r.tp, r.fp, r.tn, r.fn);
  out += buf;
  return out;
}

}  // namespace hsvmlru

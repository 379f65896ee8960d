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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hsvmlru/error.hpp"
#include "hsvmlru/experiments.hpp"
#include "hsvmlru/labeling.hpp"
#include "hsvmlru/model_io.hpp"
#include "hsvmlru/report_io.hpp"
#include "hsvmlru/rng.hpp"
#include "hsvmlru/trace_io.hpp"
#include "toy_data.hpp"

using namespace hsvmlru;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Small randomized workload for the equivalence and dominance corpus.
WorkloadSpec corpus_spec(std::uint64_t seed) {
  Rng rng(seed * 7919 + 1);
  WorkloadSpec s;
  s.name = "corpus-" + std::to_string(seed);
  s.n_datanodes = 3;
  s.replication = 2;
  const std::size_t apps = 1 + rng.below(3);
  for (std::size_t a = 0; a < apps; ++a) {
    AppSpec app;
    app.name = "app" + std::to_string(a);
    app.affinity = static_cast<Affinity>(rng.below(3));
    app.n_blocks = 4 + rng.below(30);
    app.reuse_factor = 0.25 * static_cast<double>(rng.below(9));
    if (rng.below(2)) app.sharing_group = "g";
    app.stages = rng.below(3) == 0 ? 2 : 1;
    s.apps.push_back(app);
  }
  s.interleave = rng.below(2) ? Interleave::RoundRobin : Interleave::Sequential;
  return s;
}

Outcome fig2_replay() {
  const auto t0 = Clock::now();
  const auto t = fig2_trace();
  const ClusterConfig cfg{3, 5, 3, 64};
  const Classifier oracle = OracleClassifier{};
  const auto lru = run_simulation(t, cfg, PolicyConfig{PolicyId::Lru, HitDemotion::EndOfUnused}, nullptr);
  const auto h = run_simulation(t, cfg, PolicyConfig{PolicyId::HsvmLru, HitDemotion::EndOfUnused}, &oracle);
  std::vector<std::string> hit_blocks;
  for (const auto& o : h.outcomes) {
    if (o.hit) hit_blocks.push_back(o.block.str());
  }
  const double dt = seconds_since(t0);
  Outcome out;
  out.ok = lru.hits == 0 && lru.misses == 10 && h.hits == 2 && hit_blocks == std::vector<std::string>{"DB2", "DB3"} &&
           h.outcomes[7].hit && h.outcomes[9].hit && dt < 1.0;
  out.detail = "lru " + std::to_string(lru.hits) + "/" + std::to_string(lru.misses) + ", hsvmlru+oracle " +
               std::to_string(h.hits) + " hits, " + fmt("%.3f s", dt);
  return out;
}

bool same_hits_and_evictions(const SimResult& a, const SimResult& b, bool compare_evictions) {
  if (a.outcomes.size() != b.outcomes.size()) return false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i].hit != b.outcomes[i].hit) return false;
    if (compare_evictions && a.outcomes[i].evicted != b.outcomes[i].evicted) return false;
  }
  return true;
}

Outcome lru_equivalence_and_dominance(Outcome* dominance) {
  const Classifier reused = ConstantClassifier{Label::Reused};
  const Classifier not_reused = ConstantClassifier{Label::NotReused};
  const Classifier oracle = OracleClassifier{};
  const PolicyConfig lru_p{PolicyId::Lru, HitDemotion::EndOfUnused};
  const PolicyConfig h_p{PolicyId::HsvmLru, HitDemotion::EndOfUnused};
  Outcome eq;
  *dominance = Outcome{};
  std::size_t sims = 0, violations = 0;
  std::string first_bad, first_dom;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto spec = corpus_spec(seed);
    const auto t = attach_oracle_labels(generate_trace(spec, seed));
    for (std::size_t cap = 2; cap <= 16; ++cap) {
      const ClusterConfig cfg{spec.n_datanodes, cap, spec.replication, spec.block_size_mb};
      const auto lru = run_simulation(t, cfg, lru_p, nullptr);
      const auto r1 = run_simulation(t, cfg, h_p, &reused);
      const auto r0 = run_simulation(t, cfg, h_p, &not_reused);
      const auto ro = run_simulation(t, cfg, h_p, &oracle);
      sims += 3;
      if (!same_hits_and_evictions(lru, r1, true) || !same_hits_and_evictions(lru, r0, true)) {
        if (first_bad.empty()) first_bad = "seed " + std::to_string(seed) + " capacity " + std::to_string(cap);
        eq.ok = false;
      }
      for (std::size_t i = 0; i < lru.outcomes.size(); ++i) {
        if (lru.outcomes[i].hit && !ro.outcomes[i].hit) {
          ++violations;
          if (first_dom.empty()) {
            first_dom = "seed " + std::to_string(seed) + " capacity " + std::to_string(cap) + " request " +
                        std::to_string(i);
          }
          dominance->ok = false;
        }
      }
    }
  }
  eq.detail = std::to_string(sims) + " policy runs over 1000 traces x 15 capacities";
  if (!eq.ok) eq.detail += "; first mismatch at " + first_bad;
  dominance->detail = "oracle hit set contains lru hit set on all 15000 (trace, capacity) pairs";
  if (!dominance->ok) dominance->detail = std::to_string(violations) + " violations; first at " + first_dom;
  return eq;
}

Outcome metrics_oracle() {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(500);
    std::vector<Label> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = label_from_bool(rng.below(2) == 1);
      p[i] = label_from_bool(rng.below(3) != 0);
    }
    const auto r = confusion_report(t, p);
    // Brute-force tallies per class.
    double acc_hits = 0;
    for (std::size_t i = 0; i < n; ++i) acc_hits += t[i] == p[i];
    auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
    check(r.accuracy, acc_hits / static_cast<double>(n));
    double macro_p = 0, macro_r = 0, macro_f = 0;
    for (int c = 0; c < 2; ++c) {
      const Label cl = static_cast<Label>(c);
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += t[i] == cl && p[i] == cl;
        fp += t[i] != cl && p[i] == cl;
        fn += t[i] == cl && p[i] != cl;
      }
      const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
      const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
      const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
      const auto& m = r.per_class[static_cast<std::size_t>(c)];
      check(m.precision, prec);
      check(m.recall, rec);
      check(m.f1, f1);
      macro_p += prec / 2;
      macro_r += rec / 2;
      macro_f += f1 / 2;
    }
    check(r.macro.precision, macro_p);
    check(r.macro.recall, macro_r);
    check(r.macro.f1, macro_f);
  }
  return {worst <= 1e-12, "200 vectors, max abs deviation " + fmt("%.3g", worst)};
}

Outcome smo_validity() {
  struct Case {
    const char* name;
    Dataset data;
    TrainConfig cfg;
    bool need_perfect;
  };
  auto cfg = [](KernelKind k, double gamma, double c) {
    TrainConfig t;
    t.kernel.kind = k;
    t.kernel.gamma = gamma;
    t.c = c;
    t.tol = 1e-3;
    return t;
  };
  std::vector<Case> cases = {
      {"pair", toy::pair(), cfg(KernelKind::Linear, 0, 10), true},
      {"xor", toy::xor_set(), cfg(KernelKind::Rbf, 1.0, 10), true},
      {"circles-rbf", toy::circles(), cfg(KernelKind::Rbf, 0, 1), false},
      {"circles-linear", toy::circles(), cfg(KernelKind::Linear, 0, 1), false},
  };
  Outcome out;
  double worst_kkt = 0, worst_sum = 0, acc_rbf = 0, acc_lin = 0;
  for (auto& c : cases) {
    TrainDiagnostics diag;
    const auto m = fit(c.data, c.cfg, &diag);
    const auto scaled = apply_scaler(m.scaler, c.data);
    const auto k = toy::kkt(diag.alpha, scaled, m.kernel, m.bias, c.cfg.c);
    const double acc = toy::training_accuracy(m, c.data);
    worst_kkt = std::max(worst_kkt, k.worst_violation);
    worst_sum = std::max(worst_sum, std::abs(k.sum_alpha_y));
    if (k.worst_violation > c.cfg.tol || k.min_alpha < 0 || k.max_alpha > c.cfg.c || std::abs(k.sum_alpha_y) > 1e-6) {
      out.ok = false;
    }
    if (c.need_perfect && acc != 1.0) out.ok = false;
    if (std::string(c.name) == "circles-rbf") acc_rbf = acc;
    if (std::string(c.name) == "circles-linear") acc_lin = acc;
  }
  if (acc_rbf < acc_lin) out.ok = false;
  out.detail = "max KKT violation " + fmt("%.2e", worst_kkt) + ", max |sum alpha y| " + fmt("%.2e", worst_sum) +
               ", circles rbf " + fmt("%.3f", acc_rbf) + " vs linear " + fmt("%.3f", acc_lin);
  return out;
}

WorkloadSpec history_spec() {
  WorkloadSpec s;
  s.name = "history";
  s.apps = {app_template("Grep", 8, 1.0), app_template("WordCount", 8, 1.0), app_template("Sort", 8, 1.0),
            app_template("Join", 8, 1.0)};
  return s;
}

Outcome pipeline_accuracy() {
  HistoryOptions opts;
  opts.jobs_per_app = 100;
  const auto rows = label_history(synthesize_history(history_spec(), 17, opts));
  auto data = eliminate_outliers(history_dataset(rows)).data;
  const auto [train_set, test_set] = split_dataset(data, 0.75, 17);
  TrainConfig cfg;
  const auto m = fit(train_set, cfg);
  const auto rep = evaluate(m, test_set);
  Outcome out;
  out.ok = rows.size() >= 2000 && rep.accuracy >= 0.75;
  out.detail = std::to_string(rows.size()) + " labeled rows, held-out accuracy " + fmt("%.4f", rep.accuracy) +
               " (reference figure on the original data: 0.83, not asserted)";
  return out;
}

Outcome metric_identities() {
  Outcome out;
  const Classifier oracle = OracleClassifier{};
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto spec = corpus_spec(seed);
    const auto t = attach_oracle_labels(generate_trace(spec, seed));
    const ClusterConfig cfg{spec.n_datanodes, 4, spec.replication, spec.block_size_mb};
    std::vector<RunRecord> runs;
    for (const auto& p : default_scenarios()) {
      auto r = run_simulation(t, cfg, p, &oracle);
      if (byte_hit_ratio(r) != hit_ratio(r)) out.ok = false;
      const double rt = model_runtime(r, CostModel{});
      runs.push_back({std::move(r), rt});
      ++checked;
    }
    const auto rep = make_report(runs);
    const auto* n = rep.find("nocache", t.meta.workload_name, 4, spec.block_size_mb);
    if (!n || !n->normalized_runtime || *n->normalized_runtime != 1.0) out.ok = false;
  }
  for (double x : {0.1, 0.25, 0.5, 0.9, 1.0}) {
    if (improvement_ratio(x, x) != 0.0) out.ok = false;
  }
  out.detail = std::to_string(checked) + " uniform-size runs; nocache normalization and IR(x,x) checked";
  return out;
}

Outcome hit_ratio_trends() {
  const auto t0 = Clock::now();
  Outcome out;
  const Classifier oracle = OracleClassifier{};
  double ir_first = 0, ir_last = 0;
  std::string detail;
  for (int mb : {64, 128}) {
    const auto spec = benchmark_spec(mb);
    const auto t = attach_oracle_labels(generate_trace(spec, 42));
    const ClusterConfig cfg{spec.n_datanodes, 6, spec.replication, mb};
    const auto sizes = default_sweep_sizes(mb);
    const auto rep = sweep_cache_sizes(t, cfg, sizes, default_scenarios(), &oracle, default_cost_model(mb));
    double prev = -1;
    for (auto s : sizes) {
      const auto* l = rep.find("lru", t.meta.workload_name, s, mb);
      const auto* h = rep.find("hsvmlru", t.meta.workload_name, s, mb);
      if (!l || !h) {
        out.ok = false;
        continue;
      }
      if (l->hit_ratio < prev) out.ok = false;
      prev = l->hit_ratio;
      if (h->hit_ratio < l->hit_ratio) out.ok = false;
    }
    if (mb == 64) {
      const auto* f = rep.find("hsvmlru", t.meta.workload_name, sizes.front(), mb);
      const auto* b = rep.find("hsvmlru", t.meta.workload_name, sizes.back(), mb);
      if (!f || !b || !f->ir_vs_lru_pct || !b->ir_vs_lru_pct) {
        out.ok = false;
      } else {
        ir_first = *f->ir_vs_lru_pct;
        ir_last = *b->ir_vs_lru_pct;
        if (!(ir_first > ir_last)) out.ok = false;
      }
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 30.0) out.ok = false;
  out.detail = "64 MB IR " + fmt("%.2f%%", ir_first) + " at size 6 vs " + fmt("%.2f%%", ir_last) +
               " at size 24 (reference trend 63.63% -> 7.89%), " + fmt("%.2f s", dt);
  return out;
}

Outcome suite_direction() {
  const auto t0 = Clock::now();
  const auto res = run_workload_suite(table8_workloads(), ClusterConfig{}, default_cost_model(64),
                                      trained_model_source(TrainConfig{}), 7);
  const double n = mean_normalized_runtime(res.report, "nocache");
  const double l = mean_normalized_runtime(res.report, "lru");
  const double h = mean_normalized_runtime(res.report, "hsvmlru");
  const double dt = seconds_since(t0);
  Outcome out;
  out.ok = n == 1.0 && n > l && l > h && dt < 60.0;
  out.detail = "mean normalized runtime nocache " + fmt("%.4f", n) + " > lru " + fmt("%.4f", l) + " > hsvmlru " +
               fmt("%.4f", h) + "; improvement vs nocache " + fmt("%.2f%%", 100 * (1 - h)) + ", vs lru " +
               fmt("%.2f%%", 100 * (l - h) / l) + " (real-cluster reference 16.16% / 4.83%), " + fmt("%.2f s", dt);
  return out;
}

template <typename W, typename P>
bool stable(const std::string& text, W write, P parse) {
  std::istringstream in(text);
  auto v = parse(in);
  std::ostringstream os;
  write(v, os);
  return os.str() == text;
}

Outcome round_trip_and_determinism() {
  Outcome out;
  std::vector<std::string> failed;
  // Trace and catalog.
  WorkloadSpec spec = table8_workloads(64, 24)[0];
  const auto t = attach_oracle_labels(generate_trace(spec, 5));
  std::ostringstream ts, bs;
  write_trace(t, ts);
  write_blocks(t.catalog, bs);
  if (!stable(bs.str(), [](const BlockCatalog& c, std::ostream& o) { write_blocks(c, o); },
              [](std::istream& i) { return parse_blocks(i); })) {
    failed.push_back("blocks");
  }
  if (!stable(ts.str(), [](const Trace& x, std::ostream& o) { write_trace(x, o); },
              [&](std::istream& i) { return parse_trace(i, t.catalog); })) {
    failed.push_back("trace");
  }
  // Model.
  HistoryOptions opts;
  opts.jobs_per_app = 10;
  const auto hist = synthesize_history(history_spec(), 3, opts);
  const auto model = fit(history_dataset(label_history(hist)), TrainConfig{});
  std::ostringstream ms;
  write_model(model, ms);
  if (!stable(ms.str(), [](const SvmModel& m, std::ostream& o) { write_model(m, o); },
              [](std::istream& i) { return parse_model(i); })) {
    failed.push_back("model");
  }
  // Report.
  const Classifier oracle = OracleClassifier{};
  const auto rep = sweep_cache_sizes(t, ClusterConfig{}, {2, 4, 6}, default_scenarios(), &oracle, CostModel{});
  std::ostringstream rs;
  write_report_csv(rep, rs);
  if (!stable(rs.str(), [](const Report& r, std::ostream& o) { write_report_csv(r, o); },
              [](std::istream& i) { return parse_report_csv(i); })) {
    failed.push_back("report");
  }
  // Determinism of each seeded stage.
  if (!(generate_trace(spec, 5) == generate_trace(spec, 5))) failed.push_back("gen-trace determinism");
  if (!(synthesize_history(history_spec(), 3, opts) == synthesize_history(history_spec(), 3, opts))) {
    failed.push_back("gen-history determinism");
  }
  std::ostringstream ms2;
  write_model(fit(history_dataset(label_history(hist)), TrainConfig{}), ms2);
  if (ms2.str() != ms.str()) failed.push_back("train determinism");
  std::ostringstream rs2;
  write_report_csv(sweep_cache_sizes(t, ClusterConfig{}, {2, 4, 6}, default_scenarios(), &oracle, CostModel{}), rs2);
  if (rs2.str() != rs.str()) failed.push_back("sweep determinism");
  auto small = table8_workloads(64, 24);
  small.resize(2);
  auto suite_csv = [&] {
    std::ostringstream o;
    write_report_csv(run_workload_suite(small, ClusterConfig{}, CostModel{}, trained_model_source(TrainConfig{}), 1)
                         .report,
                     o);
    return o.str();
  };
  if (suite_csv() != suite_csv()) failed.push_back("suite determinism");
  out.ok = failed.empty();
  out.detail = out.ok ? "blocks, trace, model and report stable; seeded stages repeat exactly"
                      : "failed: " + [&] {
                          std::string s;
                          for (const auto& f : failed) s += f + " ";
                          return s;
                        }();
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << n << " " << name << ": " << o.detail << std::endl;
    failures += o.ok ? 0 : 1;
  };
  auto guarded = [&](int n, const char* name, const std::function<Outcome()>& fn) {
    try {
      report(n, name, fn());
    } catch (const std::exception& e) {
      report(n, name, Outcome{false, std::string("exception: ") + e.what()});
    }
  };
  guarded(1, "fig2-golden-replay", fig2_replay);
  Outcome dominance{false, "not run"};
  guarded(2, "lru-equivalence", [&] { return lru_equivalence_and_dominance(&dominance); });
  report(3, "oracle-dominance", dominance);
  guarded(4, "classifier-metrics-oracle", metrics_oracle);
  guarded(5, "smo-validity", smo_validity);
  guarded(6, "pipeline-accuracy-gate", pipeline_accuracy);
  guarded(7, "metric-identities", metric_identities);
  guarded(8, "hit-ratio-trends", hit_ratio_trends);
  guarded(9, "workload-suite-direction", suite_direction);
  guarded(10, "round-trip-and-determinism", round_trip_and_determinism);
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << (10 - failures) << "/10" << std::endl;
  return failures;
}

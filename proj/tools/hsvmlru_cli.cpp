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

// hsvmlru command-line front end.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "hsvmlru/classifier.hpp"
#include "hsvmlru/cluster.hpp"
#include "hsvmlru/csv.hpp"
#include "hsvmlru/error.hpp"
#include "hsvmlru/experiments.hpp"
#include "hsvmlru/features.hpp"
#include "hsvmlru/labeling.hpp"
#include "hsvmlru/model_io.hpp"
#include "hsvmlru/report_io.hpp"
#include "hsvmlru/svm.hpp"
#include "hsvmlru/trace_io.hpp"

namespace fs = std::filesystem;
using namespace hsvmlru;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kInvariant = 4;

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot read " + p.string());
  return in;
}

// Accepts either a labeled history CSV or a feature dataset CSV.
Dataset load_any_dataset(const fs::path& p) {
  auto in = open_in(p);
  std::string header;
  std::getline(in, header);
  in.clear();
  in.seekg(0);
  if (header == labeled_csv_header()) return history_dataset(parse_labeled_csv(in));
  return parse_dataset_csv(in);
}

WorkloadSpec single_spec(const fs::path& p) {
  auto specs = load_workload_specs(p);
  if (specs.size() != 1) throw std::invalid_argument(p.string() + ": expected exactly one workload spec");
  return specs.front();
}

HitDemotion parse_demotion(const std::string& s) {
  if (s == "end-of-unused") return HitDemotion::EndOfUnused;
  if (s == "top") return HitDemotion::Top;
  throw std::invalid_argument("unknown demotion '" + s + "'");
}

KernelSpec kernel_for(const std::string& kind, double gamma, int degree, double coef0) {
  KernelSpec k;
  if (kind == "linear") {
    k.kind = KernelKind::Linear;
  } else if (kind == "poly") {
    k.kind = KernelKind::Polynomial;
  } else if (kind == "rbf") {
    k.kind = KernelKind::Rbf;
  } else if (kind == "sigmoid") {
    k.kind = KernelKind::Sigmoid;
  } else {
    throw std::invalid_argument("unknown kernel '" + kind + "'");
  }
  k.gamma = gamma;
  k.degree = degree;
  k.coef0 = coef0;
  return k;
}

std::vector<PolicyConfig> scenarios_for(const std::string& demotion) {
  auto s = default_scenarios();
  for (auto& p : s) p.demotion = parse_demotion(demotion);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-SVM-LRU cache simulation toolkit"};
  app.require_subcommand(1);

  // gen-trace
  std::string spec_file, out_path;
  std::uint64_t seed = 0;
  bool with_labels = false;
  auto* gen_trace = app.add_subcommand("gen-trace", "Generate a block request trace");
  gen_trace->add_option("--spec", spec_file, "Workload spec JSON")->required();
  gen_trace->add_option("--seed", seed, "Seed");
  gen_trace->add_option("--out", out_path, "Output directory")->required();
  gen_trace->add_flag("--labels", with_labels, "Attach future-reuse labels");

  // gen-history
  std::size_t jobs_per_app = HistoryOptions{}.jobs_per_app;
  auto* gen_history = app.add_subcommand("gen-history", "Synthesize a job history log");
  gen_history->add_option("--spec", spec_file, "Workload spec JSON")->required();
  gen_history->add_option("--seed", seed, "Seed");
  gen_history->add_option("--jobs-per-app", jobs_per_app, "Jobs per application");
  gen_history->add_option("--out", out_path, "Output directory")->required();

  // label
  std::string history_file;
  auto* label = app.add_subcommand("label", "Label a job history with the guideline table");
  label->add_option("--history", history_file, "History JSON")->required();
  label->add_option("--out", out_path, "Labeled CSV")->required();

  // dataset
  std::string trace_file, blocks_file;
  auto* dataset = app.add_subcommand("dataset", "Extract online features from a trace");
  dataset->add_option("--trace", trace_file, "trace.jsonl")->required();
  dataset->add_option("--blocks", blocks_file, "blocks.jsonl")->required();
  dataset->add_option("--out", out_path, "Dataset CSV")->required();

  // train
  std::string data_file, kernel_kind = "rbf", test_out;
  double c = 1.0, gamma = 0.0, coef0 = 0.0, train_fraction = 0.75, tol = 1e-3;
  int degree = 3;
  bool no_outliers = false;
  auto* train_cmd = app.add_subcommand("train", "Train an SVM classifier");
  train_cmd->add_option("--data", data_file, "Labeled CSV or dataset CSV")->required();
  train_cmd->add_option("--kernel", kernel_kind, "linear|poly|rbf|sigmoid|auto");
  train_cmd->add_option("--c", c, "Soft-margin C");
  train_cmd->add_option("--gamma", gamma, "Kernel gamma (0 = 1/(d*var))");
  train_cmd->add_option("--degree", degree, "Polynomial degree");
  train_cmd->add_option("--coef0", coef0, "Polynomial/sigmoid offset");
  train_cmd->add_option("--tol", tol, "SMO tolerance");
  train_cmd->add_option("--train-fraction", train_fraction, "Training split fraction");
  train_cmd->add_flag("--keep-outliers", no_outliers, "Skip outlier elimination");
  train_cmd->add_option("--seed", seed, "Seed");
  train_cmd->add_option("--out", out_path, "Model JSON")->required();
  train_cmd->add_option("--test-out", test_out, "Write the held-out split here");

  // eval
  std::string model_file;
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval->add_option("--model", model_file, "Model JSON")->required();
  eval->add_option("--data", data_file, "Labeled CSV or dataset CSV")->required();

  // simulate
  std::string cluster_file, policy_name = "hsvmlru", classifier_spec = "oracle", cost_spec, demotion = "end-of-unused";
  auto* simulate = app.add_subcommand("simulate", "Replay a trace through one cache policy");
  simulate->add_option("--trace", trace_file, "trace.jsonl")->required();
  simulate->add_option("--blocks", blocks_file, "blocks.jsonl")->required();
  simulate->add_option("--cluster", cluster_file, "cluster.json")->required();
  simulate->add_option("--policy", policy_name, "nocache|lru|hsvmlru");
  simulate->add_option("--classifier", classifier_spec, "model:PATH|oracle|const:0|const:1");
  simulate->add_option("--cost", cost_spec, "tc,td,tcpu in ms");
  simulate->add_option("--demotion", demotion, "end-of-unused|top");
  simulate->add_option("--out", out_path, "Result JSON")->required();

  // sweep
  std::string sizes_spec;
  int bench_mb = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep cache sizes over nocache, lru and hsvmlru");
  sweep->add_option("--trace", trace_file, "trace.jsonl");
  sweep->add_option("--blocks", blocks_file, "blocks.jsonl");
  sweep->add_option("--bench-mb", bench_mb, "Use the built-in benchmark trace (64 or 128)");
  sweep->add_option("--seed", seed, "Seed for the benchmark trace");
  sweep->add_option("--cluster", cluster_file, "cluster.json");
  sweep->add_option("--sizes", sizes_spec, "lo:hi:step");
  sweep->add_option("--classifier", classifier_spec, "model:PATH|oracle|const:0|const:1");
  sweep->add_option("--cost", cost_spec, "tc,td,tcpu in ms");
  sweep->add_option("--demotion", demotion, "end-of-unused|top");
  sweep->add_option("--out", out_path, "Output directory")->required();

  // suite
  std::string workloads_file, suite_classifier = "trained";
  std::size_t blocks_per_app = 160;
  auto* suite = app.add_subcommand("suite", "Run the multi-application workload suite");
  suite->add_option("--workloads", workloads_file, "Workload specs JSON (default: built-in W1-W6)");
  suite->add_option("--blocks-per-app", blocks_per_app, "Blocks per app for the built-in workloads");
  suite->add_option("--cluster", cluster_file, "cluster.json");
  suite->add_option("--classifier", suite_classifier, "trained|oracle");
  suite->add_option("--cost", cost_spec, "tc,td,tcpu in ms");
  suite->add_option("--seed", seed, "Seed");
  suite->add_option("--demotion", demotion, "end-of-unused|top");
  suite->add_option("--out", out_path, "Output directory")->required();

  // report
  std::string in_dir;
  auto* report = app.add_subcommand("report", "Aggregate result JSON files into a report");
  report->add_option("--in", in_dir, "Directory of result JSON files")->required();
  report->add_option("--out", out_path, "Report CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_trace) {
      auto trace = generate_trace(single_spec(spec_file), seed);
      if (with_labels) trace = attach_oracle_labels(std::move(trace));
      save_trace(trace, out_path);
      std::cout << "wrote " << trace.requests.size() << " requests, " << trace.catalog.size() << " blocks to "
                << out_path << '\n';
    } else if (*gen_history) {
      HistoryOptions opts;
      opts.jobs_per_app = jobs_per_app;
      const auto h = synthesize_history(single_spec(spec_file), seed, opts);
      fs::create_directories(out_path);
      auto out = open_out(fs::path(out_path) / "history.json");
      write_history(h, out);
      std::cout << "wrote " << h.jobs.size() << " jobs, " << h.tasks.size() << " tasks\n";
    } else if (*label) {
      const auto rows = label_history(load_history(history_file));
      auto out = open_out(out_path);
      write_labeled_csv(rows, out);
      std::size_t defaulted = 0;
      for (const auto& r : rows) defaulted += r.defaulted ? 1 : 0;
      std::cout << "labeled " << rows.size() << " rows (" << defaulted << " defaulted to 0)\n";
    } else if (*dataset) {
      auto trace = load_trace(trace_file, blocks_file);
      if (!trace.labeled()) trace = attach_oracle_labels(std::move(trace));
      const auto d = online_dataset(trace);
      auto out = open_out(out_path);
      write_dataset_csv(d, out);
      std::cout << "wrote " << d.size() << " rows\n";
    } else if (*train_cmd) {
      auto data = load_any_dataset(data_file);
      if (!no_outliers) {
        auto res = eliminate_outliers(data);
        if (res.dropped) std::cout << "dropped " << res.dropped << " outlier rows\n";
        data = std::move(res.data);
      }
      auto [train_set, test_set] = split_dataset(data, train_fraction, seed);
      TrainConfig cfg;
      cfg.c = c;
      cfg.tol = tol;
      cfg.seed = seed;
      if (kernel_kind == "auto") {
        const auto sel = select_kernel(train_set, default_kernel_candidates(), cfg, seed);
        for (const auto& t : sel.trials) {
          std::cout << "kernel " << to_string(t.kernel.kind) << ": ";
          if (t.report) {
            std::cout << "accuracy " << csv::format(t.report->accuracy) << '\n';
          } else {
            std::cout << "failed (" << t.error.value_or("?") << ")\n";
          }
        }
        cfg.kernel = sel.best;
      } else {
        cfg.kernel = kernel_for(kernel_kind, gamma, degree, coef0);
      }
      TrainDiagnostics diag;
      const auto model = fit(train_set, cfg, &diag);
      save_model(model, out_path);
      if (!test_out.empty()) {
        auto out = open_out(test_out);
        write_dataset_csv(test_set, out);
      }
      std::cout << "kernel " << to_string(model.kernel.kind) << ", " << model.support_vectors.rows()
                << " support vectors, " << diag.iterations << " iterations"
                << (diag.converged ? "" : " (not converged)") << '\n';
      std::cout << format_report(evaluate(model, test_set), "held-out");
    } else if (*eval) {
      const auto model = load_model(model_file);
      const auto data = load_any_dataset(data_file);
      if (data.schema != model.schema) throw DataError("dataset schema does not match the model");
      std::cout << format_report(evaluate(model, data));
    } else if (*simulate) {
      const auto trace = load_trace(trace_file, blocks_file);
      const auto cfg = load_cluster_config(cluster_file);
      auto pid = parse_policy(policy_name);
      if (!pid) throw std::invalid_argument("unknown policy '" + policy_name + "'");
      const PolicyConfig policy{*pid, parse_demotion(demotion)};
      const auto cost = cost_spec.empty() ? default_cost_model(cfg.block_size_mb) : parse_cost_model(cost_spec);
      std::optional<Classifier> cls;
      if (policy.id == PolicyId::HsvmLru) cls = parse_classifier(classifier_spec);
      const auto res = run_simulation(trace, cfg, policy, cls ? &*cls : nullptr);
      const double rt = model_runtime(res, cost);
      auto out = open_out(out_path);
      write_result_json(res, rt, cost, out);
      std::cout << res.scenario << ": " << res.hits << " hits, " << res.misses << " misses, hit ratio "
                << csv::format(res.requests() ? hit_ratio(res) : 0.0) << ", runtime " << csv::format(rt)
                << " ms\n";
    } else if (*sweep) {
      Trace trace;
      ClusterConfig cfg;
      if (bench_mb != 0) {
        if (!trace_file.empty()) throw std::invalid_argument("--bench-mb and --trace are exclusive");
        const auto spec = benchmark_spec(bench_mb);
        trace = attach_oracle_labels(generate_trace(spec, seed));
        cfg = ClusterConfig{spec.n_datanodes, 6, spec.replication, bench_mb};
      } else {
        if (trace_file.empty() || blocks_file.empty() || cluster_file.empty()) {
          throw std::invalid_argument("sweep needs --bench-mb or --trace, --blocks and --cluster");
        }
        trace = load_trace(trace_file, blocks_file);
      }
      if (!cluster_file.empty()) cfg = load_cluster_config(cluster_file);
      const auto sizes = sizes_spec.empty() ? default_sweep_sizes(cfg.block_size_mb) : parse_size_range(sizes_spec);
      const auto cost = cost_spec.empty() ? default_cost_model(cfg.block_size_mb) : parse_cost_model(cost_spec);
      const auto cls = parse_classifier(classifier_spec);
      const auto rep = sweep_cache_sizes(trace, cfg, sizes, scenarios_for(demotion), &cls, cost);
      fs::create_directories(out_path);
      {
        auto out = open_out(fs::path(out_path) / "report.csv");
        write_report_csv(rep, out);
      }
      {
        auto out = open_out(fs::path(out_path) / "hit_ratio.dat");
        write_hit_ratio_dat(rep, trace.meta.workload_name, cfg.block_size_mb, out);
      }
      {
        auto out = open_out(fs::path(out_path) / "ir_table.csv");
        write_ir_table_csv(ir_table(rep), out);
      }
      for (const auto& row : rep.rows) {
        if (row.scenario != "hsvmlru" && row.scenario != "hsvmlru-top") continue;
        std::cout << "size " << row.cache_blocks << ": hit ratio " << csv::format(row.hit_ratio) << ", IR "
                  << (row.ir_vs_lru_pct ? csv::format(*row.ir_vs_lru_pct) + "%" : std::string("N/A")) << '\n';
      }
    } else if (*suite) {
      const auto specs = workloads_file.empty() ? table8_workloads(64, blocks_per_app) : load_workload_specs(workloads_file);
      const auto cfg = cluster_file.empty() ? ClusterConfig{} : load_cluster_config(cluster_file);
      const auto cost = cost_spec.empty() ? default_cost_model(cfg.block_size_mb) : parse_cost_model(cost_spec);
      ClassifierSource source;
      if (suite_classifier == "trained") {
        source = trained_model_source(TrainConfig{});
      } else if (suite_classifier == "oracle") {
        source = oracle_source();
      } else {
        throw std::invalid_argument("suite classifier must be trained or oracle");
      }
      const auto res = run_workload_suite(specs, cfg, cost, source, seed, scenarios_for(demotion));
      fs::create_directories(out_path);
      {
        auto out = open_out(fs::path(out_path) / "report.csv");
        write_report_csv(res.report, out);
      }
      {
        auto out = open_out(fs::path(out_path) / "apps.csv");
        write_apps_csv(res.apps, out);
      }
      {
        auto out = open_out(fs::path(out_path) / "runtime.dat");
        write_runtime_dat(res.report, out);
      }
      for (const auto& p : scenarios_for(demotion)) {
        const auto name = scenario_name(p);
        std::cout << "mean normalized runtime " << name << ": "
                  << csv::format(mean_normalized_runtime(res.report, name)) << '\n';
      }
    } else if (*report) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(in_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      }
      if (files.empty()) throw DataError("no result JSON files in " + in_dir);
      std::sort(files.begin(), files.end());
      std::vector<RunRecord> runs;
      for (const auto& f : files) {
        auto in = open_in(f);
        runs.push_back(parse_result_json(in));
      }
      const auto rep = make_report(runs);
      auto out = open_out(out_path);
      write_report_csv(rep, out);
      const auto dat_dir = fs::path(out_path).parent_path();
      std::set<std::pair<std::string, int>> series;
      for (const auto& r : rep.rows) series.emplace(r.workload, r.block_mb);
      for (const auto& [w, mb] : series) {
        auto dat = open_out(dat_dir / ("hit_ratio_" + w + "_" + std::to_string(mb) + "mb.dat"));
        write_hit_ratio_dat(rep, w, mb, dat);
      }
      std::cout << "aggregated " << runs.size() << " results into " << rep.rows.size() << " rows\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return kOk;
}

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

#include "doctest.h"

#include <sstream>

#include "hsvmlru/error.hpp"
#include "hsvmlru/report_io.hpp"

using namespace hsvmlru;

namespace {

Report sample_report() {
  const auto spec = benchmark_spec(128);
  const auto t = attach_oracle_labels(generate_trace(spec, 1));
  const Classifier oracle = OracleClassifier{};
  return sweep_cache_sizes(t, ClusterConfig{spec.n_datanodes, 6, spec.replication, 128}, {6, 10},
                           default_scenarios(), &oracle, default_cost_model(128));
}

}  // namespace

TEST_CASE("report csv header") {
  CHECK(report_csv_header() ==
        "scenario,workload,cache_blocks,block_mb,requests,hits,misses,hit_ratio,byte_hit_ratio,ir_vs_lru_pct,"
        "runtime_ms,normalized_runtime");
}

TEST_CASE("report csv round trip") {
  const auto rep = sample_report();
  std::ostringstream a;
  write_report_csv(rep, a);
  std::istringstream in(a.str());
  const auto back = parse_report_csv(in);
  CHECK(back == rep);
  std::ostringstream b;
  write_report_csv(back, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("missing values are N/A") {
  ReportRow r;
  r.scenario = "lru";
  r.workload = "w";
  r.requests = 1;
  r.misses = 1;
  std::ostringstream a;
  write_report_csv(Report{{r}}, a);
  CHECK(a.str().find(",N/A,0,N/A\n") != std::string::npos);
  std::istringstream in(a.str());
  const auto back = parse_report_csv(in);
  CHECK_FALSE(back.rows.at(0).ir_vs_lru_pct);
  CHECK_FALSE(back.rows.at(0).normalized_runtime);
}

TEST_CASE("bad report csv") {
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_report_csv(empty), DataError);
  std::istringstream header("a,b\n");
  CHECK_THROWS_AS(parse_report_csv(header), DataError);
  std::istringstream counts(report_csv_header() + "\nlru,w,6,64,10,3,3,0.3,0.3,N/A,1,N/A\n");
  CHECK_THROWS_AS(parse_report_csv(counts), DataError);
}

TEST_CASE("result json round trip") {
  const auto t = fig2_trace();
  const Classifier oracle = OracleClassifier{};
  const auto r = run_simulation(t, ClusterConfig{3, 5, 3, 64}, PolicyConfig{}, &oracle);
  const CostModel cost;
  std::ostringstream a;
  write_result_json(r, model_runtime(r, cost), cost, a);
  std::istringstream in(a.str());
  const auto back = parse_result_json(in);
  CHECK(back.result.outcomes == r.outcomes);
  CHECK(back.result.hits == 2);
  CHECK(back.runtime_ms == model_runtime(r, cost));
  std::ostringstream b;
  write_result_json(back.result, back.runtime_ms, cost, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("dat series") {
  const auto rep = sample_report();
  std::ostringstream os;
  write_hit_ratio_dat(rep, rep.rows.front().workload, 128, os);
  const auto s = os.str();
  CHECK(s.rfind("# cache_blocks hsvmlru lru nocache\n", 0) == 0);
  CHECK(s.find("\n6 ") != std::string::npos);
  CHECK(s.find("\n10 ") != std::string::npos);
  std::ostringstream rt;
  write_runtime_dat(rep, rt);
  CHECK(rt.str().rfind("# workload", 0) == 0);
}

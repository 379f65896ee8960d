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

#include "hsvmlru/cluster.hpp"
#include "hsvmlru/error.hpp"

using namespace hsvmlru;

namespace {

DataBlock block(const char* id, std::vector<const char*> replicas) {
  DataBlock b{BlockId(id), 64, DataType::MapInput, {}};
  for (const char* r : replicas) b.replicas.emplace_back(r);
  return b;
}

Request req(std::uint64_t seq, const char* b) {
  Request r;
  r.seq = seq;
  r.time_ms = seq * 10;
  r.block = BlockId(b);
  return r;
}

const PolicyConfig kLru{PolicyId::Lru, HitDemotion::EndOfUnused};

}  // namespace

TEST_CASE("build cluster") {
  WorkloadSpec s;
  s.apps = {AppSpec{"Grep", Affinity::High, 30, 1.0, std::nullopt, 1}};
  const auto t = generate_trace(s, 1);
  const ClusterConfig cfg;
  const auto st = build_cluster(cfg, t.catalog, 0);
  CHECK(st.node_caches().size() == 9);
  CHECK(st.block_metadata().size() == 30);
  for (const auto& [b, reps] : st.block_metadata()) CHECK(reps.size() == 3);
  CHECK(st.cache_metadata().empty());

  const auto empty = build_cluster(cfg, BlockCatalog{}, 0);
  CHECK(empty.block_metadata().empty());
  CHECK(empty.cache_metadata().empty());

  const auto a = build_cluster(cfg, t.catalog, 3);
  const auto b = build_cluster(cfg, t.catalog, 3);
  CHECK(a.block_metadata() == b.block_metadata());
}

TEST_CASE("catalog must fit the cluster") {
  ClusterConfig cfg{3, 4, 2, 64};
  BlockCatalog c;
  c[BlockId("x")] = block("x", {"dn-1", "dn-2", "dn-3"});
  CHECK_THROWS_AS(build_cluster(cfg, c), DataError);
  c[BlockId("x")] = block("x", {"dn-1", "dn-9"});
  CHECK_THROWS_AS(build_cluster(cfg, c), DataError);
  cfg.n_datanodes = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("resolve") {
  ClusterConfig cfg{9, 4, 3, 64};
  BlockCatalog c;
  c[BlockId("a")] = block("a", {"dn-2", "dn-5", "dn-7"});
  c[BlockId("b")] = block("b", {"dn-4", "dn-1", "dn-3"});
  auto st = build_cluster(cfg, c);
  const auto ra = st.resolve(BlockId("a"));
  CHECK(ra.home == NodeId("dn-2"));
  CHECK_FALSE(ra.cached);
  AccessStats stats;
  st.process_request(req(0, "b"), kLru, nullptr, stats);
  CHECK(st.resolve(BlockId("b")).cached == NodeId("dn-4"));
  CHECK_THROWS_AS(st.resolve(BlockId("zz")), DataError);
}

TEST_CASE("request flow") {
  ClusterConfig cfg{1, 2, 1, 64};
  BlockCatalog c;
  for (const char* id : {"a", "b", "c"}) c[BlockId(id)] = block(id, {"dn-1"});
  auto st = build_cluster(cfg, c);
  AccessStats stats;
  const auto first = st.process_request(req(0, "a"), kLru, nullptr, stats);
  CHECK_FALSE(first.hit);
  CHECK(first.node == NodeId("dn-1"));
  st.process_request(req(1, "b"), kLru, nullptr, stats);
  const auto third = st.process_request(req(2, "c"), kLru, nullptr, stats);
  CHECK(third.evicted == BlockId("a"));
  CHECK_FALSE(st.cache_metadata().count(BlockId("a")));
  CHECK(st.process_request(req(3, "c"), kLru, nullptr, stats).hit);
  st.check_coherence();
  CHECK(st.report_discrepancies() == 0);
  const PolicyConfig h{PolicyId::HsvmLru, HitDemotion::EndOfUnused};
  CHECK_THROWS_AS(st.process_request(req(4, "a"), h, nullptr, stats), std::invalid_argument);
  const PolicyConfig none{PolicyId::NoCache, HitDemotion::EndOfUnused};
  CHECK_FALSE(st.process_request(req(5, "c"), none, nullptr, stats).hit);
}

TEST_CASE("fig2 request 8 against the replayed state") {
  const auto t = fig2_trace();
  auto st = build_cluster(ClusterConfig{3, 5, 3, 64}, t.catalog);
  const Classifier oracle = OracleClassifier{};
  const PolicyConfig top{PolicyId::HsvmLru, HitDemotion::Top};
  AccessStats stats;
  for (std::size_t i = 0; i < 7; ++i) {
    st.process_request(t.requests[i], top, &oracle, stats);
    stats.record(t.requests[i]);
  }
  const auto out = st.process_request(t.requests[7], top, &oracle, stats);
  CHECK(out.hit);
  CHECK(out.class_used == Label::NotReused);
  CHECK(st.node_cache(out.node).order().front() == BlockId("DB2"));
  st.check_coherence();
}

TEST_CASE("cache reports") {
  ClusterConfig cfg{2, 3, 1, 64};
  BlockCatalog c;
  c[BlockId("a")] = block("a", {"dn-1"});
  c[BlockId("b")] = block("b", {"dn-1"});
  auto st = build_cluster(cfg, c);
  AccessStats stats;
  st.process_request(req(0, "a"), kLru, nullptr, stats);
  st.process_request(req(1, "b"), kLru, nullptr, stats);
  const auto before = st.cache_metadata();

  CHECK(st.apply_cache_report(NodeId("dn-1"), {BlockId("a"), BlockId("b")}) == 0);
  CHECK(st.cache_metadata() == before);

  CHECK(st.apply_cache_report(NodeId("dn-1"), {BlockId("a")}) == 1);
  CHECK_FALSE(st.cache_metadata().count(BlockId("b")));
  CHECK(st.report_discrepancies() == 1);
  const auto after = st.cache_metadata();
  CHECK(st.apply_cache_report(NodeId("dn-1"), {BlockId("a")}) == 0);
  CHECK(st.cache_metadata() == after);
  CHECK_THROWS_AS(st.check_coherence(), InvariantViolation);
  CHECK_THROWS_AS(st.apply_cache_report(NodeId("dn-7"), {}), std::invalid_argument);
}

TEST_CASE("cluster config json") {
  const ClusterConfig cfg{9, 12, 3, 64};
  const auto j = cluster_config_to_json(cfg);
  CHECK(j.dump() == R"({"n_datanodes":9,"cache_capacity_blocks":12,"replication":3,"block_size_mb":64})");
  CHECK(cluster_config_from_json(nlohmann::json::parse(j.dump())) == cfg);
  CHECK_THROWS(cluster_config_from_json(nlohmann::json::parse(R"({"n_datanodes":9})")));
  CHECK_THROWS(
      cluster_config_from_json(nlohmann::json::parse(R"({"n_datanodes":9,"cache_capacity_blocks":12,"replication":3,"block_size_mb":100})")));
}

TEST_CASE("policy names") {
  for (auto p : {PolicyId::NoCache, PolicyId::Lru, PolicyId::HsvmLru}) CHECK(parse_policy(to_string(p)) == p);
  CHECK_FALSE(parse_policy("fifo"));
}

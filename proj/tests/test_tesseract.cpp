/*
 * Copyright 2026 The pimsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pimsim/tesseract.hpp"

using namespace pimsim;
using namespace pimsim::tesseract;

namespace {

VaultConfig vaults(std::uint32_t n) {
  VaultConfig c;
  c.n_vaults = n;
  return c;
}

VaultSystem make_system(const Graph& g, std::uint32_t n) {
  return VaultSystem(partition_graph(g.edges, g.n_vertices, vaults(n)),
                     vaults(n), g.n_vertices);
}

// Counts edges whose endpoints fall in different ceil(V/n)-sized blocks.
std::uint64_t edge_cut(const Graph& g, std::uint32_t n) {
  const VertexId block = std::max<VertexId>(1, (g.n_vertices + n - 1) / n);
  std::uint64_t cut = 0;
  for (const auto& e : g.edges) cut += e.src / block != e.dst / block;
  return cut;
}

Graph path4() { return {4, {{0, 1}, {1, 2}, {2, 3}}}; }

}  // namespace

TEST_CASE("partition ranges") {
  auto p = partition_graph({}, 8, vaults(4));
  REQUIRE(p.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i) {
    CHECK(p[i].lo == 2 * i);
    CHECK(p[i].hi == 2 * i + 2);
    CHECK(p[i].targets.empty());
  }
  p = partition_graph({}, 7, vaults(4));
  CHECK(p[0].size() == 2);
  CHECK(p[1].size() == 2);
  CHECK(p[2].size() == 2);
  CHECK(p[3].size() == 1);
  CHECK(p[3].lo == 6);
  p = partition_graph({}, 3, vaults(8));
  VertexId covered = 0;
  for (const auto& part : p) {
    CHECK(part.lo == covered);
    covered = part.hi;
  }
  CHECK(covered == 3);
}

TEST_CASE("edges are stored with their source owner") {
  const Graph g{6, {{0, 5}, {5, 0}, {3, 4}, {3, 1}}};
  const auto p = partition_graph(g.edges, g.n_vertices, vaults(3));
  CHECK(p[0].out_edges(0).size() == 1);
  CHECK(p[2].out_edges(5)[0] == 0);
  CHECK(p[1].out_edges(3).size() == 2);
  CHECK(p[1].out_edges(2).empty());
  const std::vector<Edge> bad{{0, 1}, {2, 9}};
  try {
    partition_graph(bad, 6, vaults(3));
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("edge 1 (2 9)") != std::string::npos);
  }
}

TEST_CASE("edge list parsing") {
  std::istringstream in("# a comment\n# vertices 10\n0 1\n\n3 2 # trailing\n");
  const Graph g = read_edge_list(in);
  CHECK(g.n_vertices == 10);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[1] == Edge{3, 2});
  std::istringstream implicit("0 4\n");
  CHECK(read_edge_list(implicit).n_vertices == 5);
  std::istringstream bad("0 1\n2\n");
  try {
    read_edge_list(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream neg("0 -1\n");
  CHECK_THROWS_AS(read_edge_list(neg), InputError);
  CHECK_THROWS_AS(read_edge_list_file("/nonexistent/graph.txt"), IoError);
}

TEST_CASE("edge list round trip and seeded generator") {
  const Graph g = generate_uniform(50, 200, 7);
  CHECK(g.edges.size() == 200);
  for (const auto& e : g.edges) CHECK(e.src < 50);
  std::stringstream ss;
  write_edge_list(ss, g);
  const Graph back = read_edge_list(ss);
  CHECK(back.n_vertices == g.n_vertices);
  CHECK(back.edges == g.edges);
  CHECK(generate_uniform(50, 200, 7).edges == g.edges);
  CHECK(generate_uniform(50, 200, 8).edges != g.edges);
}

TEST_CASE("vertex value output") {
  std::ostringstream d;
  const std::vector<std::int64_t> dist{0, 1, kUnreachable};
  write_vertex_values(d, dist);
  CHECK(d.str() == "0 0\n1 1\n2 -1\n");
  std::ostringstream r;
  const std::vector<double> ranks{0.25, 0.1};
  write_vertex_values(r, ranks);
  CHECK(r.str() == "0 0.25\n1 0.1\n");
}

TEST_CASE("payload encodings round trip") {
  const auto [v, x] = decode_vertex_f64(encode_vertex_f64(12, -0.5));
  CHECK(v == 12);
  CHECK(x == -0.5);
  const auto [w, y] = decode_vertex_i64(encode_vertex_i64(3, -7));
  CHECK(w == 3);
  CHECK(y == -7);
  CHECK(encode_vertex_f64(1, 1.0).size() == 16);
}

TEST_CASE("blocking and non-blocking remote calls") {
  auto sys = make_system(path4(), 2);
  auto& parts = sys.partitions();
  parts[1].counter[1] = 41;  // vertex 3
  const HandlerId get = sys.register_handler(
      "get", [](GraphPartition& p, std::span<const std::byte> a) {
        const auto [v, unused] = decode_vertex_i64(a);
        return encode_vertex_i64(v, p.counter[p.local(v)]);
      });
  const HandlerId inc = sys.register_handler(
      "inc", [](GraphPartition& p, std::span<const std::byte> a) {
        const auto [v, by] = decode_vertex_i64(a);
        p.counter[p.local(v)] += by;
        return Payload{};
      });

  auto r = sys.remote_call(0, {1, get, encode_vertex_i64(3, 0), true});
  CHECK(r.status == CallStatus::kCompleted);
  CHECK(decode_vertex_i64(r.result).second == 41);
  // Request and reply both cross vaults.
  CHECK(sys.ledger().cross_vault_messages == 2);
  CHECK(sys.ledger().cross_vault_bytes == 2 * (16 + 16));

  CHECK(sys.remote_call(0, {1, inc, encode_vertex_i64(3, 1), false}).status ==
        CallStatus::kQueued);
  CHECK(sys.remote_call(1, {1, inc, encode_vertex_i64(3, 1), false}).status ==
        CallStatus::kQueued);
  CHECK(parts[1].counter[1] == 41);
  CHECK(sys.pending() == 2);
  sys.barrier();
  CHECK(parts[1].counter[1] == 43);
  CHECK(sys.pending() == 0);
  CHECK(sys.ledger().self_messages == 1);
  CHECK(sys.ledger().cross_vault_messages == 3);
  CHECK(sys.ledger().between(0, 1) == 2);
  CHECK(sys.handler_executions() == 3);
  sys.barrier();
  CHECK(sys.handler_executions() == 3);
}

TEST_CASE("queue overflow signals backpressure") {
  VaultConfig c = vaults(2);
  c.queue_capacity = 2;
  const Graph g = path4();
  VaultSystem sys(partition_graph(g.edges, 4, c), c, 4);
  const HandlerId nop = sys.register_handler(
      "nop", [](GraphPartition&, std::span<const std::byte>) { return Payload{}; });
  CHECK(sys.remote_call(0, {1, nop, {}, false}).status == CallStatus::kQueued);
  CHECK(sys.remote_call(0, {1, nop, {}, false}).status == CallStatus::kQueued);
  CHECK(sys.remote_call(0, {1, nop, {}, false}).status ==
        CallStatus::kBackpressure);
  CHECK(sys.ledger().cross_vault_messages == 2);
  sys.barrier();
  CHECK(sys.remote_call(0, {1, nop, {}, false}).status == CallStatus::kQueued);
}

TEST_CASE("unknown handlers and oversized payloads") {
  auto sys = make_system(path4(), 2);
  CHECK(sys.remote_call(0, {1, 99, {}, false}).status == CallStatus::kFault);
  REQUIRE(sys.faults().size() == 1);
  CHECK(sys.faults()[0].vault == 1);
  CHECK(sys.faults()[0].handler == 99);
  CHECK_THROWS_AS(sys.remote_call(0, {1, 0, Payload(65), false}), InputError);
}

TEST_CASE("handler fault during drain names vault, handler and message") {
  auto sys = make_system(path4(), 2);
  const HandlerId boom = sys.register_handler(
      "boom", [](GraphPartition&, std::span<const std::byte> a) -> Payload {
        if (!a.empty()) throw std::runtime_error("bad");
        return {};
      });
  sys.remote_call(0, {1, boom, {}, false});
  sys.remote_call(0, {1, boom, Payload(1), false});
  try {
    sys.barrier();
    FAIL("expected HandlerFault");
  } catch (const HandlerFault& e) {
    const std::string w = e.what();
    CHECK(w.find("vault 1") != std::string::npos);
    CHECK(w.find("boom") != std::string::npos);
    CHECK(w.find("message 1") != std::string::npos);
  }
}

TEST_CASE("superstep outbox order does not depend on the schedule") {
  const Graph g = generate_uniform(40, 300, 3);
  std::vector<std::vector<std::int64_t>> results;
  for (auto sched : {Schedule::kSequential, Schedule::kReverse,
                     Schedule::kParallel}) {
    auto sys = make_system(g, 4);
    std::vector<std::int64_t> order;
    const HandlerId log = sys.register_handler(
        "log", [&](GraphPartition& p, std::span<const std::byte> a) {
          const auto [v, x] = decode_vertex_i64(a);
          p.counter[p.local(v)] = p.counter[p.local(v)] * 31 + x;
          return Payload{};
        });
    sys.superstep(
        [&](GraphPartition& p, Outbox& box) {
          for (VertexId u = p.lo; u < p.hi; ++u) {
            for (VertexId v : p.out_edges(u)) {
              box.push_back({sys.owner_of(v), log,
                             encode_vertex_i64(v, static_cast<std::int64_t>(u)),
                             false});
            }
          }
        },
        sched);
    for (const auto& p : sys.partitions()) {
      order.insert(order.end(), p.counter.begin(), p.counter.end());
    }
    results.push_back(order);
  }
  CHECK(results[0] == results[1]);
  CHECK(results[0] == results[2]);
}

TEST_CASE("PageRank small graphs") {
  {
    const Graph cycle{3, {{0, 1}, {1, 2}, {2, 0}}};
    auto sys = make_system(cycle, 2);
    const auto r = run_pagerank(sys, 10, 0.85);
    for (double x : r.ranks) CHECK(x == doctest::Approx(1.0 / 3));
  }
  {
    const Graph isolated{2, {}};
    auto sys = make_system(isolated, 2);
    const auto r = run_pagerank(sys, 7, 0.85);
    CHECK(r.ranks[0] == doctest::Approx(0.5));
    CHECK(r.ranks[1] == doctest::Approx(0.5));
    CHECK(sys.ledger().cross_vault_bytes == 0);
  }
  auto sys = make_system(path4(), 1);
  CHECK_THROWS_AS(run_pagerank(sys, 1, 1.0), InputError);
  CHECK_THROWS_AS(run_pagerank(sys, 0, 0.85), InputError);
}

TEST_CASE("PageRank matches the sequential reference and conserves mass") {
  const Graph g = generate_uniform(300, 1500, 21);
  const auto want = reference_pagerank(g, 15, 0.85);
  auto sys = make_system(g, 8);
  const auto got = run_pagerank(sys, 15, 0.85, Schedule::kParallel);
  double worst = 0;
  for (std::size_t v = 0; v < want.size(); ++v) {
    worst = std::max(worst, std::abs(got.ranks[v] - want[v]));
  }
  CHECK(worst <= 1e-9);
  for (double s : got.rank_sums) CHECK(std::abs(s - 1.0) <= 1e-9);
  const std::uint64_t cut = edge_cut(g, 8);
  for (auto m : got.cross_messages) CHECK(m == cut);
  CHECK(sys.ledger().edge_traversals == 15 * g.edges.size());
}

TEST_CASE("BFS small graphs and reference") {
  {
    auto sys = make_system(path4(), 2);
    CHECK(run_bfs(sys, 0) == std::vector<std::int64_t>{0, 1, 2, 3});
  }
  {
    const Graph lone{3, {}};
    auto sys = make_system(lone, 2);
    CHECK(run_bfs(sys, 1) ==
          std::vector<std::int64_t>{kUnreachable, 0, kUnreachable});
    CHECK_THROWS_AS(run_bfs(sys, 3), InputError);
  }
  const Graph g = generate_uniform(500, 900, 5);
  auto sys = make_system(g, 16);
  CHECK(run_bfs(sys, 7, Schedule::kParallel) == reference_bfs(g, 7));
}

TEST_CASE("single vault moves no cross-vault bytes") {
  const Graph g = generate_uniform(100, 400, 2);
  auto sys = make_system(g, 1);
  run_pagerank(sys, 3, 0.85);
  run_bfs(sys, 0);
  CHECK(sys.ledger().cross_vault_bytes == 0);
  CHECK(sys.ledger().self_messages > 0);
  const auto r = movement_report(sys.ledger(), "x", {}, {});
  CHECK(r.bytes_moved_pim == 0);
  CHECK(r.bytes_moved_baseline > 0);
}

TEST_CASE("movement report arithmetic") {
  MovementLedger l;
  l.edge_traversals = 100;
  l.cross_vault_bytes = 640;
  l.self_bytes = 320;
  const cost::CostParams p;
  const auto r = movement_report(l, "pr", p, {});
  CHECK(r.bytes_moved_baseline == 1600);
  CHECK(r.bytes_moved_pim == 640);
  CHECK(r.baseline_latency_ns == doctest::Approx(1600 / 12.8));
  CHECK(r.ambit_latency_ns == doctest::Approx(960 / 128.0));
  CHECK(r.baseline_energy_nJ == doctest::Approx(1600 * 0.06));
  CHECK(r.ambit_energy_nJ == doctest::Approx(960 * 0.006));
  CHECK(r.throughput_ratio == doctest::Approx(r.baseline_latency_ns /
                                              r.ambit_latency_ns));
}

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

// Vault engine for a 3D-stacked memory: one in-order PIM core per vault,
// each owning a contiguous vertex range. Cores reach remote data only by
// sending remote function calls to the owning vault.
//
// Non-blocking calls are queued and drained at barriers. Drain order is
// ascending target vault; inside a vault, messages run in (source vault,
// per-source sequence) order. That order does not depend on how vault
// execution interleaved before the barrier.
//
// Handlers receive only the owning partition and their argument bytes, so
// a handler cannot itself issue a call. Blocking calls therefore never
// nest.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pimsim/common.hpp"
#include "pimsim/cost_model.hpp"
#include "pimsim/report_record.hpp"

namespace pimsim::tesseract {

using VertexId = std::uint64_t;
using VaultId = std::uint32_t;
using HandlerId = std::uint32_t;
using Payload = std::vector<std::byte>;

inline constexpr std::int64_t kUnreachable = -1;
/// Processor-centric traffic per edge traversal.
inline constexpr std::uint64_t kVertexRecordBytes = 8;
inline constexpr std::uint64_t kAdjacencyEntryBytes = 8;

struct VaultConfig {
  std::uint32_t n_vaults = 16;
  std::uint32_t queue_capacity = 4096;
  std::uint32_t payload_limit_bytes = 64;
  std::uint32_t header_bytes = 16;

  void validate() const;
  bool operator==(const VaultConfig&) const = default;
};

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  bool operator==(const Edge&) const = default;
};

struct Graph {
  VertexId n_vertices = 0;
  std::vector<Edge> edges;
};

/// Whitespace-separated `src dst` pairs, one per line; `#` starts a
/// comment. A `# vertices N` line fixes the vertex count, otherwise it is
/// max id + 1.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

/// One `vertex value` pair per line. Doubles use the shortest round-trip
/// form.
void write_vertex_values(std::ostream& out, std::span<const double> values);
void write_vertex_values(std::ostream& out,
                         std::span<const std::int64_t> values);

/// Uniform random directed edges (self loops and duplicates allowed).
Graph generate_uniform(VertexId n_vertices, std::uint64_t n_edges,
                       std::uint64_t seed);

struct GraphPartition {
  VaultId vault_id = 0;
  VertexId lo = 0;
  VertexId hi = 0;
  /// CSR over owned vertices; targets are global ids.
  std::vector<std::uint64_t> offsets;
  std::vector<VertexId> targets;

  std::vector<double> rank;
  std::vector<double> rank_accum;
  std::vector<std::int64_t> distance;
  std::vector<VertexId> frontier;
  std::vector<VertexId> next_frontier;
  /// Generic per-vertex counter for ad-hoc handlers.
  std::vector<std::int64_t> counter;

  bool owns(VertexId v) const { return v >= lo && v < hi; }
  std::size_t local(VertexId v) const { return static_cast<std::size_t>(v - lo); }
  std::size_t size() const { return static_cast<std::size_t>(hi - lo); }
  std::span<const VertexId> out_edges(VertexId v) const {
    const auto i = local(v);
    return {targets.data() + offsets[i], targets.data() + offsets[i + 1]};
  }
};

/// ceil(V / n_vaults) vertices per vault; the last non-empty vault takes the
/// remainder.
VertexId block_size(VertexId n_vertices, std::uint32_t n_vaults);
VaultId owner_of(VertexId v, VertexId n_vertices, std::uint32_t n_vaults);

/// Throws InputError naming the first out-of-range edge.
std::vector<GraphPartition> partition_graph(std::span<const Edge> edges,
                                            VertexId n_vertices,
                                            const VaultConfig& cfg);

/// Fixed little-endian (vertex, value) argument encodings.
Payload encode_vertex_f64(VertexId v, double x);
Payload encode_vertex_i64(VertexId v, std::int64_t x);
std::pair<VertexId, double> decode_vertex_f64(std::span<const std::byte> p);
std::pair<VertexId, std::int64_t> decode_vertex_i64(
    std::span<const std::byte> p);

using Handler =
    std::function<Payload(GraphPartition&, std::span<const std::byte>)>;

struct VaultMessage {
  VaultId target_vault = 0;
  HandlerId handler = 0;
  Payload args;
  bool blocking = false;
};

enum class CallStatus { kCompleted, kQueued, kBackpressure, kFault };

struct CallResult {
  CallStatus status = CallStatus::kQueued;
  Payload result;
};

struct MovementLedger {
  std::uint32_t n_vaults = 0;
  /// Row-major [src][dst] message counts, self-sends on the diagonal.
  std::vector<std::uint64_t> messages;
  std::uint64_t cross_vault_messages = 0;
  std::uint64_t cross_vault_bytes = 0;
  std::uint64_t self_messages = 0;
  std::uint64_t self_bytes = 0;
  std::uint64_t edge_traversals = 0;

  std::uint64_t between(VaultId src, VaultId dst) const {
    return messages[static_cast<std::size_t>(src) * n_vaults + dst];
  }
  std::uint64_t message_bytes() const { return cross_vault_bytes + self_bytes; }
  std::uint64_t baseline_bytes() const {
    return edge_traversals * (kVertexRecordBytes + kAdjacencyEntryBytes);
  }
};

struct Fault {
  VaultId vault = 0;
  HandlerId handler = 0;
  std::string what;
};

/// How vault compute phases are scheduled between barriers. kSequential is
/// the reference; the others must produce identical state.
enum class Schedule { kSequential, kReverse, kParallel };

using Outbox = std::vector<VaultMessage>;
using ComputeFn = std::function<void(GraphPartition&, Outbox&)>;

class VaultSystem {
 public:
  VaultSystem(std::vector<GraphPartition> partitions, VaultConfig cfg,
              VertexId n_vertices);

  HandlerId register_handler(std::string name, Handler fn);
  const std::string& handler_name(HandlerId id) const;

  /// Blocking calls run the handler before returning. Non-blocking calls
  /// are queued, or refused with kBackpressure when the target queue is
  /// full. Unknown handlers are recorded as a fault on the target vault.
  CallResult remote_call(VaultId src, VaultMessage msg);

  /// Drains every queue. A throwing handler aborts with HandlerFault naming
  /// the vault, handler and message index.
  void barrier();

  /// Runs `compute` on every vault under `schedule`, delivers the outboxes
  /// in ascending source order (draining early on backpressure) and ends
  /// with a barrier. Returns the number of messages delivered.
  std::uint64_t superstep(const ComputeFn& compute, Schedule schedule);

  /// Applies `fn` to every partition under `schedule`.
  void for_each_vault(const std::function<void(GraphPartition&)>& fn,
                      Schedule schedule);

  VaultId owner_of(VertexId v) const;
  VertexId n_vertices() const { return n_vertices_; }
  const VaultConfig& config() const { return cfg_; }
  std::vector<GraphPartition>& partitions() { return parts_; }
  const std::vector<GraphPartition>& partitions() const { return parts_; }
  MovementLedger& ledger() { return ledger_; }
  const MovementLedger& ledger() const { return ledger_; }
  const std::vector<Fault>& faults() const { return faults_; }
  std::size_t pending() const;
  std::uint64_t handler_executions() const { return executions_; }

 private:
  struct Queued {
    VaultId src;
    std::uint64_t seq;
    VaultMessage msg;
  };

  void account(VaultId src, VaultId dst, std::size_t payload_bytes);
  void drain_vault(VaultId v);

  VaultConfig cfg_;
  VertexId n_vertices_;
  std::vector<GraphPartition> parts_;
  std::vector<std::string> handler_names_;
  std::vector<Handler> handlers_;
  std::vector<std::vector<Queued>> queues_;
  std::vector<std::uint64_t> next_seq_;
  MovementLedger ledger_;
  std::vector<Fault> faults_;
  std::uint64_t executions_ = 0;
  bool parallel_drain_ = false;
};

struct PageRankResult {
  std::vector<double> ranks;
  /// Sum of ranks after each iteration.
  std::vector<double> rank_sums;
  /// Cross-vault messages sent in each iteration.
  std::vector<std::uint64_t> cross_messages;
};

/// Push-style PageRank. Dangling vertices spread their rank uniformly.
PageRankResult run_pagerank(VaultSystem& sys, std::uint32_t iterations,
                            double damping,
                            Schedule schedule = Schedule::kSequential);

/// Level-synchronous BFS; unreachable vertices get kUnreachable.
std::vector<std::int64_t> run_bfs(VaultSystem& sys, VertexId source,
                                  Schedule schedule = Schedule::kSequential);

/// Sequential references used by the harness' correctness gate.
std::vector<double> reference_pagerank(const Graph& g, std::uint32_t iterations,
                                       double damping);
std::vector<std::int64_t> reference_bfs(const Graph& g, VertexId source);

/// Vault traffic vs. a processor-centric run that moves one vertex record
/// and one adjacency entry over the channel per edge traversal. Vault side:
/// all message bytes at logic-layer bandwidth and energy.
ReportRecord movement_report(const MovementLedger& ledger,
                             const std::string& workload_id,
                             const cost::CostParams& p,
                             const cost::BaselineModel& m);

}  // namespace pimsim::tesseract

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

#include "pimsim/tesseract.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <deque>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pimsim::tesseract {

void VaultConfig::validate() const {
  if (n_vaults < 1) throw ConfigError("vaults: n_vaults must be >= 1");
  if (queue_capacity < 1) throw ConfigError("vaults: queue_capacity must be >= 1");
  if (payload_limit_bytes < 8) {
    throw ConfigError("vaults: payload_limit_bytes must be >= 8");
  }
}

Graph read_edge_list(std::istream& in) {
  Graph g;
  std::optional<VertexId> declared;
  VertexId max_id = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream comment(line.substr(hash + 1));
      std::string word;
      VertexId n = 0;
      if (comment >> word && word == "vertices" && comment >> n) declared = n;
      line.resize(hash);
    }
    std::istringstream fields(line);
    std::string a;
    std::string b;
    if (!(fields >> a)) continue;
    std::string extra;
    if (!(fields >> b) || (fields >> extra)) {
      throw InputError("edge list line " + std::to_string(lineno) +
                       ": expected `src dst`");
    }
    Edge e;
    try {
      std::size_t pa = 0;
      std::size_t pb = 0;
      if (a.front() == '-' || b.front() == '-') throw std::invalid_argument("");
      e.src = std::stoull(a, &pa);
      e.dst = std::stoull(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw InputError("edge list line " + std::to_string(lineno) +
                       ": bad vertex id");
    }
    max_id = std::max({max_id, e.src, e.dst});
    any = true;
    g.edges.push_back(e);
  }
  g.n_vertices = declared ? *declared : (any ? max_id + 1 : 0);
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# vertices " << g.n_vertices << '\n';
  for (const auto& e : g.edges) out << e.src << ' ' << e.dst << '\n';
}

void write_vertex_values(std::ostream& out, std::span<const double> values) {
  char buf[32];
  for (std::size_t v = 0; v < values.size(); ++v) {
    const auto r = std::to_chars(buf, buf + sizeof buf, values[v]);
    out << v << ' ' << std::string_view(buf, r.ptr - buf) << '\n';
  }
}

void write_vertex_values(std::ostream& out,
                         std::span<const std::int64_t> values) {
  for (std::size_t v = 0; v < values.size(); ++v) {
    out << v << ' ' << values[v] << '\n';
  }
}

Graph generate_uniform(VertexId n_vertices, std::uint64_t n_edges,
                       std::uint64_t seed) {
  if (n_vertices == 0 && n_edges > 0) {
    throw InputError("generate_uniform: edges need at least one vertex");
  }
  Graph g;
  g.n_vertices = n_vertices;
  g.edges.reserve(n_edges);
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < n_edges; ++i) {
    const VertexId s = rng.below(n_vertices);
    const VertexId d = rng.below(n_vertices);
    g.edges.push_back({s, d});
  }
  return g;
}

VertexId block_size(VertexId n_vertices, std::uint32_t n_vaults) {
  const VertexId b = (n_vertices + n_vaults - 1) / n_vaults;
  return std::max<VertexId>(b, 1);
}

VaultId owner_of(VertexId v, VertexId n_vertices, std::uint32_t n_vaults) {
  return static_cast<VaultId>(v / block_size(n_vertices, n_vaults));
}

std::vector<GraphPartition> partition_graph(std::span<const Edge> edges,
                                            VertexId n_vertices,
                                            const VaultConfig& cfg) {
  cfg.validate();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].src >= n_vertices || edges[i].dst >= n_vertices) {
      throw InputError("edge " + std::to_string(i) + " (" +
                       std::to_string(edges[i].src) + " " +
                       std::to_string(edges[i].dst) +
                       ") references a vertex outside [0, " +
                       std::to_string(n_vertices) + ")");
    }
  }
  const VertexId block = block_size(n_vertices, cfg.n_vaults);
  std::vector<GraphPartition> parts(cfg.n_vaults);
  for (VaultId k = 0; k < cfg.n_vaults; ++k) {
    auto& p = parts[k];
    p.vault_id = k;
    p.lo = std::min<VertexId>(static_cast<VertexId>(k) * block, n_vertices);
    p.hi = std::min<VertexId>(static_cast<VertexId>(k + 1) * block, n_vertices);
    p.offsets.assign(p.size() + 1, 0);
    p.rank.assign(p.size(), 0.0);
    p.rank_accum.assign(p.size(), 0.0);
    p.distance.assign(p.size(), kUnreachable);
    p.counter.assign(p.size(), 0);
  }
  for (const auto& e : edges) {
    auto& p = parts[owner_of(e.src, n_vertices, cfg.n_vaults)];
    ++p.offsets[p.local(e.src) + 1];
  }
  std::vector<std::vector<std::uint64_t>> cursor(cfg.n_vaults);
  for (auto& p : parts) {
    for (std::size_t i = 1; i < p.offsets.size(); ++i) {
      p.offsets[i] += p.offsets[i - 1];
    }
    p.targets.resize(p.offsets.back());
    cursor[p.vault_id].assign(p.offsets.begin(), p.offsets.end() - 1);
  }
  for (const auto& e : edges) {
    const VaultId k = owner_of(e.src, n_vertices, cfg.n_vaults);
    auto& p = parts[k];
    p.targets[cursor[k][p.local(e.src)]++] = e.dst;
  }
  return parts;
}

namespace {

template <typename T>
Payload encode_pair(VertexId v, T x) {
  static_assert(std::endian::native == std::endian::little);
  Payload p(16);
  std::memcpy(p.data(), &v, 8);
  std::memcpy(p.data() + 8, &x, 8);
  return p;
}

template <typename T>
std::pair<VertexId, T> decode_pair(std::span<const std::byte> p) {
  if (p.size() != 16) throw HandlerFault("malformed argument payload");
  VertexId v = 0;
  T x{};
  std::memcpy(&v, p.data(), 8);
  std::memcpy(&x, p.data() + 8, 8);
  return {v, x};
}

}  // namespace

Payload encode_vertex_f64(VertexId v, double x) { return encode_pair(v, x); }
Payload encode_vertex_i64(VertexId v, std::int64_t x) {
  return encode_pair(v, x);
}
std::pair<VertexId, double> decode_vertex_f64(std::span<const std::byte> p) {
  return decode_pair<double>(p);
}
std::pair<VertexId, std::int64_t> decode_vertex_i64(
    std::span<const std::byte> p) {
  return decode_pair<std::int64_t>(p);
}

VaultSystem::VaultSystem(std::vector<GraphPartition> partitions,
                         VaultConfig cfg, VertexId n_vertices)
    : cfg_(cfg), n_vertices_(n_vertices), parts_(std::move(partitions)) {
  cfg_.validate();
  if (parts_.size() != cfg_.n_vaults) {
    throw ConfigError("vault system: expected " +
                      std::to_string(cfg_.n_vaults) + " partitions");
  }
  queues_.resize(cfg_.n_vaults);
  next_seq_.assign(cfg_.n_vaults, 0);
  ledger_.n_vaults = cfg_.n_vaults;
  ledger_.messages.assign(
      static_cast<std::size_t>(cfg_.n_vaults) * cfg_.n_vaults, 0);
}

HandlerId VaultSystem::register_handler(std::string name, Handler fn) {
  handler_names_.push_back(std::move(name));
  handlers_.push_back(std::move(fn));
  return static_cast<HandlerId>(handlers_.size() - 1);
}

const std::string& VaultSystem::handler_name(HandlerId id) const {
  static const std::string unknown = "<unknown>";
  return id < handler_names_.size() ? handler_names_[id] : unknown;
}

VaultId VaultSystem::owner_of(VertexId v) const {
  return tesseract::owner_of(v, n_vertices_, cfg_.n_vaults);
}

std::size_t VaultSystem::pending() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

void VaultSystem::account(VaultId src, VaultId dst, std::size_t payload_bytes) {
  ++ledger_.messages[static_cast<std::size_t>(src) * cfg_.n_vaults + dst];
  const std::uint64_t bytes = payload_bytes + cfg_.header_bytes;
  if (src == dst) {
    ++ledger_.self_messages;
    ledger_.self_bytes += bytes;
  } else {
    ++ledger_.cross_vault_messages;
    ledger_.cross_vault_bytes += bytes;
  }
}

CallResult VaultSystem::remote_call(VaultId src, VaultMessage msg) {
  if (src >= cfg_.n_vaults || msg.target_vault >= cfg_.n_vaults) {
    throw InputError("remote_call: vault id out of range");
  }
  if (msg.args.size() > cfg_.payload_limit_bytes) {
    throw InputError("remote_call: payload of " +
                     std::to_string(msg.args.size()) + " bytes exceeds limit " +
                     std::to_string(cfg_.payload_limit_bytes));
  }
  const VaultId dst = msg.target_vault;
  if (msg.handler >= handlers_.size()) {
    faults_.push_back({dst, msg.handler, "unknown handler"});
    return {CallStatus::kFault, {}};
  }
  if (msg.blocking) {
    account(src, dst, msg.args.size());
    Payload result;
    try {
      result = handlers_[msg.handler](parts_[dst], msg.args);
    } catch (const std::exception& e) {
      throw HandlerFault("vault " + std::to_string(dst) + " handler " +
                         handler_name(msg.handler) + " (blocking): " +
                         e.what());
    }
    ++executions_;
    if (src != dst) account(dst, src, result.size());
    return {CallStatus::kCompleted, std::move(result)};
  }
  if (queues_[dst].size() >= cfg_.queue_capacity) {
    return {CallStatus::kBackpressure, {}};
  }
  account(src, dst, msg.args.size());
  queues_[dst].push_back({src, next_seq_[src]++, std::move(msg)});
  return {CallStatus::kQueued, {}};
}

void VaultSystem::drain_vault(VaultId v) {
  auto& q = queues_[v];
  std::stable_sort(q.begin(), q.end(), [](const Queued& a, const Queued& b) {
    return a.src < b.src || (a.src == b.src && a.seq < b.seq);
  });
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& m = q[i].msg;
    try {
      handlers_[m.handler](parts_[v], m.args);
    } catch (const std::exception& e) {
      throw HandlerFault("vault " + std::to_string(v) + " handler " +
                         handler_name(m.handler) + " message " +
                         std::to_string(i) + ": " + e.what());
    }
  }
}

void VaultSystem::barrier() {
  const auto n = static_cast<std::int64_t>(cfg_.n_vaults);
  std::vector<std::exception_ptr> errors(cfg_.n_vaults);
  std::uint64_t executed = 0;
  for (const auto& q : queues_) executed += q.size();
  if (parallel_drain_) {
    // Each handler touches only its own partition.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t v = 0; v < n; ++v) {
      try {
        drain_vault(static_cast<VaultId>(v));
      } catch (...) {
        errors[static_cast<std::size_t>(v)] = std::current_exception();
      }
    }
  } else {
    for (std::int64_t v = 0; v < n; ++v) {
      try {
        drain_vault(static_cast<VaultId>(v));
      } catch (...) {
        errors[static_cast<std::size_t>(v)] = std::current_exception();
        break;
      }
    }
  }
  for (auto& q : queues_) q.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  executions_ += executed;
}

void VaultSystem::for_each_vault(const std::function<void(GraphPartition&)>& fn,
                                 Schedule schedule) {
  const auto n = static_cast<std::int64_t>(parts_.size());
  switch (schedule) {
    case Schedule::kSequential:
      for (auto& p : parts_) fn(p);
      break;
    case Schedule::kReverse:
      for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) fn(*it);
      break;
    case Schedule::kParallel: {
      std::vector<std::exception_ptr> errors(parts_.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t v = 0; v < n; ++v) {
        try {
          fn(parts_[static_cast<std::size_t>(v)]);
        } catch (...) {
          errors[static_cast<std::size_t>(v)] = std::current_exception();
        }
      }
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      break;
    }
  }
}

std::uint64_t VaultSystem::superstep(const ComputeFn& compute,
                                     Schedule schedule) {
  std::vector<Outbox> outboxes(parts_.size());
  for_each_vault([&](GraphPartition& p) { compute(p, outboxes[p.vault_id]); },
                 schedule);
  std::uint64_t delivered = 0;
  for (VaultId src = 0; src < outboxes.size(); ++src) {
    for (auto& msg : outboxes[src]) {
      if (msg.blocking) {
        throw InputError("superstep: blocking calls are not allowed in outboxes");
      }
      auto r = remote_call(src, msg);
      if (r.status == CallStatus::kBackpressure) {
        barrier();
        r = remote_call(src, std::move(msg));
      }
      if (r.status == CallStatus::kQueued) ++delivered;
    }
  }
  parallel_drain_ = schedule == Schedule::kParallel;
  try {
    barrier();
  } catch (...) {
    parallel_drain_ = false;
    throw;
  }
  parallel_drain_ = false;
  return delivered;
}

PageRankResult run_pagerank(VaultSystem& sys, std::uint32_t iterations,
                            double damping, Schedule schedule) {
  if (!(damping > 0.0 && damping < 1.0)) {
    throw InputError("pagerank: damping must be in (0, 1)");
  }
  if (iterations < 1) throw InputError("pagerank: iterations must be >= 1");
  const VertexId n = sys.n_vertices();
  PageRankResult out;
  if (n == 0) return out;
  const double inv_n = 1.0 / static_cast<double>(n);

  const HandlerId add = sys.register_handler(
      "pagerank.add", [](GraphPartition& p, std::span<const std::byte> args) {
        const auto [v, c] = decode_vertex_f64(args);
        if (!p.owns(v)) throw HandlerFault("vertex not owned by this vault");
        p.rank_accum[p.local(v)] += c;
        return Payload{};
      });

  for (auto& p : sys.partitions()) {
    std::fill(p.rank.begin(), p.rank.end(), inv_n);
    std::fill(p.rank_accum.begin(), p.rank_accum.end(), 0.0);
  }

  for (std::uint32_t it = 0; it < iterations; ++it) {
    // Dangling mass, reduced in ascending vault order.
    double dangling = 0.0;
    for (const auto& p : sys.partitions()) {
      for (VertexId v = p.lo; v < p.hi; ++v) {
        if (p.out_edges(v).empty()) dangling += p.rank[p.local(v)];
      }
    }
    const std::uint64_t cross_before = sys.ledger().cross_vault_messages;
    const std::uint64_t sent = sys.superstep(
        [&](GraphPartition& p, Outbox& box) {
          for (VertexId u = p.lo; u < p.hi; ++u) {
            const auto outs = p.out_edges(u);
            if (outs.empty()) continue;
            const double share =
                p.rank[p.local(u)] / static_cast<double>(outs.size());
            for (VertexId v : outs) {
              box.push_back({sys.owner_of(v), add, encode_vertex_f64(v, share),
                             false});
            }
          }
        },
        schedule);
    sys.ledger().edge_traversals += sent;
    out.cross_messages.push_back(sys.ledger().cross_vault_messages -
                                 cross_before);

    const double base = (1.0 - damping) * inv_n;
    const double spread = dangling * inv_n;
    sys.for_each_vault(
        [&](GraphPartition& p) {
          for (std::size_t i = 0; i < p.size(); ++i) {
            p.rank[i] = base + damping * (p.rank_accum[i] + spread);
            p.rank_accum[i] = 0.0;
          }
        },
        schedule);

    double sum = 0.0;
    for (const auto& p : sys.partitions()) {
      for (double r : p.rank) sum += r;
    }
    out.rank_sums.push_back(sum);
  }

  out.ranks.reserve(n);
  for (const auto& p : sys.partitions()) {
    out.ranks.insert(out.ranks.end(), p.rank.begin(), p.rank.end());
  }
  return out;
}

std::vector<std::int64_t> run_bfs(VaultSystem& sys, VertexId source,
                                  Schedule schedule) {
  if (source >= sys.n_vertices()) {
    throw InputError("bfs: source " + std::to_string(source) +
                     " out of range");
  }
  const HandlerId visit = sys.register_handler(
      "bfs.visit", [](GraphPartition& p, std::span<const std::byte> args) {
        const auto [v, level] = decode_vertex_i64(args);
        if (!p.owns(v)) throw HandlerFault("vertex not owned by this vault");
        auto& d = p.distance[p.local(v)];
        if (d == kUnreachable) {
          d = level;
          p.next_frontier.push_back(v);
        }
        return Payload{};
      });

  for (auto& p : sys.partitions()) {
    std::fill(p.distance.begin(), p.distance.end(), kUnreachable);
    p.frontier.clear();
    p.next_frontier.clear();
  }
  {
    auto& owner = sys.partitions()[sys.owner_of(source)];
    owner.distance[owner.local(source)] = 0;
    owner.frontier.push_back(source);
  }

  for (std::int64_t level = 0;; ++level) {
    bool active = false;
    for (const auto& p : sys.partitions()) active |= !p.frontier.empty();
    if (!active) break;
    const std::uint64_t sent = sys.superstep(
        [&](GraphPartition& p, Outbox& box) {
          for (VertexId u : p.frontier) {
            for (VertexId v : p.out_edges(u)) {
              box.push_back({sys.owner_of(v), visit,
                             encode_vertex_i64(v, level + 1), false});
            }
          }
        },
        schedule);
    sys.ledger().edge_traversals += sent;
    for (auto& p : sys.partitions()) {
      p.frontier.swap(p.next_frontier);
      p.next_frontier.clear();
    }
  }

  std::vector<std::int64_t> dist;
  dist.reserve(sys.n_vertices());
  for (const auto& p : sys.partitions()) {
    dist.insert(dist.end(), p.distance.begin(), p.distance.end());
  }
  return dist;
}

std::vector<double> reference_pagerank(const Graph& g, std::uint32_t iterations,
                                       double damping) {
  const VertexId n = g.n_vertices;
  if (n == 0) return {};
  std::vector<std::uint64_t> degree(n, 0);
  for (const auto& e : g.edges) ++degree[e.src];
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::uint32_t it = 0; it < iterations; ++it) {
    double dangling = 0.0;
    for (VertexId v = 0; v < n; ++v) {
      if (degree[v] == 0) dangling += rank[v];
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& e : g.edges) {
      next[e.dst] += rank[e.src] / static_cast<double>(degree[e.src]);
    }
    for (VertexId v = 0; v < n; ++v) {
      next[v] = (1.0 - damping) / static_cast<double>(n) +
                damping * (next[v] + dangling / static_cast<double>(n));
    }
    rank.swap(next);
  }
  return rank;
}

std::vector<std::int64_t> reference_bfs(const Graph& g, VertexId source) {
  const VertexId n = g.n_vertices;
  std::vector<std::vector<VertexId>> adj(n);
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);
  std::vector<std::int64_t> dist(n, kUnreachable);
  if (source >= n) return dist;
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : adj[u]) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

ReportRecord movement_report(const MovementLedger& ledger,
                             const std::string& workload_id,
                             const cost::CostParams& p,
                             const cost::BaselineModel& m) {
  ReportRecord r;
  r.workload_id = workload_id;
  const double base_bytes = static_cast<double>(ledger.baseline_bytes());
  const double pim_bytes = static_cast<double>(ledger.message_bytes());
  r.baseline_latency_ns = base_bytes / p.channel_bw_GBps;
  r.baseline_energy_nJ = base_bytes * p.channel_energy_pJ_per_byte * 1e-3;
  r.ambit_latency_ns = pim_bytes / (p.channel_bw_GBps * m.internal_bw_multiplier);
  r.ambit_energy_nJ = pim_bytes * p.internal_energy_pJ_per_byte * 1e-3;
  r.throughput_ratio = cost::ratio(r.baseline_latency_ns, r.ambit_latency_ns);
  r.energy_ratio = cost::ratio(r.baseline_energy_nJ, r.ambit_energy_nJ);
  r.bytes_moved_baseline = ledger.baseline_bytes();
  r.bytes_moved_pim = ledger.cross_vault_bytes;
  return r;
}

}  // namespace pimsim::tesseract

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

#include "pimsim/bench/runner.hpp"

#include <cmath>
#include <type_traits>
#include <variant>

#include "pimsim/bench/program.hpp"
#include "pimsim/bench/workloads.hpp"

namespace pimsim::bench {

namespace {

struct AmbitJob {
  VectorProgram program;
  std::vector<BitRow> inputs;
  BitRow expected;
};

AmbitJob make_job(const RunConfig& cfg, const BulkBitwiseSpec& s) {
  AmbitJob job;
  const std::uint64_t bits = s.size_bytes * 8;
  BitRow a(bits);
  BitRow b(bits);
  SplitMix64 ra(derive_seed(cfg.seed, "bulk.a"));
  SplitMix64 rb(derive_seed(cfg.seed, "bulk.b"));
  a.randomize(ra);
  b.randomize(rb);
  const bool unary = ambit::is_unary(s.op);
  job.expected = ambit::evaluate(s.op, a, unary ? nullptr : &b);
  job.inputs.push_back(std::move(a));
  if (!unary) job.inputs.push_back(std::move(b));
  auto& p = job.program;
  p.n_inputs = static_cast<std::uint32_t>(job.inputs.size());
  p.n_registers = p.n_inputs + 1;
  p.result = p.n_inputs;
  p.instrs.push_back({VectorInstr::Kind::kOp, s.op, p.result, 0, 1});
  return job;
}

AmbitJob make_job(const RunConfig& cfg, const BitmapQuerySpec& s) {
  AmbitJob job;
  const auto index = gen_bitmap_workload(s.n_records, s.n_categories,
                                         derive_seed(cfg.seed, "bitmaps"));
  const auto query = parse_query(s.query_expr, s.n_categories);
  auto compiled = compile_query(*query);
  for (auto c : compiled.input_categories) {
    job.inputs.push_back(index.bitmaps[c]);
  }
  job.program = std::move(compiled.program);
  std::vector<bool> hit(s.n_categories);
  for (std::uint32_t c = 0; c < s.n_categories; ++c) hit[c] = eval_query(*query, c);
  job.expected = BitRow(s.n_records);
  for (std::uint64_t r = 0; r < s.n_records; ++r) {
    if (hit[index.category_of[r]]) job.expected.set(r, true);
  }
  return job;
}

AmbitJob make_job(const RunConfig& cfg, const BitserialScanSpec& s) {
  AmbitJob job;
  const auto values =
      gen_scan_values(s.n_records, s.bit_width, derive_seed(cfg.seed, "scan"));
  job.inputs = to_bit_planes(values, s.bit_width);
  job.program = bitserial_scan_compile(s.lt_constant, s.bit_width);
  job.expected = BitRow(s.n_records);
  for (std::uint64_t r = 0; r < s.n_records; ++r) {
    if (values[r] < s.lt_constant) job.expected.set(r, true);
  }
  return job;
}

ReportRecord run_ambit(const RunConfig& cfg, const WorkloadSpec& w,
                       AmbitJob job) {
  dram::Device device(cfg.geometry, derive_seed(cfg.seed, "device"));
  auto run = run_program(job.program, job.inputs, device, cfg.cost, cfg.parallel);
  if (cfg.inject_mismatch) run.result.set(0, !run.result.get(0));
  const std::size_t diff = run.result.first_difference(job.expected);
  if (diff != job.expected.width()) {
    throw OracleMismatch("workload " + w.id +
                             ": in-DRAM result differs from reference at bit " +
                             std::to_string(diff),
                         diff);
  }

  cost::CostReport pim = run.cost;
  pim.latency_ns += cfg.cost.query_overhead_ns;
  cost::BaselineModel model = cfg.baseline;
  model.streams_read = job.program.n_inputs;
  model.streams_written = 1;
  const std::uint64_t n_bytes = (job.expected.width() + 7) / 8;
  cost::CostReport base = cost::baseline_cost(n_bytes, model, cfg.cost);
  base.latency_ns += cfg.cost.query_overhead_ns;

  ReportRecord r;
  r.workload_id = w.id;
  r.config_hash = config_hash(cfg, w);
  r.ambit_latency_ns = pim.latency_ns;
  r.ambit_energy_nJ = pim.energy_nJ;
  r.baseline_latency_ns = base.latency_ns;
  r.baseline_energy_nJ = base.energy_nJ;
  r.throughput_ratio = cost::ratio(base.latency_ns, pim.latency_ns);
  r.energy_ratio = cost::ratio(base.energy_nJ, pim.energy_nJ);
  r.bytes_moved_baseline = base.bytes_moved_on_channel;
  r.bytes_moved_pim = pim.bytes_moved_on_channel;
  return r;
}

tesseract::Graph load_graph(const RunConfig& cfg, const GraphSource& s) {
  if (!s.path.empty()) {
    if (s.path.front() == '/' || cfg.base_dir.empty()) {
      return tesseract::read_edge_list_file(s.path);
    }
    return tesseract::read_edge_list_file(cfg.base_dir + "/" + s.path);
  }
  return tesseract::generate_uniform(s.vertices, s.edges,
                                     derive_seed(cfg.seed, "graph"));
}

tesseract::VaultSystem make_system(const RunConfig& cfg,
                                   const tesseract::Graph& g) {
  return tesseract::VaultSystem(
      tesseract::partition_graph(g.edges, g.n_vertices, cfg.vaults), cfg.vaults,
      g.n_vertices);
}

tesseract::Schedule schedule_for(const RunConfig& cfg) {
  return cfg.parallel ? tesseract::Schedule::kParallel
                      : tesseract::Schedule::kSequential;
}

ReportRecord finish_graph(const RunConfig& cfg, const WorkloadSpec& w,
                          const tesseract::VaultSystem& sys) {
  ReportRecord r =
      tesseract::movement_report(sys.ledger(), w.id, cfg.cost, cfg.baseline);
  r.config_hash = config_hash(cfg, w);
  return r;
}

ReportRecord run_graph(const RunConfig& cfg, const WorkloadSpec& w,
                       const PageRankSpec& s) {
  const auto g = load_graph(cfg, s.graph);
  auto sys = make_system(cfg, g);
  auto got = tesseract::run_pagerank(sys, s.iterations, s.damping,
                                     schedule_for(cfg));
  const auto want = tesseract::reference_pagerank(g, s.iterations, s.damping);
  if (cfg.inject_mismatch && !got.ranks.empty()) got.ranks[0] += 1.0;
  for (std::size_t v = 0; v < want.size(); ++v) {
    if (!(std::abs(got.ranks[v] - want[v]) <= kPageRankTolerance)) {
      throw OracleMismatch("workload " + w.id + ": rank of vertex " +
                               std::to_string(v) + " differs from reference",
                           v);
    }
  }
  return finish_graph(cfg, w, sys);
}

ReportRecord run_graph(const RunConfig& cfg, const WorkloadSpec& w,
                       const BfsSpec& s) {
  const auto g = load_graph(cfg, s.graph);
  if (s.source >= g.n_vertices) {
    throw InputError("workload " + w.id + ": bfs source out of range");
  }
  auto sys = make_system(cfg, g);
  auto got = tesseract::run_bfs(sys, s.source, schedule_for(cfg));
  const auto want = tesseract::reference_bfs(g, s.source);
  if (cfg.inject_mismatch && !got.empty()) got[0] += 1;
  for (std::size_t v = 0; v < want.size(); ++v) {
    if (got[v] != want[v]) {
      throw OracleMismatch("workload " + w.id + ": distance of vertex " +
                               std::to_string(v) + " differs from reference",
                           v);
    }
  }
  return finish_graph(cfg, w, sys);
}

}  // namespace

ReportRecord run_workload(const RunConfig& cfg, const WorkloadSpec& w) {
  return std::visit(
      [&](const auto& s) -> ReportRecord {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PageRankSpec> ||
                      std::is_same_v<T, BfsSpec>) {
          return run_graph(cfg, w, s);
        } else {
          return run_ambit(cfg, w, make_job(cfg, s));
        }
      },
      w.kind);
}

std::vector<ReportRecord> run(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ReportRecord> out;
  out.reserve(cfg.workloads.size());
  for (const auto& w : cfg.workloads) out.push_back(run_workload(cfg, w));
  return out;
}

}  // namespace pimsim::bench

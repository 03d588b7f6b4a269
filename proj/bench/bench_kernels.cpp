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

// Serial reference executors vs. their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "pimsim/ambit.hpp"
#include "pimsim/tesseract.hpp"

namespace {

using namespace pimsim;

void bulk_xor(benchmark::State& state, bool parallel) {
  dram::Geometry g;
  g.subarrays_per_bank = 4;
  const std::uint64_t len = static_cast<std::uint64_t>(state.range(0));
  const auto v = ambit::place_aligned(g, len, 3);
  const auto traces =
      ambit::bulk_execute(ambit::BitwiseOp::kXor, g, v[0], &v[1], v[2]);
  dram::Device device(g, 1);
  for (auto _ : state) {
    if (parallel) {
      ambit::execute_parallel(traces, device);
    } else {
      ambit::execute_serial(traces, device);
    }
    benchmark::DoNotOptimize(device.row(v[2].chunks[0].row).words().data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(len / 8));
}

void BM_BulkXorSerial(benchmark::State& s) { bulk_xor(s, false); }
void BM_BulkXorParallel(benchmark::State& s) { bulk_xor(s, true); }
BENCHMARK(BM_BulkXorSerial)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 22);
BENCHMARK(BM_BulkXorParallel)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 22);

void pagerank(benchmark::State& state, tesseract::Schedule schedule) {
  const auto g = tesseract::generate_uniform(
      static_cast<tesseract::VertexId>(state.range(0)),
      static_cast<std::uint64_t>(state.range(0)) * 5, 3);
  tesseract::VaultConfig c;
  c.queue_capacity = 1 << 20;
  for (auto _ : state) {
    tesseract::VaultSystem sys(
        tesseract::partition_graph(g.edges, g.n_vertices, c), c, g.n_vertices);
    auto r = tesseract::run_pagerank(sys, 5, 0.85, schedule);
    benchmark::DoNotOptimize(r.ranks.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(g.edges.size()) * 5);
}

void BM_PageRankSequential(benchmark::State& s) {
  pagerank(s, tesseract::Schedule::kSequential);
}
void BM_PageRankParallel(benchmark::State& s) {
  pagerank(s, tesseract::Schedule::kParallel);
}
BENCHMARK(BM_PageRankSequential)->Arg(1000)->Arg(50000);
BENCHMARK(BM_PageRankParallel)->Arg(1000)->Arg(50000);

}  // namespace

BENCHMARK_MAIN();

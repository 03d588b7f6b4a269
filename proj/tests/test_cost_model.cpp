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

#include "doctest.h"
#include "pimsim/cost_model.hpp"

using namespace pimsim;
using namespace pimsim::cost;
using ambit::BitwiseOp;

namespace {

ambit::CommandTrace and_trace(const dram::Geometry& g, std::uint32_t bank) {
  auto t = ambit::compile(BitwiseOp::kAnd, g, {bank, 0, 8},
                          dram::RowAddress{bank, 0, 9}, {bank, 0, 10});
  return t;
}

}  // namespace

TEST_CASE("AND and NOT price by hand") {
  const CostParams p;
  const dram::Geometry g;
  // Four AAP groups at 2*tRAS + tRP.
  const CostReport a = price_trace(and_trace(g, 0), p);
  CHECK(a.latency_ns == doctest::Approx(4 * (2 * 35.0 + 15.0)));
  // Three copy AAPs at 2*e_act + e_pre, one TRA group at f*2*e_act + e_pre.
  CHECK(a.energy_nJ == doctest::Approx(3 * (2 * 2.0 + 0.5) + 1.5 * 2 * 2.0 + 0.5));
  CHECK(a.bytes_moved_on_channel == 0);
  CHECK(a.result_bits == 8192);
  // A lone DCC group at tRAS + tRP, then one AAP.
  const CostReport n = row_op_cost(BitwiseOp::kNot, p, g);
  CHECK(n.latency_ns == doctest::Approx((35.0 + 15.0) + (2 * 35.0 + 15.0)));
  CHECK(n.energy_nJ == doctest::Approx((2.0 + 0.5) + (2 * 2.0 + 0.5)));
}

TEST_CASE("empty trace is free") {
  const CostReport r = price_trace({}, CostParams{});
  CHECK(r.latency_ns == 0.0);
  CHECK(r.energy_nJ == 0.0);
  CHECK(r.result_bits == 0);
}

TEST_CASE("eligible traces in distinct banks overlap") {
  const CostParams p;
  const dram::Geometry g;
  std::vector<ambit::CommandTrace> ts;
  for (std::uint32_t b = 0; b < 8; ++b) {
    ts.push_back(and_trace(g, b));
    ts.back().parallel_eligible = true;
  }
  const CostReport one = price_trace(ts[0], p);
  const CostReport all = price_traces(ts, p);
  CHECK(all.latency_ns == doctest::Approx(340.0));
  CHECK(all.energy_nJ == doctest::Approx(8 * one.energy_nJ));
  // Same bank twice: serialized in its lane.
  ts.push_back(ts[0]);
  CHECK(price_traces(ts, p).latency_ns == doctest::Approx(680.0));
  // Ineligible traces add up.
  for (auto& t : ts) t.parallel_eligible = false;
  CHECK(price_traces(ts, p).latency_ns == doctest::Approx(9 * 340.0));
}

TEST_CASE("lanes wrap at banks_parallel") {
  CostParams p;
  p.banks_parallel = 4;
  const dram::Geometry g;
  std::vector<ambit::CommandTrace> ts;
  for (std::uint32_t b = 0; b < 8; ++b) {
    ts.push_back(and_trace(g, b));
    ts.back().parallel_eligible = true;
  }
  CHECK(price_traces(ts, p).latency_ns == doctest::Approx(680.0));
}

TEST_CASE("burst commands are priced per byte") {
  const CostParams p;
  dram::Geometry g;
  const auto t = ambit::rowclone_copy(g, {0, 0, 8}, {1, 0, 8});
  const CostReport r = price_trace(t, p);
  // ACT RD PRE ACT WR PRE; each burst moves 1024 bytes.
  const double burst = 15.0 + 1024.0 / 12.8;
  CHECK(r.latency_ns == doctest::Approx(2 * 35.0 + 2 * 15.0 + 2 * burst));
  CHECK(r.energy_nJ ==
        doctest::Approx(2 * 2.0 + 2 * 0.5 + 2 * 1024.0 * 6.0 * 1e-3));
  CHECK(r.bytes_moved_on_channel == 0);
}

TEST_CASE("additivity over concatenated traces") {
  const CostParams p;
  const dram::Geometry g;
  auto t1 = and_trace(g, 0);
  auto t2 = ambit::compile(BitwiseOp::kXnor, g, {0, 0, 11},
                           dram::RowAddress{0, 0, 12}, {0, 0, 13});
  ambit::CommandTrace both = t1;
  both.commands.insert(both.commands.end(), t2.commands.begin(),
                       t2.commands.end());
  const CostReport a = price_trace(t1, p);
  const CostReport b = price_trace(t2, p);
  const CostReport c = price_trace(both, p);
  CHECK(c.latency_ns == doctest::Approx(a.latency_ns + b.latency_ns));
  CHECK(c.energy_nJ == doctest::Approx(a.energy_nJ + b.energy_nJ));
}

TEST_CASE("throughput: arithmetic, bank and width linearity") {
  CostParams p;
  dram::Geometry g;
  const double t8 = ambit_throughput(BitwiseOp::kAnd, p, g);
  CHECK(t8 == doctest::Approx(8192.0 * 8 / 340.0));
  CHECK(t8 == doctest::Approx(192.75).epsilon(1e-3));
  p.banks_parallel = 1;
  CHECK(t8 == 8 * ambit_throughput(BitwiseOp::kAnd, p, g));
  p.banks_parallel = 8;
  g.row_width_bits = 16384;
  CHECK(ambit_throughput(BitwiseOp::kAnd, p, g) == 2 * t8);
}

TEST_CASE("cpu stream and logic layer baselines") {
  const CostParams p;
  BaselineModel m = BaselineModel::for_op(BitwiseOp::kAnd);
  CostReport r = baseline_cost(1024, m, p);
  CHECK(r.bytes_moved_on_channel == 3072);
  CHECK(r.latency_ns == doctest::Approx(240.0));
  CHECK(r.energy_nJ == doctest::Approx(3072 * 60.0 * 1e-3));
  const BaselineModel n = BaselineModel::for_op(BitwiseOp::kNot);
  CHECK(baseline_cost(1000, n, p).bytes_moved_on_channel == 2000);
  m.kind = BaselineKind::kLogicLayer;
  const CostReport l = baseline_cost(1024, m, p);
  CHECK(l.latency_ns == doctest::Approx(24.0));
  CHECK(l.energy_nJ == doctest::Approx(3072 * 6.0 * 1e-3));
  BaselineModel bad;
  bad.streams_read = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("speedup on 64 KiB AND") {
  const CostParams p;
  const auto s = speedup(BitwiseOp::kAnd, 65536, p,
                         BaselineModel::for_op(BitwiseOp::kAnd));
  // Ambit: 64 chunks over 8 banks = 8 waves of 340 ns, 64 * 20 nJ.
  // Baseline: 196608 bytes at 12.8 B/ns and 60 pJ/B.
  CHECK(s.throughput_ratio == doctest::Approx(15360.0 / 2720.0));
  CHECK(s.energy_ratio == doctest::Approx(11796.48 / 1280.0));
  CHECK(s.throughput_ratio > 1);
  CHECK(s.energy_ratio > 1);
  CHECK_THROWS_AS(speedup(BitwiseOp::kAnd, 100, p, BaselineModel{}),
                  InputError);
}

TEST_CASE("ratio edge cases") {
  CHECK(ratio(0, 0) == 1.0);
  CHECK(std::isinf(ratio(1, 0)));
  const CostReport x{12.0, 3.0, 0, 8};
  const Speedup s = compare(x, x);
  CHECK(s.throughput_ratio == 1.0);
  CHECK(s.energy_ratio == 1.0);
}

TEST_CASE("energy ratio ignores uniform time scaling") {
  CostParams p;
  const BaselineModel m = BaselineModel::for_op(BitwiseOp::kOr);
  const double e = speedup(BitwiseOp::kOr, 65536, p, m).energy_ratio;
  p.tRAS_ns *= 3;
  p.tRP_ns *= 3;
  p.tRCD_ns *= 3;
  p.channel_bw_GBps /= 3;
  CHECK(speedup(BitwiseOp::kOr, 65536, p, m).energy_ratio == doctest::Approx(e));
}

TEST_CASE("monotonicity in channel bandwidth and banks") {
  const BaselineModel m = BaselineModel::for_op(BitwiseOp::kAnd);
  CostParams p;
  double prev = 1e300;
  for (double bw : {3.2, 6.4, 12.8, 25.6, 51.2, 102.4}) {
    p.channel_bw_GBps = bw;
    const double t = speedup(BitwiseOp::kAnd, 1 << 20, p, m).throughput_ratio;
    CHECK(t <= prev);
    prev = t;
  }
  p = {};
  prev = 0;
  for (std::uint32_t b : {1u, 2u, 3u, 4u, 8u, 16u}) {
    p.banks_parallel = b;
    const double t = speedup(BitwiseOp::kAnd, 1 << 20, p, m).throughput_ratio;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("size scaling with per-query overhead") {
  CostParams p;
  p.query_overhead_ns = 500;
  const BaselineModel m = BaselineModel::for_op(BitwiseOp::kAnd);
  double prev = 0;
  for (std::uint64_t k = 1; k <= 256; k *= 2) {
    const double t = speedup(BitwiseOp::kAnd, k * 1024, p, m).throughput_ratio;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("parameter validation") {
  CostParams p;
  p.e_tra_factor = 0.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.tRP_ns = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.banks_parallel = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

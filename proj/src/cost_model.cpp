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

#include "pimsim/cost_model.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace pimsim::cost {

void CostParams::validate() const {
  const bool positive = tRAS_ns > 0 && tRP_ns > 0 && tRCD_ns > 0 &&
                        e_act_nJ > 0 && e_pre_nJ > 0 && channel_bw_GBps > 0 &&
                        channel_energy_pJ_per_byte > 0 &&
                        internal_energy_pJ_per_byte > 0 && banks_parallel > 0;
  if (!positive) throw ConfigError("cost: all parameters must be > 0");
  if (e_tra_factor < 1.0) throw ConfigError("cost: e_tra_factor must be >= 1");
  if (query_overhead_ns < 0) {
    throw ConfigError("cost: query_overhead_ns must be >= 0");
  }
}

CostReport& CostReport::operator+=(const CostReport& o) {
  latency_ns += o.latency_ns;
  energy_nJ += o.energy_nJ;
  bytes_moved_on_channel += o.bytes_moved_on_channel;
  result_bits += o.result_bits;
  return *this;
}

BaselineModel BaselineModel::for_op(ambit::BitwiseOp op, BaselineKind kind,
                                    double internal_bw_multiplier) {
  BaselineModel m;
  m.kind = kind;
  m.streams_read = ambit::is_unary(op) ? 1 : 2;
  m.streams_written = 1;
  m.internal_bw_multiplier = internal_bw_multiplier;
  return m;
}

void BaselineModel::validate() const {
  if (streams_read < 1) throw ConfigError("baseline: streams_read must be >= 1");
  if (internal_bw_multiplier <= 0 || bandwidth_scale <= 0) {
    throw ConfigError("baseline: bandwidth multipliers must be > 0");
  }
}

CostReport price_trace(const ambit::CommandTrace& trace, const CostParams& p) {
  CostReport r;
  for (const auto& c : trace.commands) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, dram::cmd::ActivateTriple>) {
            r.latency_ns += p.tRAS_ns;
            r.energy_nJ += (2.0 * p.e_tra_factor - 1.0) * p.e_act_nJ;
          } else if constexpr (std::is_same_v<T, dram::cmd::Activate> ||
                               std::is_same_v<T, dram::cmd::ActivateDcc>) {
            r.latency_ns += p.tRAS_ns;
            r.energy_nJ += p.e_act_nJ;
          } else if constexpr (std::is_same_v<T, dram::cmd::Precharge>) {
            r.latency_ns += p.tRP_ns;
            r.energy_nJ += p.e_pre_nJ;
          } else {
            const double bytes = 8.0 * x.cols.word_count;
            r.latency_ns += p.tRCD_ns + bytes / p.channel_bw_GBps;
            r.energy_nJ += bytes * p.internal_energy_pJ_per_byte * 1e-3;
          }
        },
        c);
  }
  if (!trace.commands.empty()) r.result_bits = trace.result_bits;
  return r;
}

CostReport price_traces(std::span<const ambit::CommandTrace> traces,
                        const CostParams& p) {
  CostReport total;
  std::size_t i = 0;
  while (i < traces.size()) {
    if (!traces[i].parallel_eligible) {
      total += price_trace(traces[i], p);
      ++i;
      continue;
    }
    std::map<std::uint32_t, double> lane_latency;
    for (; i < traces.size() && traces[i].parallel_eligible; ++i) {
      const CostReport one = price_trace(traces[i], p);
      lane_latency[traces[i].destination.bank % p.banks_parallel] +=
          one.latency_ns;
      total.energy_nJ += one.energy_nJ;
      total.bytes_moved_on_channel += one.bytes_moved_on_channel;
      total.result_bits += one.result_bits;
    }
    double slowest = 0.0;
    for (const auto& [lane, lat] : lane_latency) slowest = std::max(slowest, lat);
    total.latency_ns += slowest;
  }
  return total;
}

namespace {

ambit::CommandTrace representative_trace(ambit::BitwiseOp op,
                                         const dram::Geometry& g) {
  const std::uint32_t base = g.reserved_rows();
  const dram::RowAddress a{0, 0, base};
  const dram::RowAddress b{0, 0, base + 1};
  const dram::RowAddress dst{0, 0, base + 2};
  std::optional<dram::RowAddress> rb;
  if (!ambit::is_unary(op)) rb = b;
  return ambit::compile(op, g, a, rb, dst);
}

}  // namespace

CostReport row_op_cost(ambit::BitwiseOp op, const CostParams& p,
                       const dram::Geometry& g) {
  return price_trace(representative_trace(op, g), p);
}

double ambit_throughput(ambit::BitwiseOp op, const CostParams& p,
                        const dram::Geometry& g) {
  const CostReport one = row_op_cost(op, p, g);
  return static_cast<double>(g.row_width_bits) * p.banks_parallel /
         one.latency_ns;
}

CostReport ambit_cost(ambit::BitwiseOp op, std::uint64_t n_bytes,
                      const CostParams& p, const dram::Geometry& g) {
  const CostReport one = row_op_cost(op, p, g);
  const std::uint64_t bits = n_bytes * 8;
  const std::uint64_t chunks = (bits + g.row_width_bits - 1) / g.row_width_bits;
  const std::uint64_t waves = (chunks + p.banks_parallel - 1) / p.banks_parallel;
  CostReport r;
  r.latency_ns = static_cast<double>(waves) * one.latency_ns;
  r.energy_nJ = static_cast<double>(chunks) * one.energy_nJ;
  r.result_bits = bits;
  return r;
}

CostReport baseline_cost(std::uint64_t n_bytes, const BaselineModel& m,
                         const CostParams& p) {
  CostReport r;
  r.bytes_moved_on_channel =
      static_cast<std::uint64_t>(m.streams_read + m.streams_written) * n_bytes;
  const double moved = static_cast<double>(r.bytes_moved_on_channel);
  if (m.kind == BaselineKind::kCpuStream) {
    r.latency_ns = moved / (p.channel_bw_GBps * m.bandwidth_scale);
    r.energy_nJ = moved * p.channel_energy_pJ_per_byte * 1e-3;
  } else {
    r.latency_ns = moved / (p.channel_bw_GBps * m.internal_bw_multiplier);
    r.energy_nJ = moved * p.internal_energy_pJ_per_byte * 1e-3;
  }
  r.result_bits = n_bytes * 8;
  return r;
}

double ratio(double baseline, double pim) {
  if (pim == 0.0) {
    return baseline == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return baseline / pim;
}

Speedup compare(const CostReport& baseline, const CostReport& pim) {
  return {ratio(baseline.latency_ns, pim.latency_ns),
          ratio(baseline.energy_nJ, pim.energy_nJ)};
}

Speedup speedup(ambit::BitwiseOp op, std::uint64_t n_bytes, const CostParams& p,
                const BaselineModel& m, const dram::Geometry& g) {
  const std::uint64_t chunk_bytes = g.row_width_bits / 8;
  if (n_bytes == 0 || n_bytes % chunk_bytes != 0) {
    throw InputError("speedup: size must be a positive multiple of " +
                     std::to_string(chunk_bytes) + " bytes");
  }
  CostReport pim = ambit_cost(op, n_bytes, p, g);
  CostReport base = baseline_cost(n_bytes, m, p);
  pim.latency_ns += p.query_overhead_ns;
  base.latency_ns += p.query_overhead_ns;
  return compare(base, pim);
}

}  // namespace pimsim::cost

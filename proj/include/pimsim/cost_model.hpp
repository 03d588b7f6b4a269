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

// Latency/energy pricing of command traces and of processor-centric
// baselines. Default parameters are representative DDR3-1600-class values;
// the interesting outputs are ratios, not absolutes.

#pragma once

#include <cstdint>
#include <span>

#include "pimsim/ambit.hpp"

namespace pimsim::cost {

struct CostParams {
  double tRAS_ns = 35.0;
  double tRP_ns = 15.0;
  double tRCD_ns = 15.0;
  double e_act_nJ = 2.0;
  double e_pre_nJ = 0.5;
  /// Energy multiplier of a triple activation over two single activations.
  double e_tra_factor = 1.5;
  double channel_bw_GBps = 12.8;
  double channel_energy_pJ_per_byte = 60.0;
  /// Logic-layer / internal-bus transfer energy.
  double internal_energy_pJ_per_byte = 6.0;
  /// Fixed host-side cost added to both sides of a query comparison.
  double query_overhead_ns = 0.0;
  std::uint32_t banks_parallel = 8;

  void validate() const;
  bool operator==(const CostParams&) const = default;
};

struct CostReport {
  double latency_ns = 0.0;
  double energy_nJ = 0.0;
  std::uint64_t bytes_moved_on_channel = 0;
  std::uint64_t result_bits = 0;

  /// Sequential composition.
  CostReport& operator+=(const CostReport& o);
  friend CostReport operator+(CostReport a, const CostReport& b) {
    return a += b;
  }
  bool operator==(const CostReport&) const = default;
};

enum class BaselineKind { kCpuStream, kLogicLayer };

struct BaselineModel {
  BaselineKind kind = BaselineKind::kCpuStream;
  std::uint32_t streams_read = 2;
  std::uint32_t streams_written = 1;
  /// Bandwidth scale of the logic layer over the channel.
  double internal_bw_multiplier = 10.0;
  /// cpu_stream only: baseline bandwidth relative to the channel. Lets a
  /// wider-bus processor (e.g. a discrete GPU) share the stream model.
  double bandwidth_scale = 1.0;

  /// Streams for a single bulk op: 1 or 2 reads, 1 write.
  static BaselineModel for_op(ambit::BitwiseOp op,
                              BaselineKind kind = BaselineKind::kCpuStream,
                              double internal_bw_multiplier = 10.0);
  void validate() const;
  bool operator==(const BaselineModel&) const = default;
};

/// Activation = tRAS, precharge = tRP, burst = tRCD + bytes / channel_bw.
/// Triple activation energy is (2 * e_tra_factor - 1) * e_act so that a
/// TRA-led pair group costs e_tra_factor * 2 * e_act + e_pre.
CostReport price_trace(const ambit::CommandTrace& trace, const CostParams& p);

/// Parallel-eligible traces are grouped into banks_parallel lanes by bank
/// (bank % lanes); a run of them costs the slowest lane. Other traces add
/// sequentially. Energies always add.
CostReport price_traces(std::span<const ambit::CommandTrace> traces,
                        const CostParams& p);

/// Price of one row-granularity op on `g` (row width only matters for
/// result_bits).
CostReport row_op_cost(ambit::BitwiseOp op, const CostParams& p,
                       const dram::Geometry& g);

/// Result bits per ns.
double ambit_throughput(ambit::BitwiseOp op, const CostParams& p,
                        const dram::Geometry& g);

/// Ambit cost of `n_bytes` of result, striped over banks_parallel banks.
CostReport ambit_cost(ambit::BitwiseOp op, std::uint64_t n_bytes,
                      const CostParams& p, const dram::Geometry& g);

CostReport baseline_cost(std::uint64_t n_bytes, const BaselineModel& m,
                         const CostParams& p);

struct Speedup {
  double throughput_ratio = 0.0;
  double energy_ratio = 0.0;
};

/// b / p, with 0/0 defined as 1.
double ratio(double baseline, double pim);

Speedup compare(const CostReport& baseline, const CostReport& pim);

/// n_bytes must be a multiple of row_width_bits / 8. Both sides include
/// query_overhead_ns.
Speedup speedup(ambit::BitwiseOp op, std::uint64_t n_bytes, const CostParams& p,
                const BaselineModel& m, const dram::Geometry& g = {});

}  // namespace pimsim::cost

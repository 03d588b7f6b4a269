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

#pragma once

#include <cstdint>
#include <string>

namespace pimsim {

/// One benchmark result row. The `ambit_*` columns hold the PIM side of the
/// comparison (in-DRAM engine or vault engine).
struct ReportRecord {
  std::string workload_id;
  std::string config_hash;
  double ambit_latency_ns = 0.0;
  double ambit_energy_nJ = 0.0;
  double baseline_latency_ns = 0.0;
  double baseline_energy_nJ = 0.0;
  double throughput_ratio = 0.0;
  double energy_ratio = 0.0;
  std::uint64_t bytes_moved_baseline = 0;
  std::uint64_t bytes_moved_pim = 0;

  bool operator==(const ReportRecord&) const = default;
};

}  // namespace pimsim

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

#include <vector>

#include "pimsim/bench/config.hpp"
#include "pimsim/report_record.hpp"

namespace pimsim::bench {

/// PageRank results must match the sequential reference to this L-inf bound.
inline constexpr double kPageRankTolerance = 1e-9;

/// Runs one workload, checks its functional result against the built-in
/// scalar reference (OracleMismatch on any difference) and prices it.
ReportRecord run_workload(const RunConfig& cfg, const WorkloadSpec& w);

/// All workloads in config order.
std::vector<ReportRecord> run(const RunConfig& cfg);

}  // namespace pimsim::bench

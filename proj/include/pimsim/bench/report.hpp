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

// CSV and JSON report files.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimsim/report_record.hpp"

namespace pimsim::bench {

inline constexpr std::string_view kCsvHeader =
    "workload_id,config_hash,ambit_latency_ns,ambit_energy_nJ,"
    "baseline_latency_ns,baseline_energy_nJ,throughput_ratio,energy_ratio,"
    "bytes_moved_baseline,bytes_moved_pim";

enum class ReportFormat { kCsv, kJson };

std::optional<ReportFormat> parse_format(std::string_view name);
/// `.json` selects JSON, anything else CSV.
ReportFormat format_for_path(std::string_view path);

std::string to_csv(std::span<const ReportRecord> records);
/// Array of flat objects, keys in CSV column order.
std::string to_json(std::span<const ReportRecord> records);

std::vector<ReportRecord> parse_csv(std::string_view text);
std::vector<ReportRecord> parse_json(std::string_view text);

/// Throws InputError for an empty record list, IoError if the file cannot
/// be written.
void emit_report(std::span<const ReportRecord> records, ReportFormat format,
                 const std::string& path);

std::vector<ReportRecord> read_report(const std::string& path);

}  // namespace pimsim::bench

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

#include "pimsim/bench/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pimsim/bench/config.hpp"
#include "pimsim/common.hpp"

namespace pimsim::bench {

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return std::nullopt;
}

ReportFormat format_for_path(std::string_view path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json"
             ? ReportFormat::kJson
             : ReportFormat::kCsv;
}

namespace {

void check_id(const std::string& id) {
  if (id.find_first_of(",\"\n\r") != std::string::npos) {
    throw InputError("workload id `" + id + "` contains a reserved character");
  }
}

}  // namespace

std::string to_csv(std::span<const ReportRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    check_id(r.workload_id);
    out += r.workload_id + ',' + r.config_hash + ',' +
           format_double(r.ambit_latency_ns) + ',' +
           format_double(r.ambit_energy_nJ) + ',' +
           format_double(r.baseline_latency_ns) + ',' +
           format_double(r.baseline_energy_nJ) + ',' +
           format_double(r.throughput_ratio) + ',' +
           format_double(r.energy_ratio) + ',' +
           std::to_string(r.bytes_moved_baseline) + ',' +
           std::to_string(r.bytes_moved_pim) + '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

double read_number(const nlohmann::ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  return v.get<double>();
}

}  // namespace

std::string to_json(std::span<const ReportRecord> records) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["workload_id"] = r.workload_id;
    o["config_hash"] = r.config_hash;
    o["ambit_latency_ns"] = number(r.ambit_latency_ns);
    o["ambit_energy_nJ"] = number(r.ambit_energy_nJ);
    o["baseline_latency_ns"] = number(r.baseline_latency_ns);
    o["baseline_energy_nJ"] = number(r.baseline_energy_nJ);
    o["throughput_ratio"] = number(r.throughput_ratio);
    o["energy_ratio"] = number(r.energy_ratio);
    o["bytes_moved_baseline"] = r.bytes_moved_baseline;
    o["bytes_moved_pim"] = r.bytes_moved_pim;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + '\n';
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::size_t line, const char* name) {
  T out{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw InputError("report line " + std::to_string(line) + ": bad " + name);
  }
  return out;
}

}  // namespace

std::vector<ReportRecord> parse_csv(std::string_view text) {
  std::vector<ReportRecord> out;
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto row = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (line == 1) {
      if (row != kCsvHeader) throw InputError("report: unexpected CSV header");
      continue;
    }
    if (row.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = row.find(',', start);
      f.push_back(row.substr(start, comma == std::string_view::npos
                                        ? std::string_view::npos
                                        : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 10) {
      throw InputError("report line " + std::to_string(line) +
                       ": expected 10 columns");
    }
    ReportRecord r;
    r.workload_id = std::string(f[0]);
    r.config_hash = std::string(f[1]);
    r.ambit_latency_ns = parse_field<double>(f[2], line, "ambit_latency_ns");
    r.ambit_energy_nJ = parse_field<double>(f[3], line, "ambit_energy_nJ");
    r.baseline_latency_ns = parse_field<double>(f[4], line, "baseline_latency_ns");
    r.baseline_energy_nJ = parse_field<double>(f[5], line, "baseline_energy_nJ");
    r.throughput_ratio = parse_field<double>(f[6], line, "throughput_ratio");
    r.energy_ratio = parse_field<double>(f[7], line, "energy_ratio");
    r.bytes_moved_baseline =
        parse_field<std::uint64_t>(f[8], line, "bytes_moved_baseline");
    r.bytes_moved_pim = parse_field<std::uint64_t>(f[9], line, "bytes_moved_pim");
    out.push_back(std::move(r));
  }
  if (line == 0) throw InputError("report: empty CSV");
  return out;
}

std::vector<ReportRecord> parse_json(std::string_view text) {
  std::vector<ReportRecord> out;
  try {
    const auto arr = nlohmann::ordered_json::parse(text);
    if (!arr.is_array()) throw InputError("report: JSON root is not an array");
    for (const auto& o : arr) {
      ReportRecord r;
      r.workload_id = o.at("workload_id").get<std::string>();
      r.config_hash = o.at("config_hash").get<std::string>();
      r.ambit_latency_ns = read_number(o, "ambit_latency_ns");
      r.ambit_energy_nJ = read_number(o, "ambit_energy_nJ");
      r.baseline_latency_ns = read_number(o, "baseline_latency_ns");
      r.baseline_energy_nJ = read_number(o, "baseline_energy_nJ");
      r.throughput_ratio = read_number(o, "throughput_ratio");
      r.energy_ratio = read_number(o, "energy_ratio");
      r.bytes_moved_baseline = o.at("bytes_moved_baseline").get<std::uint64_t>();
      r.bytes_moved_pim = o.at("bytes_moved_pim").get<std::uint64_t>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return out;
}

void emit_report(std::span<const ReportRecord> records, ReportFormat format,
                 const std::string& path) {
  if (records.empty()) throw InputError("emit_report: no records");
  const std::string text =
      format == ReportFormat::kCsv ? to_csv(records) : to_json(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing report " + path);
}

std::vector<ReportRecord> read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') return parse_json(text);
  return parse_csv(text);
}

}  // namespace pimsim::bench

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

// Run configuration files.
//
// Grammar (one construct per line, leading/trailing blanks ignored):
//
//   line    := blank | comment | section | pair
//   comment := ('#' | ';') <anything>
//   section := '[' name ('.' name)* ']'
//   pair    := key '=' value
//   name, key := [A-Za-z0-9_-]+
//   value   := <rest of line>, trimmed; a ' #' starts a trailing comment
//
// Pairs before the first section belong to the root section "". Sections
// may repeat only when their full dotted names differ. Unknown keys are an
// error.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pimsim/ambit.hpp"
#include "pimsim/cost_model.hpp"
#include "pimsim/dram_model.hpp"
#include "pimsim/tesseract.hpp"

namespace pimsim::bench {

/// Parsed key=value file with per-key line tracking.
class ConfigFile {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
    bool used = false;
  };
  struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<Entry> entries;
  };

  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::string& path);

  const std::vector<Section>& sections() const { return sections_; }
  Section* find(std::string_view name);

  std::optional<std::string> take(std::string_view section,
                                  std::string_view key);
  /// Throws ConfigError naming the first unused key and its line.
  void reject_unused() const;

 private:
  std::vector<Section> sections_;
};

struct BulkBitwiseSpec {
  ambit::BitwiseOp op = ambit::BitwiseOp::kAnd;
  std::uint64_t size_bytes = 65536;
};

struct BitmapQuerySpec {
  std::uint64_t n_records = 65536;
  std::uint32_t n_categories = 2;
  std::string query_expr = "c0 AND c1";
};

struct BitserialScanSpec {
  std::uint64_t n_records = 10000;
  std::uint32_t bit_width = 8;
  std::uint64_t lt_constant = 0;
};

/// Either a file path or uniform random synthesis parameters.
struct GraphSource {
  std::string path;
  tesseract::VertexId vertices = 1000;
  std::uint64_t edges = 5000;
};

struct PageRankSpec {
  GraphSource graph;
  std::uint32_t iterations = 20;
  double damping = 0.85;
};

struct BfsSpec {
  GraphSource graph;
  tesseract::VertexId source = 0;
};

struct WorkloadSpec {
  std::string id;
  std::variant<BulkBitwiseSpec, BitmapQuerySpec, BitserialScanSpec,
               PageRankSpec, BfsSpec>
      kind;
};

struct RunConfig {
  dram::Geometry geometry;
  cost::CostParams cost;
  cost::BaselineModel baseline;
  tesseract::VaultConfig vaults;
  std::vector<WorkloadSpec> workloads;
  std::uint64_t seed = 1;
  std::string output_path;
  std::string format;
  /// Directory relative graph paths are resolved against.
  std::string base_dir;
  /// Testing knob: corrupt one result bit before the correctness gate.
  bool inject_mismatch = false;
  /// Run engines with their OpenMP executors instead of the serial ones.
  bool parallel = true;

  /// Throws ConfigError if any sub-configuration is invalid.
  void validate() const;
};

/// Builds a RunConfig from `[geometry]`, `[cost]`, `[baseline]`,
/// `[vaults]`, `[verify]` and one or more `[workload]` /
/// `[workload.<id>]` sections. Errors carry the line and field.
RunConfig parse_run_config(ConfigFile& file);
RunConfig load_run_config(const std::string& path);

/// Canonical text of every experiment parameter that affects a workload's
/// results (output destination excluded).
std::string canonical_text(const RunConfig& cfg, const WorkloadSpec& w);

/// 16 hex digits of FNV-1a 64 over canonical_text().
std::string config_hash(const RunConfig& cfg, const WorkloadSpec& w);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace pimsim::bench

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

// pimsim command line: run benchmark configs, generate inputs, merge reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pimsim/bench/config.hpp"
#include "pimsim/bench/report.hpp"
#include "pimsim/bench/runner.hpp"
#include "pimsim/bench/workloads.hpp"
#include "pimsim/common.hpp"
#include "pimsim/tesseract.hpp"

namespace {

using namespace pimsim;

enum Exit : int { kOk = 0, kConfig = 1, kMismatch = 2, kIo = 3 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::vector<std::string> inputs;
};

bench::ReportFormat pick_format(const std::string& flag,
                                const std::string& from_config,
                                const std::string& path) {
  for (const auto* name : {&flag, &from_config}) {
    if (name->empty()) continue;
    auto f = bench::parse_format(*name);
    if (!f) throw ConfigError("unknown report format `" + *name + "`");
    return *f;
  }
  return bench::format_for_path(path);
}

void write_records(const std::vector<ReportRecord>& records,
                   bench::ReportFormat format, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << (format == bench::ReportFormat::kCsv ? bench::to_csv(records)
                                                      : bench::to_json(records));
    return;
  }
  bench::emit_report(records, format, path);
}

int cmd_run(const Options& o) {
  auto cfg = bench::load_run_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  const std::string out = o.out.empty() ? cfg.output_path : o.out;
  const auto format = pick_format(o.format, cfg.format, out);
  write_records(bench::run(cfg), format, out);
  return kOk;
}

// Reads `[section] key` as an unsigned integer, keeping `fallback` if absent.
std::uint64_t read_u64(bench::ConfigFile& f, std::string_view section,
                       std::string_view key, std::uint64_t fallback) {
  auto v = f.take(section, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const auto x = std::stoull(*v, &used);
    if (used == v->size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("field `" + std::string(section) + "." + std::string(key) +
                    "`: expected a number, got `" + *v + "`");
}

std::ofstream open_output(const std::string& path) {
  if (path.empty()) throw ConfigError("--out is required");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

int cmd_gen_graph(const Options& o) {
  auto f = bench::ConfigFile::load(o.config);
  const auto seed = o.seed.value_or(read_u64(f, "", "seed", 1));
  const auto v = read_u64(f, "graph", "vertices", 1000);
  const auto e = read_u64(f, "graph", "edges", 5000);
  f.reject_unused();
  if (v == 0 || v > UINT32_MAX) throw ConfigError("graph.vertices out of range");
  const auto g = tesseract::generate_uniform(
      static_cast<tesseract::VertexId>(v), e, bench::derive_seed(seed, "graph"));
  auto out = open_output(o.out);
  tesseract::write_edge_list(out, g);
  if (!out.flush()) throw IoError("failed writing " + o.out);
  return kOk;
}

int cmd_gen_bitmaps(const Options& o) {
  auto f = bench::ConfigFile::load(o.config);
  const auto seed = o.seed.value_or(read_u64(f, "", "seed", 1));
  const auto records = read_u64(f, "bitmaps", "records", 65536);
  const auto categories = read_u64(f, "bitmaps", "categories", 2);
  f.reject_unused();
  if (records == 0) throw ConfigError("bitmaps.records must be > 0");
  if (categories == 0 || categories > UINT32_MAX) {
    throw ConfigError("bitmaps.categories out of range");
  }
  const auto index = bench::gen_bitmap_workload(
      records, static_cast<std::uint32_t>(categories),
      bench::derive_seed(seed, "bitmaps"));
  auto out = open_output(o.out);
  bench::write_bitmaps(out, index);
  if (!out.flush()) throw IoError("failed writing " + o.out);
  return kOk;
}

int cmd_report_merge(const Options& o) {
  std::vector<ReportRecord> all;
  for (const auto& path : o.inputs) {
    auto part = bench::read_report(path);
    all.insert(all.end(), part.begin(), part.end());
  }
  write_records(all, pick_format(o.format, "", o.out), o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pimsim: processing-in-memory simulator and benchmark harness"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", o.config, "config file");
    if (needs_config) c->required();
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("--out", o.out, "output path (stdout if omitted)");
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* run = app.add_subcommand("run", "run the workloads of a config");
  add_common(run, true);
  auto* gen_graph = app.add_subcommand("gen-graph", "write a synthetic edge list");
  add_common(gen_graph, true);
  auto* gen_bitmaps =
      app.add_subcommand("gen-bitmaps", "write one-hot category bitmaps");
  add_common(gen_bitmaps, true);
  auto* merge = app.add_subcommand("report-merge", "concatenate reports");
  add_common(merge, false);
  merge->add_option("inputs", o.inputs, "report files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*gen_graph) return cmd_gen_graph(o);
    if (*gen_bitmaps) return cmd_gen_bitmaps(o);
    return cmd_report_merge(o);
  } catch (const OracleMismatch& e) {
    std::cerr << "pimsim: oracle mismatch: " << e.what() << '\n';
    return kMismatch;
  } catch (const IoError& e) {
    std::cerr << "pimsim: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "pimsim: " << e.what() << '\n';
    return kConfig;
  }
}

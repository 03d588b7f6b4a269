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

#include "pimsim/bench/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pimsim/bench/program.hpp"

namespace pimsim::bench {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& why) {
  throw ConfigError("config line " + std::to_string(line) + ": " + why);
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile f;
  f.sections_.push_back({"", 0, {}});
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos
                                          ? std::string_view::npos
                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_line(lineno, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      std::size_t start = 0;
      while (true) {
        const auto dot = name.find('.', start);
        const auto part = name.substr(start, dot == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : dot - start);
        if (!valid_name(part)) {
          fail_line(lineno, "bad section name `" + std::string(name) + "`");
        }
        if (dot == std::string_view::npos) break;
        start = dot + 1;
      }
      if (f.find(name) != nullptr) {
        fail_line(lineno, "duplicate section [" + std::string(name) + "]");
      }
      f.sections_.push_back({std::string(name), lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_line(lineno, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    auto value = line.substr(eq + 1);
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = value.substr(0, hash);
    }
    value = trim(value);
    if (!valid_name(key)) fail_line(lineno, "bad key `" + std::string(key) + "`");
    auto& sec = f.sections_.back();
    for (const auto& e : sec.entries) {
      if (e.key == key) fail_line(lineno, "duplicate key `" + std::string(key) + "`");
    }
    sec.entries.push_back({std::string(key), std::string(value), lineno, false});
  }
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ConfigFile::Section* ConfigFile::find(std::string_view name) {
  for (auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::optional<std::string> ConfigFile::take(std::string_view section,
                                            std::string_view key) {
  auto* s = find(section);
  if (s == nullptr) return std::nullopt;
  for (auto& e : s->entries) {
    if (e.key == key) {
      e.used = true;
      return e.value;
    }
  }
  return std::nullopt;
}

void ConfigFile::reject_unused() const {
  for (const auto& s : sections_) {
    for (const auto& e : s.entries) {
      if (!e.used) {
        fail_line(e.line, "unknown field `" +
                              (s.name.empty() ? e.key : s.name + "." + e.key) +
                              "`");
      }
    }
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

// Typed field reader bound to one section.
class Fields {
 public:
  Fields(ConfigFile& f, std::string section)
      : f_(f), section_(std::move(section)) {}

  std::optional<std::string> raw(std::string_view key) {
    return f_.take(section_, key);
  }

  template <typename T>
  void read(std::string_view key, T& out) {
    auto v = raw(key);
    if (!v) return;
    out = convert<T>(key, *v);
  }

  std::size_t line_of(std::string_view key) {
    if (auto* s = f_.find(section_)) {
      for (const auto& e : s->entries) {
        if (e.key == key) return e.line;
      }
      return s->line;
    }
    return 0;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& why) {
    fail_line(line_of(key), "field `" + qualified(key) + "`: " + why);
  }

 private:
  std::string qualified(std::string_view key) const {
    return section_.empty() ? std::string(key)
                            : section_ + "." + std::string(key);
  }

  template <typename T>
  T convert(std::string_view key, const std::string& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      fail(key, "expected a boolean, got `" + v + "`");
    } else {
      T out{};
      const auto* b = v.data();
      const auto* e = v.data() + v.size();
      auto r = std::from_chars(b, e, out);
      if (r.ec != std::errc{} || r.ptr != e) {
        fail(key, "expected a number, got `" + v + "`");
      }
      return out;
    }
  }

  ConfigFile& f_;
  std::string section_;
};

GraphSource read_graph_source(Fields& f) {
  GraphSource g;
  f.read("graph", g.path);
  f.read("vertices", g.vertices);
  f.read("edges", g.edges);
  return g;
}

WorkloadSpec read_workload(ConfigFile& file, const std::string& section,
                           const std::string& id) {
  Fields f(file, section);
  WorkloadSpec w;
  w.id = id;
  std::string kind;
  f.read("kind", kind);
  if (kind == "bulk_bitwise") {
    BulkBitwiseSpec s;
    std::string op = "AND";
    f.read("op", op);
    auto parsed = ambit::parse_op(op);
    if (!parsed) f.fail("op", "unknown bitwise op `" + op + "`");
    s.op = *parsed;
    f.read("size_bytes", s.size_bytes);
    if (s.size_bytes == 0) f.fail("size_bytes", "must be > 0");
    w.kind = s;
  } else if (kind == "bitmap_query") {
    BitmapQuerySpec s;
    f.read("n_records", s.n_records);
    f.read("n_categories", s.n_categories);
    f.read("query", s.query_expr);
    if (s.n_records == 0) f.fail("n_records", "must be > 0");
    if (s.n_categories == 0) f.fail("n_categories", "must be > 0");
    try {
      parse_query(s.query_expr, s.n_categories);
    } catch (const InputError& e) {
      f.fail("query", e.what());
    }
    w.kind = s;
  } else if (kind == "bitserial_scan") {
    BitserialScanSpec s;
    f.read("n_records", s.n_records);
    f.read("bit_width", s.bit_width);
    std::string predicate = "LT 0";
    f.read("predicate", predicate);
    std::istringstream ps(predicate);
    std::string opname;
    std::string extra;
    if (!(ps >> opname >> s.lt_constant) || opname != "LT" || (ps >> extra)) {
      f.fail("predicate", "expected `LT <constant>`");
    }
    if (s.n_records == 0) f.fail("n_records", "must be > 0");
    if (s.bit_width < 1 || s.bit_width > kMaxScanBitWidth) {
      f.fail("bit_width", "must be in [1, " +
                              std::to_string(kMaxScanBitWidth) + "]");
    }
    if (s.lt_constant >= (std::uint64_t{1} << s.bit_width)) {
      f.fail("predicate", "constant must be < 2^bit_width");
    }
    w.kind = s;
  } else if (kind == "pagerank") {
    PageRankSpec s;
    s.graph = read_graph_source(f);
    f.read("iterations", s.iterations);
    f.read("damping", s.damping);
    if (s.iterations < 1) f.fail("iterations", "must be >= 1");
    if (!(s.damping > 0 && s.damping < 1)) f.fail("damping", "must be in (0, 1)");
    w.kind = s;
  } else if (kind == "bfs") {
    BfsSpec s;
    s.graph = read_graph_source(f);
    f.read("source", s.source);
    w.kind = s;
  } else {
    f.fail("kind", kind.empty() ? "missing workload kind"
                                : "unknown workload kind `" + kind + "`");
  }
  if (w.id.empty()) w.id = kind;
  return w;
}

}  // namespace

void RunConfig::validate() const {
  geometry.validate();
  cost.validate();
  baseline.validate();
  vaults.validate();
  if (workloads.empty()) throw ConfigError("config: no workload section");
}

RunConfig parse_run_config(ConfigFile& file) {
  RunConfig cfg;
  {
    Fields root(file, "");
    root.read("seed", cfg.seed);
    root.read("output", cfg.output_path);
    root.read("format", cfg.format);
    root.read("parallel", cfg.parallel);
  }
  {
    Fields g(file, "geometry");
    g.read("banks", cfg.geometry.banks);
    g.read("subarrays_per_bank", cfg.geometry.subarrays_per_bank);
    g.read("rows_per_subarray", cfg.geometry.rows_per_subarray);
    g.read("row_width_bits", cfg.geometry.row_width_bits);
    g.read("dcc_pairs", cfg.geometry.dcc_pairs);
  }
  {
    Fields c(file, "cost");
    auto& p = cfg.cost;
    c.read("tRAS_ns", p.tRAS_ns);
    c.read("tRP_ns", p.tRP_ns);
    c.read("tRCD_ns", p.tRCD_ns);
    c.read("e_act_nJ", p.e_act_nJ);
    c.read("e_pre_nJ", p.e_pre_nJ);
    c.read("e_tra_factor", p.e_tra_factor);
    c.read("channel_bw_GBps", p.channel_bw_GBps);
    c.read("channel_energy_pJ_per_byte", p.channel_energy_pJ_per_byte);
    c.read("internal_energy_pJ_per_byte", p.internal_energy_pJ_per_byte);
    c.read("query_overhead_ns", p.query_overhead_ns);
    c.read("banks_parallel", p.banks_parallel);
  }
  {
    Fields b(file, "baseline");
    auto& m = cfg.baseline;
    std::string preset;
    b.read("preset", preset);
    if (preset == "skylake" || preset.empty()) {
      m.kind = cost::BaselineKind::kCpuStream;
    } else if (preset == "gtx745") {
      m.kind = cost::BaselineKind::kCpuStream;
      m.bandwidth_scale = 28.8 / 12.8;
    } else if (preset == "hmc_logic") {
      m.kind = cost::BaselineKind::kLogicLayer;
    } else {
      b.fail("preset", "unknown preset `" + preset + "`");
    }
    std::string kind;
    b.read("kind", kind);
    if (kind == "cpu_stream") {
      m.kind = cost::BaselineKind::kCpuStream;
    } else if (kind == "logic_layer") {
      m.kind = cost::BaselineKind::kLogicLayer;
    } else if (!kind.empty()) {
      b.fail("kind", "expected cpu_stream or logic_layer");
    }
    b.read("internal_bw_multiplier", m.internal_bw_multiplier);
    b.read("bandwidth_scale", m.bandwidth_scale);
  }
  {
    Fields v(file, "vaults");
    v.read("n_vaults", cfg.vaults.n_vaults);
    v.read("queue_capacity", cfg.vaults.queue_capacity);
    v.read("payload_limit_bytes", cfg.vaults.payload_limit_bytes);
    v.read("header_bytes", cfg.vaults.header_bytes);
  }
  {
    Fields v(file, "verify");
    v.read("inject_mismatch", cfg.inject_mismatch);
  }

  static const std::vector<std::string> kFixed = {
      "", "geometry", "cost", "baseline", "vaults", "verify"};
  for (const auto& s : file.sections()) {
    if (std::find(kFixed.begin(), kFixed.end(), s.name) != kFixed.end()) {
      continue;
    }
    if (s.name == "workload") {
      cfg.workloads.push_back(read_workload(file, s.name, ""));
    } else if (s.name.rfind("workload.", 0) == 0) {
      cfg.workloads.push_back(read_workload(file, s.name, s.name.substr(9)));
    } else {
      fail_line(s.line, "unknown section [" + s.name + "]");
    }
  }
  file.reject_unused();
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  ConfigFile f = ConfigFile::load(path);
  RunConfig cfg = parse_run_config(f);
  const auto slash = path.find_last_of('/');
  cfg.base_dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return cfg;
}

std::string canonical_text(const RunConfig& cfg, const WorkloadSpec& w) {
  std::ostringstream o;
  const auto& g = cfg.geometry;
  const auto& p = cfg.cost;
  const auto& m = cfg.baseline;
  const auto& v = cfg.vaults;
  const auto d = [](double x) { return format_double(x); };
  o << "seed=" << cfg.seed << '\n'
    << "geometry.banks=" << g.banks << '\n'
    << "geometry.subarrays_per_bank=" << g.subarrays_per_bank << '\n'
    << "geometry.rows_per_subarray=" << g.rows_per_subarray << '\n'
    << "geometry.row_width_bits=" << g.row_width_bits << '\n'
    << "geometry.dcc_pairs=" << g.dcc_pairs << '\n'
    << "cost.tRAS_ns=" << d(p.tRAS_ns) << '\n'
    << "cost.tRP_ns=" << d(p.tRP_ns) << '\n'
    << "cost.tRCD_ns=" << d(p.tRCD_ns) << '\n'
    << "cost.e_act_nJ=" << d(p.e_act_nJ) << '\n'
    << "cost.e_pre_nJ=" << d(p.e_pre_nJ) << '\n'
    << "cost.e_tra_factor=" << d(p.e_tra_factor) << '\n'
    << "cost.channel_bw_GBps=" << d(p.channel_bw_GBps) << '\n'
    << "cost.channel_energy_pJ_per_byte=" << d(p.channel_energy_pJ_per_byte)
    << '\n'
    << "cost.internal_energy_pJ_per_byte=" << d(p.internal_energy_pJ_per_byte)
    << '\n'
    << "cost.query_overhead_ns=" << d(p.query_overhead_ns) << '\n'
    << "cost.banks_parallel=" << p.banks_parallel << '\n'
    << "baseline.kind="
    << (m.kind == cost::BaselineKind::kCpuStream ? "cpu_stream" : "logic_layer")
    << '\n'
    << "baseline.internal_bw_multiplier=" << d(m.internal_bw_multiplier) << '\n'
    << "baseline.bandwidth_scale=" << d(m.bandwidth_scale) << '\n'
    << "vaults.n_vaults=" << v.n_vaults << '\n'
    << "vaults.queue_capacity=" << v.queue_capacity << '\n'
    << "vaults.payload_limit_bytes=" << v.payload_limit_bytes << '\n'
    << "vaults.header_bytes=" << v.header_bytes << '\n'
    << "verify.inject_mismatch=" << cfg.inject_mismatch << '\n'
    << "workload.id=" << w.id << '\n';
  const auto graph = [&](const GraphSource& s) {
    o << "workload.graph=" << s.path << '\n'
      << "workload.vertices=" << s.vertices << '\n'
      << "workload.edges=" << s.edges << '\n';
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BulkBitwiseSpec>) {
          o << "workload.kind=bulk_bitwise\n"
            << "workload.op=" << ambit::op_name(s.op) << '\n'
            << "workload.size_bytes=" << s.size_bytes << '\n';
        } else if constexpr (std::is_same_v<T, BitmapQuerySpec>) {
          o << "workload.kind=bitmap_query\n"
            << "workload.n_records=" << s.n_records << '\n'
            << "workload.n_categories=" << s.n_categories << '\n'
            << "workload.query=" << s.query_expr << '\n';
        } else if constexpr (std::is_same_v<T, BitserialScanSpec>) {
          o << "workload.kind=bitserial_scan\n"
            << "workload.n_records=" << s.n_records << '\n'
            << "workload.bit_width=" << s.bit_width << '\n'
            << "workload.predicate=LT " << s.lt_constant << '\n';
        } else if constexpr (std::is_same_v<T, PageRankSpec>) {
          o << "workload.kind=pagerank\n";
          graph(s.graph);
          o << "workload.iterations=" << s.iterations << '\n'
            << "workload.damping=" << d(s.damping) << '\n';
        } else {
          o << "workload.kind=bfs\n";
          graph(s.graph);
          o << "workload.source=" << s.source << '\n';
        }
      },
      w.kind);
  return o.str();
}

std::string config_hash(const RunConfig& cfg, const WorkloadSpec& w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text(cfg, w)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pimsim::bench

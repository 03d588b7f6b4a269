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

#include "pimsim/ambit.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pimsim::ambit {

using dram::DramCommand;
using dram::RowAddress;
using dram::SubarrayId;
namespace layout = dram::layout;

std::string_view op_name(BitwiseOp op) {
  switch (op) {
    case BitwiseOp::kNot: return "NOT";
    case BitwiseOp::kAnd: return "AND";
    case BitwiseOp::kOr: return "OR";
    case BitwiseOp::kNand: return "NAND";
    case BitwiseOp::kNor: return "NOR";
    case BitwiseOp::kXor: return "XOR";
    case BitwiseOp::kXnor: return "XNOR";
  }
  return "?";
}

std::optional<BitwiseOp> parse_op(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  for (auto op : kAllOps) {
    if (op_name(op) == upper) return op;
  }
  return std::nullopt;
}

BitRow evaluate(BitwiseOp op, const BitRow& a, const BitRow* b) {
  switch (op) {
    case BitwiseOp::kNot: return ~a;
    case BitwiseOp::kAnd: return a & *b;
    case BitwiseOp::kOr: return a | *b;
    case BitwiseOp::kNand: return ~(a & *b);
    case BitwiseOp::kNor: return ~(a | *b);
    case BitwiseOp::kXor: return a ^ *b;
    case BitwiseOp::kXnor: return ~(a ^ *b);
  }
  return a;
}

namespace {

class TraceBuilder {
 public:
  explicit TraceBuilder(SubarrayId where) : where_(where) {}

  void act(std::uint32_t row) {
    cmds_.push_back(dram::cmd::Activate{{where_.bank, where_.subarray, row}});
  }
  void pre() { cmds_.push_back(dram::cmd::Precharge{where_}); }
  void aap(std::uint32_t src, std::uint32_t dst) {
    act(src);
    act(dst);
    pre();
  }
  void tra(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    cmds_.push_back(dram::cmd::ActivateTriple{where_, {a, b, c}});
  }
  void dcc(std::uint32_t src, std::uint32_t pair) {
    cmds_.push_back(dram::cmd::ActivateDcc{where_, src, pair});
  }

  // Leaves maj(T0, T1, T2) = a AND/OR b in T0..T2 and the sense amps.
  void and_or_core(std::uint32_t a, std::uint32_t b, bool is_or) {
    aap(a, layout::kT0);
    aap(b, layout::kT1);
    aap(is_or ? layout::kC1 : layout::kC0, layout::kT2);
    tra(layout::kT0, layout::kT1, layout::kT2);
  }

  // dst := NOT src through DCC pair 0.
  void negate(std::uint32_t src, std::uint32_t dst) {
    dcc(src, 0);
    pre();
    aap(layout::kDcc0Neg, dst);
  }

  // T0..T2 and T3 end up holding (a AND NOT b) OR (NOT a AND b) after the
  // final triple activation; the sense amps hold the same value.
  void xor_core(std::uint32_t a, std::uint32_t b) {
    dcc(b, 0);
    pre();
    aap(a, layout::kT0);
    aap(layout::kDcc0Neg, layout::kT1);
    aap(layout::kC0, layout::kT2);
    tra(layout::kT0, layout::kT1, layout::kT2);
    act(layout::kT3);
    pre();
    dcc(a, 0);
    pre();
    aap(layout::kDcc0Neg, layout::kT0);
    aap(b, layout::kT1);
    aap(layout::kC0, layout::kT2);
    tra(layout::kT0, layout::kT1, layout::kT2);
    pre();
    aap(layout::kC1, layout::kT2);
    tra(layout::kT0, layout::kT2, layout::kT3);
  }

  std::vector<DramCommand> take() { return std::move(cmds_); }

 private:
  SubarrayId where_;
  std::vector<DramCommand> cmds_;
};

void require_data_row(const dram::Geometry& g, const RowAddress& r,
                      const char* what) {
  if (r.bank >= g.banks || r.subarray >= g.subarrays_per_bank ||
      r.row >= g.rows_per_subarray) {
    throw CompileError(std::string(what) + " " + dram::to_string(r) +
                       " out of range");
  }
  const auto role = dram::role_of(g, r.row);
  if (role != dram::RowRole::kData) {
    throw CompileError(std::string(what) + " " + dram::to_string(r) +
                       " aliases reserved row " +
                       std::string(dram::role_name(role)));
  }
}

bool same_subarray(const RowAddress& x, const RowAddress& y) {
  return x.subarray_id() == y.subarray_id();
}

}  // namespace

CommandTrace compile(BitwiseOp op, const dram::Geometry& g, const RowAddress& a,
                     const std::optional<RowAddress>& b, const RowAddress& dst) {
  if (is_unary(op) == b.has_value()) {
    throw CompileError(std::string(op_name(op)) +
                       (b ? " takes one operand" : " takes two operands"));
  }
  require_data_row(g, a, "operand");
  if (b) require_data_row(g, *b, "operand");
  require_data_row(g, dst, "destination");
  if (!same_subarray(a, dst) || (b && !same_subarray(*b, dst))) {
    throw PlacementError(std::string(op_name(op)) +
                         ": operands must share the destination subarray " +
                         dram::to_string(dst));
  }

  TraceBuilder tb(dst.subarray_id());
  const std::uint32_t ra = a.row;
  const std::uint32_t rb = b ? b->row : 0;
  switch (op) {
    case BitwiseOp::kNot:
      tb.negate(ra, dst.row);
      break;
    case BitwiseOp::kAnd:
    case BitwiseOp::kOr:
      tb.and_or_core(ra, rb, op == BitwiseOp::kOr);
      tb.act(dst.row);
      tb.pre();
      break;
    case BitwiseOp::kNand:
    case BitwiseOp::kNor:
      tb.and_or_core(ra, rb, op == BitwiseOp::kNor);
      tb.pre();
      tb.negate(layout::kT0, dst.row);
      break;
    case BitwiseOp::kXor:
      tb.xor_core(ra, rb);
      tb.act(dst.row);
      tb.pre();
      break;
    case BitwiseOp::kXnor:
      tb.xor_core(ra, rb);
      tb.pre();
      tb.negate(layout::kT3, dst.row);
      break;
  }

  CommandTrace t;
  t.commands = tb.take();
  t.op = op;
  t.operands.push_back(a);
  if (b) t.operands.push_back(*b);
  t.destination = dst;
  t.result_bits = g.row_width_bits;
  return t;
}

CommandTrace rowclone_copy(const dram::Geometry& g, const RowAddress& src,
                           const RowAddress& dst) {
  if (src.bank >= g.banks || src.subarray >= g.subarrays_per_bank ||
      src.row >= g.rows_per_subarray) {
    throw CompileError("copy source " + dram::to_string(src) + " out of range");
  }
  require_data_row(g, dst, "copy destination");

  CommandTrace t;
  t.operands.push_back(src);
  t.destination = dst;
  t.result_bits = g.row_width_bits;
  if (src == dst) return t;

  if (same_subarray(src, dst)) {
    TraceBuilder tb(dst.subarray_id());
    tb.aap(src.row, dst.row);
    t.commands = tb.take();
    return t;
  }
  const dram::ColumnRange all{0, g.row_words()};
  t.commands.push_back(dram::cmd::Activate{src});
  t.commands.push_back(dram::cmd::Read{src.subarray_id(), all});
  t.commands.push_back(dram::cmd::Precharge{src.subarray_id()});
  t.commands.push_back(dram::cmd::Activate{dst});
  t.commands.push_back(dram::cmd::Write{dst.subarray_id(), all, std::nullopt});
  t.commands.push_back(dram::cmd::Precharge{dst.subarray_id()});
  return t;
}

TraceShape shape_of(const CommandTrace& t) {
  TraceShape s;
  s.commands = t.commands.size();
  bool open = false;
  std::size_t acts = 0;
  bool led_by_plain = false;
  for (const auto& c : t.commands) {
    if (dram::is_activation(c)) {
      if (!open) {
        open = true;
        acts = 0;
        led_by_plain = std::holds_alternative<dram::cmd::Activate>(c);
      }
      ++acts;
      if (std::holds_alternative<dram::cmd::ActivateTriple>(c)) {
        ++s.triple_activations;
      }
    } else if (std::holds_alternative<dram::cmd::Precharge>(c)) {
      if (open) {
        ++s.activation_groups;
        if (acts >= 2) {
          ++s.pair_groups;
          if (led_by_plain) ++s.copy_aaps;
        } else {
          ++s.lone_groups;
        }
      }
      open = false;
    } else {
      ++s.bursts;
    }
  }
  return s;
}

namespace {

std::string row_of(const SubarrayId& w, std::uint32_t row) {
  return std::to_string(w.bank) + "/" + std::to_string(w.subarray) + "/" +
         std::to_string(row);
}

}  // namespace

std::string dump(const CommandTrace& t) {
  std::ostringstream out;
  const auto& cs = t.commands;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i + 2 < cs.size()) {
      const auto* a1 = std::get_if<dram::cmd::Activate>(&cs[i]);
      const auto* a2 = std::get_if<dram::cmd::Activate>(&cs[i + 1]);
      if (a1 && a2 && std::holds_alternative<dram::cmd::Precharge>(cs[i + 2])) {
        out << "AAP " << dram::to_string(a1->row) << ' '
            << dram::to_string(a2->row) << '\n';
        i += 2;
        continue;
      }
    }
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, dram::cmd::Activate>) {
            out << "ACT " << dram::to_string(x.row);
          } else if constexpr (std::is_same_v<T, dram::cmd::ActivateTriple>) {
            out << "TRA " << row_of(x.where, x.rows[0]) << ' '
                << row_of(x.where, x.rows[1]) << ' '
                << row_of(x.where, x.rows[2]);
          } else if constexpr (std::is_same_v<T, dram::cmd::ActivateDcc>) {
            out << "DCC " << row_of(x.where, x.src) << ' ' << x.pair;
          } else if constexpr (std::is_same_v<T, dram::cmd::Precharge>) {
            out << "PRE";
          } else if constexpr (std::is_same_v<T, dram::cmd::Read>) {
            out << "RD " << x.where.bank << '/' << x.where.subarray << ' '
                << x.cols.first_word << ' ' << x.cols.word_count;
          } else {
            out << "WR " << x.where.bank << '/' << x.where.subarray << ' '
                << x.cols.first_word << ' ' << x.cols.word_count;
          }
        },
        cs[i]);
    out << '\n';
  }
  return out.str();
}

namespace {

template <typename Fn>
void with_command_index(std::size_t i, Fn&& fn) {
  try {
    fn();
  } catch (const ProtocolError& e) {
    throw ProtocolError("command " + std::to_string(i) + ": " + e.what());
  } catch (const RoleError& e) {
    throw RoleError("command " + std::to_string(i) + ": " + e.what());
  }
}

}  // namespace

void execute(const CommandTrace& t, dram::Device& device) {
  for (std::size_t i = 0; i < t.commands.size(); ++i) {
    with_command_index(i, [&] { device.apply(t.commands[i]); });
  }
}

dram::SubarrayState execute(const CommandTrace& t, dram::SubarrayState state,
                            const dram::Geometry& g, SubarrayId id) {
  dram::BusLatch bus;
  for (std::size_t i = 0; i < t.commands.size(); ++i) {
    if (dram::target_of(t.commands[i]) != id) {
      throw PlacementError("command " + std::to_string(i) +
                           " targets another subarray");
    }
    with_command_index(i,
                       [&] { dram::apply(state, g, t.commands[i], bus); });
  }
  return state;
}

void BulkVector::validate(const dram::Geometry& g) const {
  std::uint64_t next = 0;
  for (const auto& c : chunks) {
    if (c.row.bank >= g.banks || c.row.subarray >= g.subarrays_per_bank ||
        c.row.row >= g.rows_per_subarray) {
      throw PlacementError("chunk row " + dram::to_string(c.row) +
                           " out of range");
    }
    if (dram::role_of(g, c.row.row) != dram::RowRole::kData) {
      throw PlacementError("chunk row " + dram::to_string(c.row) +
                           " is not a Data row");
    }
    if (c.bit_offset != next || c.bit_count == 0 ||
        c.bit_count > g.row_width_bits) {
      throw PlacementError("chunks do not tile the vector");
    }
    next += c.bit_count;
  }
  if (next != length_bits) {
    throw PlacementError("chunks do not cover the vector");
  }
  auto rows = std::vector<RowAddress>();
  for (const auto& c : chunks) rows.push_back(c.row);
  std::sort(rows.begin(), rows.end());
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
    throw PlacementError("two chunks share a row");
  }
}

std::uint64_t aligned_capacity_bits(const dram::Geometry& g,
                                    std::uint32_t n_vectors) {
  if (n_vectors == 0) return 0;
  const std::uint64_t levels = g.data_rows_per_subarray() / n_vectors;
  return levels * g.subarrays_per_bank * g.banks * g.row_width_bits;
}

std::vector<BulkVector> place_aligned(const dram::Geometry& g,
                                      std::uint64_t length_bits,
                                      std::uint32_t n_vectors) {
  if (length_bits > aligned_capacity_bits(g, n_vectors)) {
    throw PlacementError("cannot place " + std::to_string(n_vectors) +
                         " vectors of " + std::to_string(length_bits) +
                         " bits; capacity is " +
                         std::to_string(aligned_capacity_bits(g, n_vectors)));
  }
  std::vector<BulkVector> out(n_vectors);
  const std::uint64_t width = g.row_width_bits;
  const std::uint64_t n_chunks = (length_bits + width - 1) / width;
  for (std::uint32_t j = 0; j < n_vectors; ++j) {
    out[j].length_bits = length_bits;
    out[j].chunks.reserve(n_chunks);
  }
  for (std::uint64_t i = 0; i < n_chunks; ++i) {
    const std::uint64_t wave = i / g.banks;
    const auto bank = static_cast<std::uint32_t>(i % g.banks);
    const auto sa = static_cast<std::uint32_t>(wave % g.subarrays_per_bank);
    const std::uint64_t level = wave / g.subarrays_per_bank;
    const std::uint64_t offset = i * width;
    const auto count =
        static_cast<std::uint32_t>(std::min(width, length_bits - offset));
    for (std::uint32_t j = 0; j < n_vectors; ++j) {
      const auto row =
          static_cast<std::uint32_t>(g.reserved_rows() + level * n_vectors + j);
      out[j].chunks.push_back({{bank, sa, row}, offset, count});
    }
  }
  return out;
}

void store(dram::Device& device, const BulkVector& v, const BitRow& bits) {
  if (bits.width() != v.length_bits) {
    throw PlacementError("store: width mismatch");
  }
  for (const auto& c : v.chunks) {
    BitRow row = device.row(c.row);
    row.copy_bits(bits, c.bit_offset, 0, c.bit_count);
    device.load_row(c.row, row);
  }
}

BitRow load(const dram::Device& device, const BulkVector& v) {
  BitRow out(v.length_bits);
  for (const auto& c : v.chunks) {
    out.copy_bits(device.row(c.row), 0, c.bit_offset, c.bit_count);
  }
  return out;
}

namespace {

void check_aligned(const BulkVector& x, const BulkVector& dst) {
  if (x.length_bits != dst.length_bits ||
      x.chunks.size() != dst.chunks.size()) {
    throw PlacementError("bulk operands differ in length or chunking");
  }
  for (std::size_t i = 0; i < x.chunks.size(); ++i) {
    const auto& c = x.chunks[i];
    const auto& d = dst.chunks[i];
    if (c.bit_offset != d.bit_offset || c.bit_count != d.bit_count ||
        c.row.subarray_id() != d.row.subarray_id()) {
      throw PlacementError("bulk operands misaligned at chunk " +
                           std::to_string(i));
    }
  }
}

}  // namespace

std::vector<CommandTrace> bulk_execute(BitwiseOp op, const dram::Geometry& g,
                                       const BulkVector& a,
                                       const BulkVector* b,
                                       const BulkVector& dst) {
  if (is_unary(op) != (b == nullptr)) {
    throw CompileError(std::string(op_name(op)) + ": wrong operand count");
  }
  check_aligned(a, dst);
  if (b) check_aligned(*b, dst);
  std::vector<CommandTrace> traces;
  traces.reserve(dst.chunks.size());
  for (std::size_t i = 0; i < dst.chunks.size(); ++i) {
    std::optional<RowAddress> rb;
    if (b) rb = b->chunks[i].row;
    auto t = compile(op, g, a.chunks[i].row, rb, dst.chunks[i].row);
    t.result_bits = dst.chunks[i].bit_count;
    t.parallel_eligible = true;
    traces.push_back(std::move(t));
  }
  return traces;
}

std::vector<CommandTrace> bulk_copy(const dram::Geometry& g,
                                    const BulkVector& src,
                                    const BulkVector& dst) {
  if (src.length_bits != dst.length_bits ||
      src.chunks.size() != dst.chunks.size()) {
    throw PlacementError("bulk copy operands differ in length or chunking");
  }
  std::vector<CommandTrace> traces;
  for (std::size_t i = 0; i < dst.chunks.size(); ++i) {
    if (src.chunks[i].bit_count != dst.chunks[i].bit_count) {
      throw PlacementError("bulk copy misaligned at chunk " +
                           std::to_string(i));
    }
    auto t = rowclone_copy(g, src.chunks[i].row, dst.chunks[i].row);
    t.result_bits = dst.chunks[i].bit_count;
    t.parallel_eligible = shape_of(t).bursts == 0;
    traces.push_back(std::move(t));
  }
  return traces;
}

std::vector<CommandTrace> bulk_fill(const dram::Geometry& g,
                                    const BulkVector& dst, bool value) {
  std::vector<CommandTrace> traces;
  for (const auto& c : dst.chunks) {
    RowAddress src = c.row;
    src.row = value ? layout::kC1 : layout::kC0;
    auto t = rowclone_copy(g, src, c.row);
    t.result_bits = c.bit_count;
    t.parallel_eligible = true;
    traces.push_back(std::move(t));
  }
  return traces;
}

void execute_serial(std::span<const CommandTrace> traces,
                    dram::Device& device) {
  for (const auto& t : traces) execute(t, device);
}

void execute_parallel(std::span<const CommandTrace> traces,
                      dram::Device& device) {
  const std::uint32_t banks = device.geometry().banks;
  std::vector<std::vector<std::size_t>> per_bank(banks);
  std::vector<std::exception_ptr> errors(banks);

  std::size_t i = 0;
  while (i < traces.size()) {
    if (!traces[i].parallel_eligible) {
      execute(traces[i], device);
      ++i;
      continue;
    }
    for (auto& v : per_bank) v.clear();
    std::size_t j = i;
    for (; j < traces.size() && traces[j].parallel_eligible; ++j) {
      per_bank[traces[j].destination.bank].push_back(j);
    }
    // Eligible traces touch only their own bank, so bank tasks share no
    // mutable state.
    const auto n = static_cast<std::int64_t>(banks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < n; ++b) {
      try {
        for (auto k : per_bank[static_cast<std::size_t>(b)]) {
          execute(traces[k], device);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(b)] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    i = j;
  }
}

}  // namespace pimsim::ambit

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

#include "pimsim/dram_model.hpp"

#include <algorithm>
#include <sstream>

namespace pimsim::dram {

void Geometry::validate() const {
  if (banks < 1 || subarrays_per_bank < 1 || rows_per_subarray < 1 ||
      row_width_bits < 1) {
    throw ConfigError("geometry: all counts must be >= 1");
  }
  if (row_width_bits % 64 != 0) {
    throw ConfigError("geometry: row_width_bits must be a multiple of 64, got " +
                      std::to_string(row_width_bits));
  }
  if (rows_per_subarray < kMinRowsPerSubarray) {
    throw ConfigError("geometry: rows_per_subarray must be >= " +
                      std::to_string(kMinRowsPerSubarray) + ", got " +
                      std::to_string(rows_per_subarray));
  }
  if (dcc_pairs < 1 || dcc_pairs > 2) {
    throw ConfigError("geometry: dcc_pairs must be 1 or 2");
  }
}

std::string to_string(const RowAddress& a) {
  return std::to_string(a.bank) + "/" + std::to_string(a.subarray) + "/" +
         std::to_string(a.row);
}

RowRole role_of(const Geometry& g, std::uint32_t row) {
  switch (row) {
    case layout::kT0: return RowRole::kT0;
    case layout::kT1: return RowRole::kT1;
    case layout::kT2: return RowRole::kT2;
    case layout::kT3: return RowRole::kT3;
    case layout::kC0: return RowRole::kControl0;
    case layout::kC1: return RowRole::kControl1;
    case layout::kDcc0: return RowRole::kDcc0;
    case layout::kDcc0Neg: return RowRole::kDcc0Neg;
    default: break;
  }
  if (g.dcc_pairs >= 2) {
    if (row == layout::kDcc1) return RowRole::kDcc1;
    if (row == layout::kDcc1Neg) return RowRole::kDcc1Neg;
  }
  return RowRole::kData;
}

std::string_view role_name(RowRole role) {
  switch (role) {
    case RowRole::kData: return "Data";
    case RowRole::kT0: return "T0";
    case RowRole::kT1: return "T1";
    case RowRole::kT2: return "T2";
    case RowRole::kT3: return "T3";
    case RowRole::kControl0: return "C0";
    case RowRole::kControl1: return "C1";
    case RowRole::kDcc0: return "DCC0";
    case RowRole::kDcc0Neg: return "DCC0N";
    case RowRole::kDcc1: return "DCC1";
    case RowRole::kDcc1Neg: return "DCC1N";
  }
  return "?";
}

DccPair dcc_pair(std::uint32_t index) {
  return index == 0 ? DccPair{layout::kDcc0, layout::kDcc0Neg}
                    : DccPair{layout::kDcc1, layout::kDcc1Neg};
}

SubarrayId target_of(const DramCommand& c) {
  return std::visit(
      [](const auto& x) -> SubarrayId {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, cmd::Activate>) {
          return x.row.subarray_id();
        } else {
          return x.where;
        }
      },
      c);
}

bool is_activation(const DramCommand& c) {
  return std::holds_alternative<cmd::Activate>(c) ||
         std::holds_alternative<cmd::ActivateTriple>(c) ||
         std::holds_alternative<cmd::ActivateDcc>(c);
}

namespace {

std::string sa_prefix(SubarrayId id) {
  return std::to_string(id.bank) + "/" + std::to_string(id.subarray);
}

std::string row_name(SubarrayId id, std::uint32_t row) {
  return sa_prefix(id) + "/" + std::to_string(row);
}

}  // namespace

std::string to_string(const DramCommand& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, cmd::Activate>) {
          return "ACT " + to_string(x.row);
        } else if constexpr (std::is_same_v<T, cmd::ActivateTriple>) {
          return "TRA " + row_name(x.where, x.rows[0]) + " " +
                 row_name(x.where, x.rows[1]) + " " +
                 row_name(x.where, x.rows[2]);
        } else if constexpr (std::is_same_v<T, cmd::ActivateDcc>) {
          return "DCC " + row_name(x.where, x.src) + " " +
                 std::to_string(x.pair);
        } else if constexpr (std::is_same_v<T, cmd::Precharge>) {
          return "PRE " + sa_prefix(x.where);
        } else if constexpr (std::is_same_v<T, cmd::Read>) {
          return "RD " + sa_prefix(x.where) + " " +
                 std::to_string(x.cols.first_word) + " " +
                 std::to_string(x.cols.word_count);
        } else {
          return "WR " + sa_prefix(x.where) + " " +
                 std::to_string(x.cols.first_word) + " " +
                 std::to_string(x.cols.word_count) +
                 (x.data ? " imm" : " bus");
        }
      },
      c);
}

std::uint64_t row_seed(std::uint64_t seed, const RowAddress& a) {
  std::uint64_t s = seed;
  s = splitmix64(s) ^ a.bank;
  s = splitmix64(s) ^ a.subarray;
  s = splitmix64(s) ^ a.row;
  return splitmix64(s);
}

SubarrayState init_subarray(const Geometry& g, std::uint64_t seed,
                            SubarrayId id) {
  g.validate();
  SubarrayState s;
  s.rows.reserve(g.rows_per_subarray);
  for (std::uint32_t r = 0; r < g.rows_per_subarray; ++r) {
    const RowRole role = role_of(g, r);
    if (role == RowRole::kControl1 || role == RowRole::kDcc0Neg ||
        role == RowRole::kDcc1Neg) {
      s.rows.emplace_back(g.row_width_bits, true);
    } else {
      s.rows.emplace_back(g.row_width_bits, false);
    }
    if (role == RowRole::kData) {
      SplitMix64 rng(row_seed(seed, {id.bank, id.subarray, r}));
      s.rows.back().randomize(rng);
    }
  }
  s.senseamps = BitRow(g.row_width_bits);
  return s;
}

namespace {

[[noreturn]] void protocol_fail(const DramCommand& c, const std::string& why) {
  throw ProtocolError(to_string(c) + ": " + why);
}

[[noreturn]] void role_fail(const DramCommand& c, const std::string& why) {
  throw RoleError(to_string(c) + ": " + why);
}

void check_row(const Geometry& g, const DramCommand& c, std::uint32_t row) {
  if (row >= g.rows_per_subarray) protocol_fail(c, "row out of range");
}

// Drives `value` into `row`. Writing either contact of a dual-contact-cell
// row updates the other with the complement.
void write_row(SubarrayState& s, const Geometry& g, const DramCommand& c,
               std::uint32_t row, const BitRow& value) {
  const RowRole role = role_of(g, row);
  if (is_control(role)) {
    role_fail(c, "would overwrite control row " +
                     std::string(role_name(role)));
  }
  switch (role) {
    case RowRole::kDcc0:
    case RowRole::kDcc1:
      s.rows[row] = value;
      s.rows[row + 1] = ~value;
      break;
    case RowRole::kDcc0Neg:
    case RowRole::kDcc1Neg:
      s.rows[row] = value;
      s.rows[row - 1] = ~value;
      break;
    default:
      s.rows[row] = value;
  }
}

void check_columns(const Geometry& g, const DramCommand& c,
                   const ColumnRange& cols) {
  if (cols.word_count == 0 ||
      static_cast<std::uint64_t>(cols.first_word) + cols.word_count >
          g.row_words()) {
    protocol_fail(c, "column range out of bounds");
  }
}

}  // namespace

void apply(SubarrayState& s, const Geometry& g, const DramCommand& c,
           BusLatch& bus) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, cmd::Activate>) {
          const std::uint32_t r = x.row.row;
          check_row(g, c, r);
          if (!s.senseamp_valid) {
            s.senseamps = s.rows[r];
            s.senseamp_valid = true;
            s.open_rows.assign(1, r);
          } else {
            // Back-to-back activation: the latched sense amps overwrite the
            // newly connected row (RowClone fast-parallel-mode copy).
            write_row(s, g, c, r, s.senseamps);
            s.open_rows.push_back(r);
          }
        } else if constexpr (std::is_same_v<T, cmd::ActivateTriple>) {
          if (s.senseamp_valid) protocol_fail(c, "sense amps not precharged");
          const auto& rr = x.rows;
          for (auto r : rr) {
            check_row(g, c, r);
            const RowRole role = role_of(g, r);
            if (role == RowRole::kData) {
              role_fail(c, "triple activation on Data row " +
                               std::to_string(r));
            }
            if (is_control(role)) {
              role_fail(c, "would overwrite control row " +
                               std::string(role_name(role)));
            }
          }
          if (rr[0] == rr[1] || rr[1] == rr[2] || rr[0] == rr[2]) {
            role_fail(c, "triple activation rows must be distinct");
          }
          for (std::uint32_t i = 0; i < 3; ++i) {
            for (std::uint32_t j = i + 1; j < 3; ++j) {
              const RowRole a = role_of(g, rr[i]);
              const RowRole b = role_of(g, rr[j]);
              if (is_dcc(a) && is_dcc(b) &&
                  std::min(rr[i], rr[j]) % 2 == 0 &&
                  std::max(rr[i], rr[j]) == std::min(rr[i], rr[j]) + 1) {
                role_fail(c, "both contacts of one dual-contact row");
              }
            }
          }
          BitRow m = majority(s.rows[rr[0]], s.rows[rr[1]], s.rows[rr[2]]);
          for (auto r : rr) write_row(s, g, c, r, m);
          s.senseamps = std::move(m);
          s.senseamp_valid = true;
          s.open_rows.assign(rr.begin(), rr.end());
        } else if constexpr (std::is_same_v<T, cmd::ActivateDcc>) {
          if (s.senseamp_valid) protocol_fail(c, "sense amps not precharged");
          check_row(g, c, x.src);
          if (x.pair >= g.dcc_pairs) role_fail(c, "no such DCC pair");
          const DccPair p = dcc_pair(x.pair);
          if (x.src == p.pos || x.src == p.neg) {
            role_fail(c, "source is the target DCC pair");
          }
          s.senseamps = s.rows[x.src];
          s.rows[p.pos] = s.senseamps;
          s.rows[p.neg] = ~s.senseamps;
          s.senseamp_valid = true;
          s.open_rows = {x.src, p.pos};
        } else if constexpr (std::is_same_v<T, cmd::Precharge>) {
          if (!s.senseamp_valid) protocol_fail(c, "no open row to precharge");
          s.senseamp_valid = false;
          s.open_rows.clear();
        } else if constexpr (std::is_same_v<T, cmd::Read>) {
          if (!s.senseamp_valid) protocol_fail(c, "read with no open row");
          check_columns(g, c, x.cols);
          auto w = s.senseamps.words();
          bus.words.assign(w.begin() + x.cols.first_word,
                           w.begin() + x.cols.first_word + x.cols.word_count);
        } else {
          if (!s.senseamp_valid) protocol_fail(c, "write with no open row");
          check_columns(g, c, x.cols);
          const auto& src = x.data ? *x.data : bus.words;
          if (src.size() != x.cols.word_count) {
            protocol_fail(c, "burst data size does not match column range");
          }
          auto w = s.senseamps.words();
          std::copy(src.begin(), src.end(), w.begin() + x.cols.first_word);
          const auto open = s.open_rows;
          for (auto r : open) write_row(s, g, c, r, s.senseamps);
        }
      },
      c);
}

SubarrayState apply_command(SubarrayState state, const Geometry& g,
                            const DramCommand& c) {
  BusLatch bus;
  apply(state, g, c, bus);
  return state;
}

Device::Device(Geometry g, std::uint64_t seed) : geometry_(g) {
  geometry_.validate();
  subarrays_.reserve(static_cast<std::size_t>(g.banks) * g.subarrays_per_bank);
  for (std::uint32_t b = 0; b < g.banks; ++b) {
    for (std::uint32_t sa = 0; sa < g.subarrays_per_bank; ++sa) {
      subarrays_.push_back(init_subarray(geometry_, seed, {b, sa}));
    }
  }
}

std::size_t Device::index(SubarrayId id) const {
  if (id.bank >= geometry_.banks ||
      id.subarray >= geometry_.subarrays_per_bank) {
    throw ProtocolError("subarray " + sa_prefix(id) + " out of range");
  }
  return static_cast<std::size_t>(id.bank) * geometry_.subarrays_per_bank +
         id.subarray;
}

SubarrayState& Device::subarray(SubarrayId id) {
  return subarrays_[index(id)];
}

const SubarrayState& Device::subarray(SubarrayId id) const {
  return subarrays_[index(id)];
}

const BitRow& Device::row(const RowAddress& a) const {
  const auto& s = subarray(a.subarray_id());
  if (a.row >= geometry_.rows_per_subarray) {
    throw ProtocolError("row " + to_string(a) + " out of range");
  }
  return s.rows[a.row];
}

void Device::load_row(const RowAddress& a, const BitRow& value) {
  auto& s = subarray(a.subarray_id());
  if (a.row >= geometry_.rows_per_subarray ||
      role_of(geometry_, a.row) != RowRole::kData) {
    throw RoleError("load_row: " + to_string(a) + " is not a Data row");
  }
  if (value.width() != geometry_.row_width_bits) {
    throw InputError("load_row: width mismatch");
  }
  s.rows[a.row] = value;
}

void Device::apply(const DramCommand& c) {
  dram::apply(subarray(target_of(c)), geometry_, c, bus_);
}

std::string dump(const SubarrayState& s, SubarrayId id) {
  std::ostringstream out;
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    out << id.bank << '/' << id.subarray << '/' << r << ':'
        << s.rows[r].to_hex() << '\n';
  }
  return out.str();
}

std::string dump(const Device& d) {
  std::string out;
  const auto& g = d.geometry();
  for (std::uint32_t b = 0; b < g.banks; ++b) {
    for (std::uint32_t sa = 0; sa < g.subarrays_per_bank; ++sa) {
      out += dump(d.subarray({b, sa}), {b, sa});
    }
  }
  return out;
}

}  // namespace pimsim::dram

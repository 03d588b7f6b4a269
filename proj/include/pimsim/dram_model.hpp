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

// Bit-exact functional model of DRAM subarrays. Command semantics work at
// the logical level: a triple activation leaves the bitwise majority of its
// three rows in all three rows and in the sense amplifiers, and a
// dual-contact-cell row pair always holds a value and its complement.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pimsim/common.hpp"

namespace pimsim::dram {

inline constexpr std::uint32_t kMinRowsPerSubarray = 18;

struct Geometry {
  std::uint32_t banks = 8;
  std::uint32_t subarrays_per_bank = 1;
  std::uint32_t rows_per_subarray = 64;
  std::uint32_t row_width_bits = 8192;
  /// Number of dual-contact-cell row pairs reserved per subarray (1 or 2).
  std::uint32_t dcc_pairs = 1;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  std::uint32_t reserved_rows() const { return 6 + 2 * dcc_pairs; }
  std::uint32_t data_rows_per_subarray() const {
    return rows_per_subarray - reserved_rows();
  }
  std::uint32_t row_words() const { return row_width_bits / 64; }

  bool operator==(const Geometry&) const = default;
};

struct SubarrayId {
  std::uint32_t bank = 0;
  std::uint32_t subarray = 0;
  auto operator<=>(const SubarrayId&) const = default;
};

struct RowAddress {
  std::uint32_t bank = 0;
  std::uint32_t subarray = 0;
  std::uint32_t row = 0;

  SubarrayId subarray_id() const { return {bank, subarray}; }
  auto operator<=>(const RowAddress&) const = default;
};

std::string to_string(const RowAddress& a);

enum class RowRole {
  kData,
  kT0,
  kT1,
  kT2,
  kT3,
  kControl0,
  kControl1,
  kDcc0,
  kDcc0Neg,
  kDcc1,
  kDcc1Neg,
};

// Fixed reserved-row layout at the bottom of every subarray.
namespace layout {
inline constexpr std::uint32_t kT0 = 0;
inline constexpr std::uint32_t kT1 = 1;
inline constexpr std::uint32_t kT2 = 2;
inline constexpr std::uint32_t kT3 = 3;
inline constexpr std::uint32_t kC0 = 4;
inline constexpr std::uint32_t kC1 = 5;
inline constexpr std::uint32_t kDcc0 = 6;
inline constexpr std::uint32_t kDcc0Neg = 7;
inline constexpr std::uint32_t kDcc1 = 8;
inline constexpr std::uint32_t kDcc1Neg = 9;
}  // namespace layout

RowRole role_of(const Geometry& g, std::uint32_t row);
std::string_view role_name(RowRole role);

inline bool is_temp(RowRole r) {
  return r == RowRole::kT0 || r == RowRole::kT1 || r == RowRole::kT2 ||
         r == RowRole::kT3;
}
inline bool is_control(RowRole r) {
  return r == RowRole::kControl0 || r == RowRole::kControl1;
}
inline bool is_dcc(RowRole r) {
  return r == RowRole::kDcc0 || r == RowRole::kDcc0Neg ||
         r == RowRole::kDcc1 || r == RowRole::kDcc1Neg;
}

/// Row indices of the two contacts of one dual-contact-cell row.
struct DccPair {
  std::uint32_t pos;
  std::uint32_t neg;
};
DccPair dcc_pair(std::uint32_t index);

struct SubarrayState {
  std::vector<BitRow> rows;
  BitRow senseamps;
  bool senseamp_valid = false;
  /// Rows currently connected to the sense amplifiers.
  std::vector<std::uint32_t> open_rows;

  bool operator==(const SubarrayState&) const = default;
};

/// Column range in 64-bit words.
struct ColumnRange {
  std::uint32_t first_word = 0;
  std::uint32_t word_count = 0;
  bool operator==(const ColumnRange&) const = default;
};

namespace cmd {
struct Activate {
  RowAddress row;
  bool operator==(const Activate&) const = default;
};
struct ActivateTriple {
  SubarrayId where;
  std::array<std::uint32_t, 3> rows;
  bool operator==(const ActivateTriple&) const = default;
};
struct ActivateDcc {
  SubarrayId where;
  std::uint32_t src;
  std::uint32_t pair;
  bool operator==(const ActivateDcc&) const = default;
};
struct Precharge {
  SubarrayId where;
  bool operator==(const Precharge&) const = default;
};
/// Column burst from the sense amplifiers onto the internal bus latch.
struct Read {
  SubarrayId where;
  ColumnRange cols;
  bool operator==(const Read&) const = default;
};
/// Column burst into the sense amplifiers (and the open rows). Without
/// explicit data the internal bus latch is the source.
struct Write {
  SubarrayId where;
  ColumnRange cols;
  std::optional<std::vector<std::uint64_t>> data;
  bool operator==(const Write&) const = default;
};
}  // namespace cmd

using DramCommand = std::variant<cmd::Activate, cmd::ActivateTriple,
                                 cmd::ActivateDcc, cmd::Precharge, cmd::Read,
                                 cmd::Write>;

SubarrayId target_of(const DramCommand& c);
bool is_activation(const DramCommand& c);
std::string to_string(const DramCommand& c);

/// Internal data bus latch used by Read/Write bursts.
struct BusLatch {
  std::vector<std::uint64_t> words;
};

SubarrayState init_subarray(const Geometry& g, std::uint64_t seed,
                            SubarrayId id = {});

/// Advances `state` in place. Throws ProtocolError on illegal sequencing and
/// RoleError when a command targets a row its role forbids.
void apply(SubarrayState& state, const Geometry& g, const DramCommand& c,
           BusLatch& bus);

/// Value-semantics form of apply() with a private bus latch.
SubarrayState apply_command(SubarrayState state, const Geometry& g,
                            const DramCommand& c);

/// Seeds data rows from splitmix64 keyed by (seed, bank, subarray, row).
std::uint64_t row_seed(std::uint64_t seed, const RowAddress& a);

/// All subarrays of a device, bank-major.
class Device {
 public:
  Device(Geometry g, std::uint64_t seed);

  const Geometry& geometry() const { return geometry_; }

  SubarrayState& subarray(SubarrayId id);
  const SubarrayState& subarray(SubarrayId id) const;

  const BitRow& row(const RowAddress& a) const;
  /// Host-side row load, outside the command protocol. Only Data rows.
  void load_row(const RowAddress& a, const BitRow& value);

  void apply(const DramCommand& c);

  bool operator==(const Device& o) const {
    return geometry_ == o.geometry_ && subarrays_ == o.subarrays_;
  }

 private:
  std::size_t index(SubarrayId id) const;

  Geometry geometry_;
  std::vector<SubarrayState> subarrays_;
  BusLatch bus_;
};

/// One line per row: `bank/subarray/row:<hex>`.
std::string dump(const SubarrayState& s, SubarrayId id);
std::string dump(const Device& d);

}  // namespace pimsim::dram

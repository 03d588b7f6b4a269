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

// Compiles bulk bitwise operations and RowClone copies into DRAM command
// traces and executes them on the functional DRAM model.
//
// Operand rows are always copied into the T-rows before a triple
// activation, so compiled traces never modify their source Data rows. The
// destination is written last, which makes dst == source legal.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimsim/dram_model.hpp"

namespace pimsim::ambit {

enum class BitwiseOp { kNot, kAnd, kOr, kNand, kNor, kXor, kXnor };

inline constexpr std::array<BitwiseOp, 7> kAllOps = {
    BitwiseOp::kNot, BitwiseOp::kAnd, BitwiseOp::kOr,  BitwiseOp::kNand,
    BitwiseOp::kNor, BitwiseOp::kXor, BitwiseOp::kXnor};

std::string_view op_name(BitwiseOp op);
/// Case-insensitive; nullopt for unknown names.
std::optional<BitwiseOp> parse_op(std::string_view name);
inline bool is_unary(BitwiseOp op) { return op == BitwiseOp::kNot; }

/// Host-side word-parallel evaluation, used as the reference result.
BitRow evaluate(BitwiseOp op, const BitRow& a, const BitRow* b);

struct CommandTrace {
  std::vector<dram::DramCommand> commands;
  /// nullopt for a copy trace.
  std::optional<BitwiseOp> op;
  std::vector<dram::RowAddress> operands;
  dram::RowAddress destination;
  /// Meaningful result bits produced by the trace.
  std::uint64_t result_bits = 0;
  /// May run concurrently with eligible traces of other banks.
  bool parallel_eligible = false;
};

/// Activation groups: each starts at an activation and ends at the
/// following precharge. Pair groups carry a second (copy) activation.
struct TraceShape {
  std::size_t commands = 0;
  std::size_t activation_groups = 0;
  std::size_t pair_groups = 0;
  std::size_t lone_groups = 0;
  std::size_t triple_activations = 0;
  std::size_t copy_aaps = 0;  // pair groups led by a plain Activate
  std::size_t bursts = 0;
};

TraceShape shape_of(const CommandTrace& t);

/// Throws CompileError on reserved-row operands or destination and
/// PlacementError on cross-subarray operands.
CommandTrace compile(BitwiseOp op, const dram::Geometry& g,
                     const dram::RowAddress& a,
                     const std::optional<dram::RowAddress>& b,
                     const dram::RowAddress& dst);

/// Intra-subarray copies are a single AAP. Other placements fall back to a
/// read burst into the bus latch followed by a write burst. src == dst is an
/// empty trace.
CommandTrace rowclone_copy(const dram::Geometry& g, const dram::RowAddress& src,
                           const dram::RowAddress& dst);

/// One command per line: `AAP src dst`, `TRA r1 r2 r3`, `ACT r`,
/// `DCC src pair`, `PRE`, `RD b/s first count`, `WR b/s first count`.
std::string dump(const CommandTrace& t);

/// Runs the trace on a whole device. Errors from the DRAM model are
/// rethrown with the failing command index.
void execute(const CommandTrace& t, dram::Device& device);

/// Single-subarray form. Every command must target `id`.
dram::SubarrayState execute(const CommandTrace& t, dram::SubarrayState state,
                            const dram::Geometry& g, dram::SubarrayId id = {});

struct Chunk {
  dram::RowAddress row;
  std::uint64_t bit_offset = 0;  // position in the vector
  std::uint32_t bit_count = 0;   // stored at row bits [0, bit_count)
  bool operator==(const Chunk&) const = default;
};

/// A bit vector striped over Data rows, bank-major then row-major.
struct BulkVector {
  std::uint64_t length_bits = 0;
  std::vector<Chunk> chunks;

  /// Throws PlacementError unless chunks are in range, disjoint, cover
  /// [0, length_bits) in order and sit in Data rows.
  void validate(const dram::Geometry& g) const;
};

/// Places `n_vectors` mutually aligned vectors of `length_bits`. Chunk i of
/// every vector lives in bank i % banks and the same subarray, so any
/// binary op between them is intra-subarray.
std::vector<BulkVector> place_aligned(const dram::Geometry& g,
                                      std::uint64_t length_bits,
                                      std::uint32_t n_vectors);

/// Maximum vector length place_aligned accepts for `n_vectors`.
std::uint64_t aligned_capacity_bits(const dram::Geometry& g,
                                    std::uint32_t n_vectors);

void store(dram::Device& device, const BulkVector& v, const BitRow& bits);
BitRow load(const dram::Device& device, const BulkVector& v);

/// One trace per chunk. Throws PlacementError on misaligned vectors.
std::vector<CommandTrace> bulk_execute(BitwiseOp op, const dram::Geometry& g,
                                       const BulkVector& a,
                                       const BulkVector* b,
                                       const BulkVector& dst);

std::vector<CommandTrace> bulk_copy(const dram::Geometry& g,
                                    const BulkVector& src,
                                    const BulkVector& dst);

/// Initializes every chunk from the all-zeros or all-ones control row.
std::vector<CommandTrace> bulk_fill(const dram::Geometry& g,
                                    const BulkVector& dst, bool value);

/// Reference executor: traces in list order.
void execute_serial(std::span<const CommandTrace> traces, dram::Device& device);

/// Runs maximal runs of parallel-eligible traces with one OpenMP task per
/// bank (list order kept within a bank); other traces run alone.
void execute_parallel(std::span<const CommandTrace> traces,
                      dram::Device& device);

}  // namespace pimsim::ambit

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

// Straight-line programs of bulk bitwise operations over vector registers,
// and the two front ends that produce them: bitmap-index queries and
// bit-serial predicate scans.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pimsim/ambit.hpp"
#include "pimsim/cost_model.hpp"

namespace pimsim::bench {

inline constexpr std::uint32_t kMaxScanBitWidth = 32;

struct VectorInstr {
  enum class Kind { kOp, kFill0, kFill1, kCopy };
  Kind kind = Kind::kOp;
  ambit::BitwiseOp op = ambit::BitwiseOp::kAnd;
  std::uint32_t dst = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;  // ignored unless kind == kOp and op is binary
};

/// Registers [0, n_inputs) are loaded from the inputs; the rest are
/// scratch. `result` names the output register.
struct VectorProgram {
  std::uint32_t n_inputs = 0;
  std::uint32_t n_registers = 0;
  std::vector<VectorInstr> instrs;
  std::uint32_t result = 0;
};

/// Host-side word-parallel interpretation of a program.
BitRow interpret(const VectorProgram& prog, const std::vector<BitRow>& inputs);

/// Query AST over category ids: `cN`, NOT, AND, OR, parentheses
/// (precedence NOT > AND > OR, keywords case-insensitive).
struct QueryNode {
  enum class Kind { kLeaf, kNot, kAnd, kOr };
  Kind kind = Kind::kLeaf;
  std::uint32_t category = 0;
  std::unique_ptr<QueryNode> lhs;
  std::unique_ptr<QueryNode> rhs;
};

/// Throws InputError on malformed expressions or ids >= n_categories.
std::unique_ptr<QueryNode> parse_query(const std::string& expr,
                                       std::uint32_t n_categories);

/// Evaluates the query for a record belonging to `category`.
bool eval_query(const QueryNode& q, std::uint32_t category);

struct CompiledQuery {
  VectorProgram program;
  /// Category bitmap feeding each input register.
  std::vector<std::uint32_t> input_categories;
};

CompiledQuery compile_query(const QueryNode& q);

/// Bit-serial `value < constant` over bit planes, MSB to LSB. Input
/// register i holds plane i (bit i of every record). Throws InputError if
/// constant >= 2^bit_width.
VectorProgram bitserial_scan_compile(std::uint64_t constant,
                                     std::uint32_t bit_width);

struct ProgramRun {
  BitRow result;
  cost::CostReport cost;  // command traces only, no query overhead
  std::size_t tiles = 0;
  std::size_t traces = 0;
};

/// Executes the program on `device`, tiling the vectors when they do not
/// fit at once. Each tile places all registers with place_aligned().
ProgramRun run_program(const VectorProgram& prog,
                       const std::vector<BitRow>& inputs, dram::Device& device,
                       const cost::CostParams& p, bool parallel);

}  // namespace pimsim::bench

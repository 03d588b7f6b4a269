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

#include "pimsim/bench/program.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace pimsim::bench {

using ambit::BitwiseOp;

BitRow interpret(const VectorProgram& prog, const std::vector<BitRow>& inputs) {
  if (inputs.size() != prog.n_inputs || inputs.empty()) {
    throw InputError("interpret: expected " + std::to_string(prog.n_inputs) +
                     " inputs");
  }
  const std::size_t len = inputs[0].width();
  std::vector<BitRow> regs(prog.n_registers, BitRow(len));
  std::copy(inputs.begin(), inputs.end(), regs.begin());
  for (const auto& in : prog.instrs) {
    switch (in.kind) {
      case VectorInstr::Kind::kFill0: regs[in.dst] = BitRow(len, false); break;
      case VectorInstr::Kind::kFill1: regs[in.dst] = BitRow(len, true); break;
      case VectorInstr::Kind::kCopy: regs[in.dst] = regs[in.a]; break;
      case VectorInstr::Kind::kOp:
        regs[in.dst] = ambit::evaluate(in.op, regs[in.a],
                                       ambit::is_unary(in.op) ? nullptr
                                                              : &regs[in.b]);
        break;
    }
  }
  return regs[prog.result];
}

namespace {

struct Token {
  enum class Kind { kLeaf, kNot, kAnd, kOr, kOpen, kClose, kEnd };
  Kind kind;
  std::uint32_t category = 0;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& s, std::uint32_t n_categories) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::kOpen, 0, i++});
    } else if (c == ')') {
      out.push_back({Token::Kind::kClose, 0, i++});
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      const std::size_t start = i;
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
      std::string word = s.substr(start, i - start);
      std::string upper = word;
      for (auto& ch : upper) {
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      }
      if (upper == "NOT") {
        out.push_back({Token::Kind::kNot, 0, start});
      } else if (upper == "AND") {
        out.push_back({Token::Kind::kAnd, 0, start});
      } else if (upper == "OR") {
        out.push_back({Token::Kind::kOr, 0, start});
      } else if ((word[0] == 'c' || word[0] == 'C') && word.size() > 1 &&
                 std::all_of(word.begin() + 1, word.end(), [](char ch) {
                   return std::isdigit(static_cast<unsigned char>(ch));
                 })) {
        std::uint64_t id = 0;
        for (std::size_t k = 1; k < word.size(); ++k) {
          id = id * 10 + static_cast<std::uint64_t>(word[k] - '0');
          if (id >= n_categories) break;
        }
        if (id >= n_categories) {
          throw InputError("query: category `" + word + "` >= n_categories " +
                           std::to_string(n_categories));
        }
        out.push_back({Token::Kind::kLeaf, static_cast<std::uint32_t>(id), start});
      } else {
        throw InputError("query: unexpected word `" + word + "` at offset " +
                         std::to_string(start));
      }
    } else {
      throw InputError("query: unexpected character at offset " +
                       std::to_string(i));
    }
  }
  out.push_back({Token::Kind::kEnd, 0, s.size()});
  return out;
}

class QueryParser {
 public:
  explicit QueryParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::unique_ptr<QueryNode> parse() {
    auto e = parse_or();
    if (peek().kind != Token::Kind::kEnd) fail("trailing input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("query: " + why + " at offset " +
                     std::to_string(peek().pos));
  }

  static std::unique_ptr<QueryNode> binary(QueryNode::Kind k,
                                           std::unique_ptr<QueryNode> l,
                                           std::unique_ptr<QueryNode> r) {
    auto n = std::make_unique<QueryNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  std::unique_ptr<QueryNode> parse_or() {
    auto l = parse_and();
    while (peek().kind == Token::Kind::kOr) {
      next();
      l = binary(QueryNode::Kind::kOr, std::move(l), parse_and());
    }
    return l;
  }

  std::unique_ptr<QueryNode> parse_and() {
    auto l = parse_factor();
    while (peek().kind == Token::Kind::kAnd) {
      next();
      l = binary(QueryNode::Kind::kAnd, std::move(l), parse_factor());
    }
    return l;
  }

  std::unique_ptr<QueryNode> parse_factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::kNot: {
        next();
        auto n = std::make_unique<QueryNode>();
        n->kind = QueryNode::Kind::kNot;
        n->lhs = parse_factor();
        return n;
      }
      case Token::Kind::kOpen: {
        next();
        auto e = parse_or();
        if (peek().kind != Token::Kind::kClose) fail("expected `)`");
        next();
        return e;
      }
      case Token::Kind::kLeaf: {
        auto n = std::make_unique<QueryNode>();
        n->category = next().category;
        return n;
      }
      default:
        fail("expected a category, NOT or `(`");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

void collect_leaves(const QueryNode& q, std::set<std::uint32_t>& out) {
  if (q.kind == QueryNode::Kind::kLeaf) {
    out.insert(q.category);
    return;
  }
  collect_leaves(*q.lhs, out);
  if (q.rhs) collect_leaves(*q.rhs, out);
}

}  // namespace

std::unique_ptr<QueryNode> parse_query(const std::string& expr,
                                       std::uint32_t n_categories) {
  return QueryParser(tokenize(expr, n_categories)).parse();
}

bool eval_query(const QueryNode& q, std::uint32_t category) {
  switch (q.kind) {
    case QueryNode::Kind::kLeaf: return q.category == category;
    case QueryNode::Kind::kNot: return !eval_query(*q.lhs, category);
    case QueryNode::Kind::kAnd:
      return eval_query(*q.lhs, category) && eval_query(*q.rhs, category);
    case QueryNode::Kind::kOr:
      return eval_query(*q.lhs, category) || eval_query(*q.rhs, category);
  }
  return false;
}

CompiledQuery compile_query(const QueryNode& q) {
  std::set<std::uint32_t> leaves;
  collect_leaves(q, leaves);
  CompiledQuery out;
  out.input_categories.assign(leaves.begin(), leaves.end());
  auto& prog = out.program;
  prog.n_inputs = static_cast<std::uint32_t>(leaves.size());
  prog.n_registers = prog.n_inputs;

  const auto input_of = [&](std::uint32_t cat) {
    const auto it = std::find(out.input_categories.begin(),
                              out.input_categories.end(), cat);
    return static_cast<std::uint32_t>(it - out.input_categories.begin());
  };
  const auto emit = [&](auto&& self, const QueryNode& n) -> std::uint32_t {
    if (n.kind == QueryNode::Kind::kLeaf) return input_of(n.category);
    VectorInstr in;
    in.kind = VectorInstr::Kind::kOp;
    in.a = self(self, *n.lhs);
    if (n.kind == QueryNode::Kind::kNot) {
      in.op = BitwiseOp::kNot;
    } else {
      in.op = n.kind == QueryNode::Kind::kAnd ? BitwiseOp::kAnd : BitwiseOp::kOr;
      in.b = self(self, *n.rhs);
    }
    in.dst = prog.n_registers++;
    prog.instrs.push_back(in);
    return in.dst;
  };
  prog.result = emit(emit, q);
  if (q.kind == QueryNode::Kind::kLeaf) {
    VectorInstr copy;
    copy.kind = VectorInstr::Kind::kCopy;
    copy.a = prog.result;
    copy.dst = prog.n_registers++;
    prog.instrs.push_back(copy);
    prog.result = copy.dst;
  }
  return out;
}

VectorProgram bitserial_scan_compile(std::uint64_t constant,
                                     std::uint32_t bit_width) {
  if (bit_width < 1 || bit_width > kMaxScanBitWidth) {
    throw InputError("scan: bit_width must be in [1, " +
                     std::to_string(kMaxScanBitWidth) + "]");
  }
  if (constant >= (std::uint64_t{1} << bit_width)) {
    throw InputError("scan: constant " + std::to_string(constant) +
                     " does not fit in " + std::to_string(bit_width) + " bits");
  }
  VectorProgram p;
  p.n_inputs = bit_width;
  const std::uint32_t lt = bit_width;
  const std::uint32_t eq = bit_width + 1;
  const std::uint32_t tmp = bit_width + 2;
  p.n_registers = bit_width + 3;
  p.result = lt;

  using K = VectorInstr::Kind;
  p.instrs.push_back({K::kFill0, BitwiseOp::kAnd, lt, 0, 0});
  p.instrs.push_back({K::kFill1, BitwiseOp::kAnd, eq, 0, 0});
  // lt' = lt OR (eq AND NOT v AND c);  eq' = eq AND NOT (v XOR c), with the
  // constant bit c folded in.
  for (std::uint32_t k = bit_width; k-- > 0;) {
    p.instrs.push_back({K::kOp, BitwiseOp::kNot, tmp, k, 0});
    if ((constant >> k) & 1U) {
      p.instrs.push_back({K::kOp, BitwiseOp::kAnd, tmp, eq, tmp});
      p.instrs.push_back({K::kOp, BitwiseOp::kOr, lt, lt, tmp});
      p.instrs.push_back({K::kOp, BitwiseOp::kAnd, eq, eq, k});
    } else {
      p.instrs.push_back({K::kOp, BitwiseOp::kAnd, eq, eq, tmp});
    }
  }
  return p;
}

namespace {

BitRow slice(const BitRow& src, std::uint64_t offset, std::uint64_t len) {
  BitRow out(len);
  out.copy_bits(src, offset, 0, len);
  return out;
}

}  // namespace

ProgramRun run_program(const VectorProgram& prog,
                       const std::vector<BitRow>& inputs, dram::Device& device,
                       const cost::CostParams& p, bool parallel) {
  if (inputs.size() != prog.n_inputs || inputs.empty()) {
    throw InputError("run_program: expected " + std::to_string(prog.n_inputs) +
                     " inputs");
  }
  const auto& g = device.geometry();
  const std::uint64_t len = inputs[0].width();
  for (const auto& in : inputs) {
    if (in.width() != len) throw InputError("run_program: ragged inputs");
  }
  const std::uint64_t cap = ambit::aligned_capacity_bits(g, prog.n_registers);
  if (cap == 0) {
    throw PlacementError("program needs " + std::to_string(prog.n_registers) +
                         " registers; a subarray holds " +
                         std::to_string(g.data_rows_per_subarray()));
  }

  ProgramRun run;
  run.result = BitRow(len);
  for (std::uint64_t off = 0; off < len; off += cap) {
    const std::uint64_t n = std::min(cap, len - off);
    const auto regs = ambit::place_aligned(g, n, prog.n_registers);
    for (std::uint32_t i = 0; i < prog.n_inputs; ++i) {
      ambit::store(device, regs[i], slice(inputs[i], off, n));
    }
    for (const auto& in : prog.instrs) {
      std::vector<ambit::CommandTrace> traces;
      switch (in.kind) {
        case VectorInstr::Kind::kFill0:
          traces = ambit::bulk_fill(g, regs[in.dst], false);
          break;
        case VectorInstr::Kind::kFill1:
          traces = ambit::bulk_fill(g, regs[in.dst], true);
          break;
        case VectorInstr::Kind::kCopy:
          traces = ambit::bulk_copy(g, regs[in.a], regs[in.dst]);
          break;
        case VectorInstr::Kind::kOp:
          traces = ambit::bulk_execute(
              in.op, g, regs[in.a],
              ambit::is_unary(in.op) ? nullptr : &regs[in.b], regs[in.dst]);
          break;
      }
      if (parallel) {
        ambit::execute_parallel(traces, device);
      } else {
        ambit::execute_serial(traces, device);
      }
      run.cost += cost::price_traces(traces, p);
      run.traces += traces.size();
    }
    run.result.copy_bits(ambit::load(device, regs[prog.result]), 0, off, n);
    ++run.tiles;
  }
  return run;
}

}  // namespace pimsim::bench

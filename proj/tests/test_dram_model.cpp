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

#include <string>

#include "doctest.h"
#include "pimsim/dram_model.hpp"

using namespace pimsim;
using namespace pimsim::dram;

namespace {

Geometry small_geometry(std::uint32_t width = 64) {
  Geometry g;
  g.banks = 2;
  g.subarrays_per_bank = 2;
  g.rows_per_subarray = 18;
  g.row_width_bits = width;
  return g;
}

BitRow bits(const char* msb_first) {
  const std::string s(msb_first);
  BitRow r(64);
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.set(s.size() - 1 - i, s[i] == '1');
  }
  return r;
}

// Bit-by-bit two-of-three vote.
bool vote(bool a, bool b, bool c) { return (a && b) || (a && c) || (b && c); }

SubarrayState tra(SubarrayState s, const Geometry& g, const BitRow& a,
                  const BitRow& b, const BitRow& c) {
  s.rows[layout::kT0] = a;
  s.rows[layout::kT1] = b;
  s.rows[layout::kT2] = c;
  return apply_command(std::move(s), g,
                       cmd::ActivateTriple{{}, {layout::kT0, layout::kT1,
                                                layout::kT2}});
}

}  // namespace

TEST_CASE("geometry validation") {
  CHECK_NOTHROW(Geometry{}.validate());
  Geometry g;
  g.rows_per_subarray = kMinRowsPerSubarray - 1;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = {};
  g.row_width_bits = 100;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = {};
  g.dcc_pairs = 3;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = {};
  g.banks = 0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CHECK(Geometry{}.data_rows_per_subarray() == 56);
}

TEST_CASE("reserved row layout") {
  Geometry g;
  CHECK(role_of(g, 0) == RowRole::kT0);
  CHECK(role_of(g, 3) == RowRole::kT3);
  CHECK(role_of(g, 4) == RowRole::kControl0);
  CHECK(role_of(g, 5) == RowRole::kControl1);
  CHECK(role_of(g, 6) == RowRole::kDcc0);
  CHECK(role_of(g, 7) == RowRole::kDcc0Neg);
  CHECK(role_of(g, 8) == RowRole::kData);
  g.dcc_pairs = 2;
  CHECK(role_of(g, 8) == RowRole::kDcc1);
  CHECK(role_of(g, 9) == RowRole::kDcc1Neg);
  CHECK(role_of(g, 10) == RowRole::kData);
}

TEST_CASE("initial state: control rows constant, DCC pair complementary") {
  const Geometry g = small_geometry(128);
  const auto s = init_subarray(g, 42, {1, 1});
  CHECK(s.rows[layout::kC0].none());
  CHECK(s.rows[layout::kC1].all());
  CHECK(s.rows[layout::kDcc0Neg] == ~s.rows[layout::kDcc0]);
  CHECK_FALSE(s.senseamp_valid);
  CHECK(s.rows[8] != s.rows[9]);
  CHECK(init_subarray(g, 42, {1, 1}) == s);
  CHECK(init_subarray(g, 43, {1, 1}) != s);
  CHECK(init_subarray(g, 42, {1, 0}) != s);
}

TEST_CASE("triple activation single-bit truth table") {
  const Geometry g = small_geometry();
  const auto s0 = init_subarray(g, 1);
  for (int m = 0; m < 8; ++m) {
    const bool a = m & 1;
    const bool b = m & 2;
    const bool c = m & 4;
    const auto s = tra(s0, g, BitRow(64, a), BitRow(64, b), BitRow(64, c));
    const BitRow want(64, vote(a, b, c));
    CHECK(s.rows[layout::kT0] == want);
    CHECK(s.rows[layout::kT1] == want);
    CHECK(s.rows[layout::kT2] == want);
    CHECK(s.senseamps == want);
    CHECK(s.senseamp_valid);
  }
}

TEST_CASE("triple activation worked examples") {
  const Geometry g = small_geometry();
  const auto s0 = init_subarray(g, 1);
  auto s = tra(s0, g, bits("1010"), bits("0110"), bits("0000"));
  CHECK(s.rows[layout::kT0] == bits("0010"));
  s = tra(s0, g, bits("1010"), bits("0110"), bits("1111"));
  CHECK(s.rows[layout::kT2] == bits("1110"));
  SplitMix64 rng(4);
  BitRow x(64);
  x.randomize(rng);
  s = tra(s0, g, x, x, x);
  CHECK(s.rows[layout::kT1] == x);
}

TEST_CASE("control value selects AND or OR") {
  const Geometry g = small_geometry(1024);
  const auto s0 = init_subarray(g, 2);
  SplitMix64 rng(17);
  for (int t = 0; t < 50; ++t) {
    BitRow a(1024);
    BitRow b(1024);
    a.randomize(rng);
    b.randomize(rng);
    auto s = tra(s0, g, a, b, BitRow(1024, false));
    auto o = tra(s0, g, a, b, BitRow(1024, true));
    for (std::size_t i = 0; i < 1024; ++i) {
      REQUIRE(s.senseamps.get(i) == (a.get(i) && b.get(i)));
      REQUIRE(o.senseamps.get(i) == (a.get(i) || b.get(i)));
    }
  }
}

TEST_CASE("back-to-back activation copies a row") {
  const Geometry g = small_geometry();
  auto s = init_subarray(g, 5);
  const BitRow src = s.rows[10];
  const BitRow other = s.rows[12];
  s = apply_command(s, g, cmd::Activate{{0, 0, 10}});
  s = apply_command(s, g, cmd::Activate{{0, 0, 12}});
  s = apply_command(s, g, cmd::Precharge{{}});
  CHECK(s.rows[12] == src);
  CHECK(s.rows[10] == src);
  CHECK(other != src);
  CHECK_FALSE(s.senseamp_valid);
}

TEST_CASE("DCC activation keeps the pair complementary") {
  Geometry g = small_geometry();
  g.dcc_pairs = 2;
  auto s = init_subarray(g, 6);
  s = apply_command(s, g, cmd::ActivateDcc{{}, 12, 1});
  CHECK(s.rows[layout::kDcc1] == s.rows[12]);
  CHECK(s.rows[layout::kDcc1Neg] == ~s.rows[12]);
  CHECK(s.senseamps == s.rows[12]);
  s = apply_command(s, g, cmd::Precharge{{}});
  // Writing through the negated contact updates the true contact too.
  s = apply_command(s, g, cmd::Activate{{0, 0, 13}});
  s = apply_command(s, g, cmd::Activate{{0, 0, layout::kDcc1Neg}});
  s = apply_command(s, g, cmd::Precharge{{}});
  CHECK(s.rows[layout::kDcc1Neg] == s.rows[13]);
  CHECK(s.rows[layout::kDcc1] == ~s.rows[13]);
}

TEST_CASE("protocol errors") {
  const Geometry g = small_geometry();
  const auto s = init_subarray(g, 7);
  CHECK_THROWS_AS(apply_command(s, g, cmd::Precharge{{}}), ProtocolError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::Read{{}, {0, 1}}), ProtocolError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::Write{{}, {0, 1}, std::nullopt}),
                  ProtocolError);
  const auto open = apply_command(s, g, cmd::Activate{{0, 0, 9}});
  CHECK_THROWS_AS(apply_command(open, g, cmd::ActivateTriple{{}, {0, 1, 2}}),
                  ProtocolError);
  CHECK_THROWS_AS(apply_command(open, g, cmd::ActivateDcc{{}, 9, 0}),
                  ProtocolError);
  CHECK_THROWS_AS(apply_command(open, g, cmd::Read{{}, {0, 2}}), ProtocolError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::Activate{{0, 0, 18}}), ProtocolError);
  try {
    apply_command(s, g, cmd::Precharge{{}});
    FAIL("expected ProtocolError");
  } catch (const ProtocolError& e) {
    CHECK(std::string(e.what()).find("PRE") != std::string::npos);
  }
}

TEST_CASE("role errors") {
  const Geometry g = small_geometry();
  const auto s = init_subarray(g, 7);
  CHECK_THROWS_AS(apply_command(s, g, cmd::ActivateTriple{{}, {0, 1, 10}}),
                  RoleError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::ActivateTriple{{}, {0, 1, 4}}),
                  RoleError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::ActivateTriple{{}, {0, 0, 1}}),
                  RoleError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::ActivateTriple{{}, {0, 6, 7}}),
                  RoleError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::ActivateDcc{{}, 6, 0}), RoleError);
  CHECK_THROWS_AS(apply_command(s, g, cmd::ActivateDcc{{}, 9, 1}), RoleError);
  auto open = apply_command(s, g, cmd::Activate{{0, 0, 9}});
  CHECK_THROWS_AS(apply_command(open, g, cmd::Activate{{0, 0, layout::kC1}}),
                  RoleError);
}

TEST_CASE("read and write bursts move words through the bus latch") {
  const Geometry g = small_geometry(256);
  auto s = init_subarray(g, 8);
  BusLatch bus;
  apply(s, g, cmd::Activate{{0, 0, 10}}, bus);
  apply(s, g, cmd::Read{{}, {1, 2}}, bus);
  apply(s, g, cmd::Precharge{{}}, bus);
  REQUIRE(bus.words.size() == 2);
  CHECK(bus.words[0] == s.rows[10].words()[1]);
  apply(s, g, cmd::Activate{{0, 0, 11}}, bus);
  apply(s, g, cmd::Write{{}, {2, 2}, std::nullopt}, bus);
  apply(s, g, cmd::Precharge{{}}, bus);
  CHECK(s.rows[11].words()[2] == s.rows[10].words()[1]);
  CHECK(s.rows[11].words()[3] == s.rows[10].words()[2]);
  apply(s, g, cmd::Activate{{0, 0, 11}}, bus);
  CHECK_THROWS_AS(apply(s, g, cmd::Read{{}, {3, 2}}, bus), ProtocolError);
  CHECK_THROWS_AS(
      apply(s, g, cmd::Write{{}, {0, 2}, std::vector<std::uint64_t>{1}}, bus),
      ProtocolError);
}

TEST_CASE("apply_command is deterministic") {
  const Geometry g = small_geometry();
  const auto s = init_subarray(g, 9);
  const DramCommand c = cmd::ActivateDcc{{}, 11, 0};
  CHECK(apply_command(s, g, c) == apply_command(s, g, c));
}

TEST_CASE("device routing and host loads") {
  const Geometry g = small_geometry();
  Device d(g, 3);
  CHECK(d.row({1, 1, 9}) == init_subarray(g, 3, {1, 1}).rows[9]);
  d.apply(cmd::Activate{{1, 0, 9}});
  CHECK(d.subarray({1, 0}).senseamp_valid);
  CHECK_FALSE(d.subarray({0, 0}).senseamp_valid);
  CHECK_THROWS_AS(d.load_row({0, 0, 4}, BitRow(64)), RoleError);
  CHECK_THROWS_AS(d.subarray({2, 0}), ProtocolError);
  d.load_row({0, 0, 12}, BitRow(64, true));
  CHECK(d.row({0, 0, 12}).all());
}

TEST_CASE("dump format") {
  Geometry g = small_geometry();
  g.banks = 1;
  g.subarrays_per_bank = 1;
  const auto s = init_subarray(g, 1);
  const std::string text = dump(s, {0, 0});
  CHECK(text.rfind("0/0/0:0000000000000000\n", 0) == 0);
  CHECK(text.find("0/0/5:ffffffffffffffff\n") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 18);
  CHECK(dump(Device(g, 1)) == text);
}

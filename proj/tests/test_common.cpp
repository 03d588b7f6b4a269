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
#include <tuple>

#include "doctest.h"
#include "pimsim/common.hpp"

using pimsim::BitRow;
using pimsim::SplitMix64;

TEST_CASE("splitmix64 matches the published reference sequence") {
  // First outputs for seed 1234567 from the reference C implementation.
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
}

TEST_CASE("SplitMix64::below stays in range") {
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
}

TEST_CASE("BitRow keeps tail bits clear") {
  BitRow r(70, true);
  CHECK(r.popcount() == 70);
  CHECK(r.all());
  const BitRow n = ~BitRow(70);
  CHECK(n.popcount() == 70);
  CHECK((~n).none());
  SplitMix64 rng(3);
  BitRow x(70);
  x.randomize(rng);
  CHECK((x.words()[1] >> 6) == 0);
}

TEST_CASE("BitRow bitwise operators agree with per-bit evaluation") {
  SplitMix64 rng(5);
  BitRow a(200);
  BitRow b(200);
  a.randomize(rng);
  b.randomize(rng);
  const BitRow x = a & b;
  const BitRow o = a | b;
  const BitRow e = a ^ b;
  for (std::size_t i = 0; i < 200; ++i) {
    CHECK(x.get(i) == (a.get(i) && b.get(i)));
    CHECK(o.get(i) == (a.get(i) || b.get(i)));
    CHECK(e.get(i) == (a.get(i) != b.get(i)));
  }
}

TEST_CASE("majority is the two-of-three vote per bit") {
  SplitMix64 rng(11);
  BitRow a(130);
  BitRow b(130);
  BitRow c(130);
  a.randomize(rng);
  b.randomize(rng);
  c.randomize(rng);
  const BitRow m = pimsim::majority(a, b, c);
  for (std::size_t i = 0; i < 130; ++i) {
    const int votes = a.get(i) + b.get(i) + c.get(i);
    CHECK(m.get(i) == (votes >= 2));
  }
}

TEST_CASE("hex round trip and layout") {
  BitRow r(64);
  r.set(0, true);
  r.set(63, true);
  CHECK(r.to_hex() == "8000000000000001");
  SplitMix64 rng(2);
  BitRow x(192);
  x.randomize(rng);
  CHECK(BitRow::from_hex(192, x.to_hex()) == x);
  CHECK_THROWS_AS(BitRow::from_hex(64, "xyz"), pimsim::InputError);
}

TEST_CASE("first_difference reports the lowest differing bit") {
  BitRow a(300);
  BitRow b(300);
  CHECK(a.first_difference(b) == 300);
  b.set(257, true);
  b.set(299, true);
  CHECK(a.first_difference(b) == 257);
}

TEST_CASE("copy_bits handles aligned and unaligned ranges") {
  SplitMix64 rng(8);
  BitRow src(500);
  src.randomize(rng);
  for (auto [so, dof, n] : {std::tuple<std::size_t, std::size_t, std::size_t>{
                                0, 0, 500},
                            {64, 128, 192},
                            {3, 70, 301},
                            {100, 0, 1}}) {
    BitRow dst(500);
    dst.copy_bits(src, so, dof, n);
    for (std::size_t i = 0; i < 500; ++i) {
      const bool want = i >= dof && i < dof + n ? src.get(so + i - dof) : false;
      REQUIRE(dst.get(i) == want);
    }
  }
}

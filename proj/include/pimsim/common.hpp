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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pimsim {

// Error hierarchy. Each class maps to one failure family; the CLI maps
// families onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Bad user data (graph files, out-of-range ids, malformed expressions).
class InputError : public Error {
 public:
  using Error::Error;
};

/// DRAM command issued in a state that does not permit it.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Command applied to a row whose role forbids it.
class RoleError : public Error {
 public:
  using Error::Error;
};

class CompileError : public Error {
 public:
  using Error::Error;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

class HandlerFault : public Error {
 public:
  using Error::Error;
};

class OracleMismatch : public Error {
 public:
  OracleMismatch(const std::string& what, std::size_t first_index)
      : Error(what), first_index_(first_index) {}
  std::size_t first_index() const { return first_index_; }

 private:
  std::size_t first_index_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// splitmix64 step: advances `state` and returns the mixed output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Small deterministic generator used for every seeded fixture in the
/// project. Output is identical across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  /// Uniform integer in [0, bound) by multiply-shift. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Fixed-width bit vector stored as 64-bit words, bit i at word i/64,
/// position i%64. Bits beyond `width` in the last word are kept zero.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t width_bits, bool fill = false);

  static BitRow from_words(std::size_t width_bits,
                           std::vector<std::uint64_t> words);

  std::size_t width() const { return width_; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool get(std::size_t i) const {
    return (words_[i / 64] >> (i % 64)) & 1U;
  }
  void set(std::size_t i, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (v) {
      words_[i / 64] |= mask;
    } else {
      words_[i / 64] &= ~mask;
    }
  }

  std::size_t popcount() const;
  bool all() const;
  bool none() const;

  BitRow operator~() const;
  BitRow& operator&=(const BitRow& o);
  BitRow& operator|=(const BitRow& o);
  BitRow& operator^=(const BitRow& o);
  friend BitRow operator&(BitRow a, const BitRow& b) { return a &= b; }
  friend BitRow operator|(BitRow a, const BitRow& b) { return a |= b; }
  friend BitRow operator^(BitRow a, const BitRow& b) { return a ^= b; }
  bool operator==(const BitRow&) const = default;

  /// Hex, most-significant word first, 16 digits per word.
  std::string to_hex() const;
  static BitRow from_hex(std::size_t width_bits, std::string_view hex);

  /// Index of the first differing bit, or width() if equal.
  std::size_t first_difference(const BitRow& o) const;

  /// Copies `count` bits starting at `src_offset` of `src` into this row at
  /// `dst_offset`.
  void copy_bits(const BitRow& src, std::size_t src_offset,
                 std::size_t dst_offset, std::size_t count);

  /// Fills from a seeded generator, clearing the tail bits.
  void randomize(SplitMix64& rng);

 private:
  void clear_tail();

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Bitwise majority of three equal-width rows.
BitRow majority(const BitRow& a, const BitRow& b, const BitRow& c);

}  // namespace pimsim

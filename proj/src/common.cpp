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

#include "pimsim/common.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace pimsim {

BitRow::BitRow(std::size_t width_bits, bool fill)
    : width_(width_bits),
      words_((width_bits + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
  clear_tail();
}

BitRow BitRow::from_words(std::size_t width_bits,
                          std::vector<std::uint64_t> words) {
  if (words.size() != (width_bits + 63) / 64) {
    throw InputError("BitRow::from_words: word count does not match width");
  }
  BitRow r;
  r.width_ = width_bits;
  r.words_ = std::move(words);
  r.clear_tail();
  return r;
}

void BitRow::clear_tail() {
  if (width_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (width_ % 64)) - 1;
  }
}

std::size_t BitRow::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitRow::all() const { return popcount() == width_; }

bool BitRow::none() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

BitRow BitRow::operator~() const {
  BitRow r = *this;
  for (auto& w : r.words_) w = ~w;
  r.clear_tail();
  return r;
}

BitRow& BitRow::operator&=(const BitRow& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

BitRow& BitRow::operator|=(const BitRow& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

BitRow& BitRow::operator^=(const BitRow& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

std::string BitRow::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(words_.size() * 16);
  for (auto it = words_.rbegin(); it != words_.rend(); ++it) {
    for (int shift = 60; shift >= 0; shift -= 4) {
      out.push_back(kDigits[(*it >> shift) & 0xF]);
    }
  }
  return out;
}

BitRow BitRow::from_hex(std::size_t width_bits, std::string_view hex) {
  const std::size_t n_words = (width_bits + 63) / 64;
  if (hex.size() != n_words * 16) {
    throw InputError("BitRow::from_hex: expected " +
                     std::to_string(n_words * 16) + " hex digits, got " +
                     std::to_string(hex.size()));
  }
  std::vector<std::uint64_t> words(n_words, 0);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = static_cast<char>(
        std::tolower(static_cast<unsigned char>(hex[i])));
    std::uint64_t nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<std::uint64_t>(c - 'a' + 10);
    } else {
      throw InputError("BitRow::from_hex: bad digit");
    }
    const std::size_t word = n_words - 1 - i / 16;
    words[word] = (words[word] << 4) | nibble;
  }
  return from_words(width_bits, std::move(words));
}

std::size_t BitRow::first_difference(const BitRow& o) const {
  const std::size_t n = std::min(words_.size(), o.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t d = words_[i] ^ o.words_[i];
    if (d != 0) {
      return i * 64 + static_cast<std::size_t>(std::countr_zero(d));
    }
  }
  return width_ == o.width_ ? width_ : std::min(width_, o.width_);
}

void BitRow::copy_bits(const BitRow& src, std::size_t src_offset,
                       std::size_t dst_offset, std::size_t count) {
  if (src_offset % 64 == 0 && dst_offset % 64 == 0) {
    const std::size_t full = count / 64;
    const std::size_t s = src_offset / 64;
    const std::size_t d = dst_offset / 64;
    for (std::size_t i = 0; i < full; ++i) words_[d + i] = src.words_[s + i];
    const std::size_t rest = count % 64;
    if (rest != 0) {
      const std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
      words_[d + full] =
          (words_[d + full] & ~mask) | (src.words_[s + full] & mask);
    }
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    set(dst_offset + i, src.get(src_offset + i));
  }
}

void BitRow::randomize(SplitMix64& rng) {
  for (auto& w : words_) w = rng.next();
  clear_tail();
}

BitRow majority(const BitRow& a, const BitRow& b, const BitRow& c) {
  BitRow r(a.width());
  auto out = r.words();
  auto wa = a.words();
  auto wb = b.words();
  auto wc = c.words();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (wa[i] & wb[i]) | (wb[i] & wc[i]) | (wa[i] & wc[i]);
  }
  return r;
}

}  // namespace pimsim

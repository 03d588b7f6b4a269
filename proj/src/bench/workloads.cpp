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

#include "pimsim/bench/workloads.hpp"

#include <ostream>

namespace pimsim::bench {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = seed ^ h;
  return splitmix64(s);
}

BitmapIndex gen_bitmap_workload(std::uint64_t n_records,
                                std::uint32_t n_categories,
                                std::uint64_t seed) {
  if (n_records == 0) throw InputError("bitmaps: n_records must be > 0");
  if (n_categories == 0) throw InputError("bitmaps: n_categories must be > 0");
  BitmapIndex idx;
  idx.category_of.resize(n_records);
  idx.bitmaps.assign(n_categories, BitRow(n_records));
  SplitMix64 rng(seed);
  for (std::uint64_t r = 0; r < n_records; ++r) {
    const auto c = static_cast<std::uint32_t>(rng.below(n_categories));
    idx.category_of[r] = c;
    idx.bitmaps[c].set(r, true);
  }
  return idx;
}

void write_bitmaps(std::ostream& out, const BitmapIndex& index) {
  out << "# records " << index.category_of.size() << " categories "
      << index.bitmaps.size() << '\n';
  for (std::size_t c = 0; c < index.bitmaps.size(); ++c) {
    out << 'c' << c << ' ' << index.bitmaps[c].to_hex() << '\n';
  }
}

std::vector<std::uint64_t> gen_scan_values(std::uint64_t n_records,
                                           std::uint32_t bit_width,
                                           std::uint64_t seed) {
  std::vector<std::uint64_t> v(n_records);
  SplitMix64 rng(seed);
  for (auto& x : v) x = rng.below(std::uint64_t{1} << bit_width);
  return v;
}

std::vector<BitRow> to_bit_planes(const std::vector<std::uint64_t>& values,
                                  std::uint32_t bit_width) {
  std::vector<BitRow> planes(bit_width, BitRow(values.size()));
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::uint32_t k = 0; k < bit_width; ++k) {
      if ((values[r] >> k) & 1U) planes[k].set(r, true);
    }
  }
  return planes;
}

}  // namespace pimsim::bench

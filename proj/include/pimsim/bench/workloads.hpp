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

// Seeded workload generators.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "pimsim/common.hpp"

namespace pimsim::bench {

/// Independent stream seed for one named consumer of the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

/// One category per record; bitmap c has bit r set iff record r is in c.
struct BitmapIndex {
  std::vector<std::uint32_t> category_of;
  std::vector<BitRow> bitmaps;
};

BitmapIndex gen_bitmap_workload(std::uint64_t n_records,
                                std::uint32_t n_categories, std::uint64_t seed);

/// `# records N categories K` then one `c<i> <hex>` line per bitmap.
void write_bitmaps(std::ostream& out, const BitmapIndex& index);

std::vector<std::uint64_t> gen_scan_values(std::uint64_t n_records,
                                           std::uint32_t bit_width,
                                           std::uint64_t seed);

/// Plane i holds bit i of every value.
std::vector<BitRow> to_bit_planes(const std::vector<std::uint64_t>& values,
                                  std::uint32_t bit_width);

}  // namespace pimsim::bench

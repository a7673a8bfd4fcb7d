/*
 * Copyright 2026 The splitrule Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/errors.hpp"
#include "core/random.hpp"

namespace splitrule {

void SplitSpec::validate() const {
  if (fractions.size() != 2 && fractions.size() != 3) {
    throw ValidationError("split: need 2 or 3 fractions, got " + std::to_string(fractions.size()));
  }
  double sum = 0.0;
  for (const double f : fractions) {
    if (!(f > 0.0) || !std::isfinite(f)) throw ValidationError("split: every fraction must be > 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("split: fractions must sum to 1");
}

std::vector<std::size_t> part_sizes(std::size_t n, const std::vector<double>& fractions) {
  std::vector<std::size_t> sizes;
  std::size_t assigned = 0;
  for (const double f : fractions) {
    // Guard against 0.3 * 10 = 2.9999999999999996.
    const auto s = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
    sizes.push_back(std::min(s, n - assigned));
    assigned += sizes.back();
  }
  for (std::size_t k = 0; assigned < n; k = (k + 1) % sizes.size()) {
    ++sizes[k];
    ++assigned;
  }
  return sizes;
}

namespace {

std::vector<std::vector<std::size_t>> deal(Engine& rng, std::vector<std::size_t> rows,
                                           const std::vector<double>& fractions) {
  shuffle(rng, std::span<std::size_t>(rows));
  const auto sizes = part_sizes(rows.size(), fractions);
  std::vector<std::vector<std::size_t>> parts;
  std::size_t offset = 0;
  for (const auto s : sizes) {
    parts.emplace_back(rows.begin() + static_cast<long>(offset),
                       rows.begin() + static_cast<long>(offset + s));
    offset += s;
  }
  return parts;
}

}  // namespace

std::vector<std::vector<std::size_t>> split_indices(const Dataset& data, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = data.rows();
  const std::size_t k = spec.fractions.size();
  if (n < k) {
    throw ValidationError("split: " + std::to_string(n) + " rows cannot fill " + std::to_string(k) + " parts");
  }
  Engine rng(spec.seed);
  std::vector<std::vector<std::size_t>> parts;
  if (!spec.stratify_by_treatment) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    parts = deal(rng, std::move(rows), spec.fractions);
  } else {
    parts.assign(k, {});
    const auto t = data.treatment();
    for (const double arm : {0.0, 1.0}) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < n; ++i) {
        if (t[i] == arm) rows.push_back(i);
      }
      if (rows.empty()) continue;
      auto arm_parts = deal(rng, std::move(rows), spec.fractions);
      for (std::size_t p = 0; p < k; ++p) {
        parts[p].insert(parts[p].end(), arm_parts[p].begin(), arm_parts[p].end());
      }
    }
  }
  // Parts keep the original row order.
  for (auto& p : parts) std::sort(p.begin(), p.end());
  for (std::size_t p = 0; p < k; ++p) {
    if (parts[p].empty()) {
      throw ValidationError("split: part " + std::to_string(p + 1) + " would be empty with " +
                            std::to_string(n) + " rows");
    }
  }
  return parts;
}

Partition split(const Dataset& data, const SplitSpec& spec) {
  Partition out;
  out.row_indices = split_indices(data, spec);
  for (const auto& rows : out.row_indices) out.parts.push_back(data.subset(rows));
  return out;
}

}  // namespace splitrule

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

#ifndef SPLITRULE_CORE_SPLITTING_HPP_
#define SPLITRULE_CORE_SPLITTING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "core/tabular.hpp"

namespace splitrule {

struct SplitSpec {
  std::vector<double> fractions = {0.5, 0.25, 0.25};
  std::uint64_t seed = 0;
  bool stratify_by_treatment = false;

  void validate() const;
};

// Part sizes for n rows: floor(fraction * n), with the remainder handed out
// one row at a time to the leading parts.
std::vector<std::size_t> part_sizes(std::size_t n, const std::vector<double>& fractions);

// Sorted row indices of each part. Deterministic in (data, spec); with
// stratification the arms are dealt separately and merged.
std::vector<std::vector<std::size_t>> split_indices(const Dataset& data, const SplitSpec& spec);

struct Partition {
  std::vector<std::vector<std::size_t>> row_indices;
  std::vector<Dataset> parts;
};

Partition split(const Dataset& data, const SplitSpec& spec);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_SPLITTING_HPP_

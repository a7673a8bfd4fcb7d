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

#ifndef SPLITRULE_CORE_RANDOM_HPP_
#define SPLITRULE_CORE_RANDOM_HPP_

// Portable random draws. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the std:: distributions are not, so every
// conversion to a variate is done here.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace splitrule {

using Engine = std::mt19937_64;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over bytes; stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 14695981039346656037ULL);

// Derives a child seed from a parent seed and a tag sequence.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

// Uniform on [0, 1) with 53 random bits.
double uniform01(Engine& rng);

// Uniform integer in [0, n); unbiased (rejection). n must be > 0.
std::uint64_t uniform_index(Engine& rng, std::uint64_t n);

// Box-Muller, one variate per call.
double standard_normal(Engine& rng);

inline bool bernoulli(Engine& rng, double p) { return uniform01(rng) < p; }

// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(Engine& rng, std::size_t n);

template <typename T>
void shuffle(Engine& rng, std::span<T> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace splitrule

#endif  // SPLITRULE_CORE_RANDOM_HPP_

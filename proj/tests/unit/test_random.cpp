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

#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "core/random.hpp"

using namespace splitrule;

TEST_CASE("engine streams are reproducible") {
  Engine a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(uniform01(a) == uniform01(b));
}

TEST_CASE("uniform01 stays in [0, 1) and has mean one half") {
  Engine rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("standard normal moments") {
  Engine rng(9);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uniform_index covers the range evenly") {
  Engine rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[uniform_index(rng, 7)];
  for (const int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("permutation is a permutation") {
  Engine rng(11);
  auto p = permutation(rng, 50);
  std::sort(p.begin(), p.end());
  std::vector<std::size_t> iota(50);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(p == iota);
}

TEST_CASE("derived seeds differ by tag and are stable") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(derive_seed(5, t));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(5, std::string_view("weighted")) == derive_seed(5, std::string_view("weighted")));
  CHECK(derive_seed(5, std::string_view("weighted")) != derive_seed(5, std::string_view("naive")));
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

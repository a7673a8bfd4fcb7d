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

#ifndef SPLITRULE_TESTS_FIXTURES_HPP_
#define SPLITRULE_TESTS_FIXTURES_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "core/random.hpp"
#include "core/tabular.hpp"

namespace splitrule::testing {

inline Column numeric(std::string name, std::vector<double> values) {
  return Column{std::move(name), NumericColumn{std::move(values)}};
}

inline Schema binary_schema(std::vector<std::string> influencing_treatment, std::vector<std::string> rule,
                            std::optional<std::vector<std::string>> eval = std::nullopt) {
  Schema s;
  s.outcome = "y";
  s.treatment = "t";
  s.outcome_kind = OutcomeKind::kBinary;
  s.higher_is_better = true;
  s.roles = RoleAssignment::from_names(std::move(influencing_treatment), std::move(rule), std::move(eval));
  return s;
}

inline Schema continuous_schema(std::vector<std::string> influencing_treatment, std::vector<std::string> rule) {
  Schema s = binary_schema(std::move(influencing_treatment), std::move(rule));
  s.outcome_kind = OutcomeKind::kContinuous;
  return s;
}

// n rows: x ~ U(0,2), c ~ Bernoulli(0.5), z ~ N(0,1), t ~ Bernoulli(p_treat(c)),
// y continuous = 1 + x + t*(x - 1) + c + noise * N(0,1).
inline Dataset continuous_fixture(std::size_t n, std::uint64_t seed, double p_c0, double p_c1, double noise = 1.0) {
  Engine rng(seed);
  std::vector<double> x(n), c(n), z(n), t(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 2.0 * uniform01(rng);
    c[i] = bernoulli(rng, 0.5) ? 1.0 : 0.0;
    z[i] = standard_normal(rng);
    t[i] = bernoulli(rng, c[i] > 0 ? p_c1 : p_c0) ? 1.0 : 0.0;
    y[i] = 1.0 + x[i] + t[i] * (x[i] - 1.0) + c[i] + noise * standard_normal(rng);
  }
  std::vector<Column> cols{numeric("x", x), numeric("c", c), numeric("z", z), numeric("t", t), numeric("y", y)};
  return Dataset(std::move(cols), continuous_schema({"c"}, {"x", "z"}));
}

// Random design with intercept, standard-normal covariates.
inline Eigen::MatrixXd random_design(Engine& rng, std::size_t n, std::size_t p) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < x.cols(); ++j) x(i, j) = standard_normal(rng);
  }
  return x;
}

inline Eigen::VectorXd random_weights(Engine& rng, std::size_t n) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = 0.1 + 2.0 * uniform01(rng);
  return w;
}

}  // namespace splitrule::testing

#endif  // SPLITRULE_TESTS_FIXTURES_HPP_

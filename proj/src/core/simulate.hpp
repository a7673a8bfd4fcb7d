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

#ifndef SPLITRULE_CORE_SIMULATE_HPP_
#define SPLITRULE_CORE_SIMULATE_HPP_

// Benchmark generator: X ~ U(0, 2), L ~ Bernoulli(0.5), G ~ N(0, 1);
// T | L ~ Bernoulli(0.75) when L = 0 and Bernoulli(0.25) when L = 1;
// P(Y = 1 | X, L, T = t) = expit(b0_t + b1_t X + g_t L).
// L confounds treatment and outcome; (X, G) are the rule inputs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/propensity.hpp"
#include "core/rule.hpp"
#include "core/tabular.hpp"

namespace splitrule {

struct ArmCoefficients {
  double intercept = 0.0;
  double slope_x = 0.0;
  double effect_l = 0.0;
};

struct SimCoefficients {
  ArmCoefficients control{0.0, -0.55, 1.5};
  ArmCoefficients treated{-1.4, 0.55, 1.5};
};

enum class SimMethod { kWeighted, kNaive };

std::string to_string(SimMethod method);
SimMethod parse_sim_method(const std::string& text);

struct SimConfig {
  SimCoefficients coefficients;
  std::vector<std::size_t> sizes = {50, 100, 200, 500, 1000};
  std::vector<SimMethod> methods = {SimMethod::kWeighted, SimMethod::kNaive};
  std::size_t n_eval = 10000;
  std::size_t replications = 200;
  std::size_t benchmark_rows = 1000000;
  std::uint64_t base_seed = 20200101;
  Truncation truncation;

  void validate() const;
  static SimConfig preset(const std::string& name);  // "paper-desk" or "paper-full"
};

// Columns X, L, G, T, Y; roles C^T = {L}, R = {X, G}.
Schema simulation_schema();
Dataset generate(const SimCoefficients& coefficients, std::size_t n, std::uint64_t seed);

// Covariates of an evaluation population (no treatment or outcome drawn).
struct Population {
  std::vector<double> x;
  std::vector<double> l;
  std::vector<double> g;
};

Population draw_population(std::size_t n, std::uint64_t seed);

double true_probability(const SimCoefficients& c, int arm, double x, double l);

using Policy = std::function<std::vector<int>(const Population&)>;

// Mean of the true outcome probability when each member receives the arm the
// policy assigns.
double true_mean_outcome(const Policy& policy, const SimCoefficients& c, std::size_t n_eval,
                         std::uint64_t seed);

// Treats iff the L-averaged true benefit at x is positive; for the default
// coefficients this is x > 14/11.
Policy optimal_policy(const SimCoefficients& c);
Policy constant_policy(int arm);
// The rule must outlive the returned policy.
Policy rule_policy(const TreatmentRule& rule);

BuildOptions simulation_build_options(SimMethod method, const Truncation& truncation);

struct StudyCell {
  SimMethod method = SimMethod::kWeighted;
  std::size_t n_dev = 0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t nonconverged = 0;
  // Averages of the per-arm coefficients over successful replications, in
  // design order (intercept, X, G).
  std::vector<double> mean_control_coefficients;
  std::vector<double> mean_treated_coefficients;
  std::vector<std::string> failure_messages;  // First few only.
};

struct StudyResult {
  SimConfig config;
  double optimal = 0.0;
  double treat_all = 0.0;
  double treat_none = 0.0;
  std::vector<StudyCell> cells;  // Method-major, then size order.
};

std::uint64_t replication_seed(std::uint64_t base, SimMethod method, std::size_t n_dev,
                               std::size_t replication);

StudyResult run_study(const SimConfig& config, int threads);

// Table-shaped CSV: one row per rule type, one column per development size.
std::string study_table_csv(const StudyResult& result);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_SIMULATE_HPP_

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

#ifndef SPLITRULE_CORE_EVALUATE_HPP_
#define SPLITRULE_CORE_EVALUATE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/glm.hpp"
#include "core/propensity.hpp"
#include "core/rule.hpp"
#include "core/tabular.hpp"

namespace splitrule {

struct BootstrapConfig {
  int replicates = 1000;  // 0 disables the bootstrap.
  double level = 0.95;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EvaluationOptions {
  GlmSpec propensity{.link = Link::kLogit};
  Truncation truncation;
  BootstrapConfig bootstrap;
  int threads = 1;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Estimate {
  std::optional<double> value;
  std::optional<Interval> ci;
};

struct EvaluationReport {
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  Estimate ate_positive;
  Estimate ate_negative;
  Estimate abr;
  BootstrapConfig bootstrap;
  int bootstrap_used = 0;
  int bootstrap_redrawn = 0;  // Degenerate resamples discarded and re-drawn.
  WeightSummary propensity_summary;
  std::vector<std::string> warnings;
};

// Inverse-probability-weighted ATE over `rows`:
//   (1/N) sum t y e / p  -  (1/N) sum (1 - t) y e / (1 - p),
// with e the extra weights (all ones when empty). Empty subset -> nullopt.
std::optional<double> ipw_ate(std::span<const std::size_t> rows, std::span<const double> outcome,
                              std::span<const double> treatment, std::span<const double> propensity,
                              std::span<const double> extra = {});

// (N+ / N) * ATE+ + (N- / N) * (-ATE-); a null term drops out.
std::optional<double> average_benefit(std::size_t n_positive, std::size_t n_negative,
                                      std::optional<double> ate_positive,
                                      std::optional<double> ate_negative);

// Evaluates fixed recommendations on `data`: fits P(T=1 | evaluation
// confounders) on `data`, truncates it, and forms ATE+, ATE- and ABR with
// percentile bootstrap intervals that refit the propensity per resample.
EvaluationReport evaluate_recommendations(std::span<const int> recommendations, const Dataset& data,
                                          const EvaluationOptions& options);

EvaluationReport evaluate_rule(const TreatmentRule& rule, const Dataset& data,
                               const EvaluationOptions& options);

// Type-7 sample quantile of unsorted values.
double quantile(std::vector<double> values, double q);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_EVALUATE_HPP_

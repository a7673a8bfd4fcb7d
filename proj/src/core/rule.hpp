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

#ifndef SPLITRULE_CORE_RULE_HPP_
#define SPLITRULE_CORE_RULE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/glm.hpp"
#include "core/propensity.hpp"
#include "core/tabular.hpp"

namespace splitrule {

enum class Weighting { kStabilized, kNone };

std::string to_string(Weighting weighting);
Weighting parse_weighting(const std::string& text);

struct BuildOptions {
  GlmSpec propensity_numerator{.link = Link::kLogit};
  GlmSpec propensity_denominator{.link = Link::kLogit};
  // The link is forced by the outcome kind: identity for continuous outcomes
  // (squared error), logit for binary ones (log-loss).
  GlmSpec rule;
  Truncation truncation;
  Weighting weighting = Weighting::kStabilized;
  double benefit_threshold = 0.0;
};

struct TreatmentRule {
  std::vector<std::string> rule_inputs;
  Encoder encoder;
  FittedGlm control_model;  // f0
  FittedGlm treated_model;  // f1
  OutcomeKind outcome_kind = OutcomeKind::kContinuous;
  bool higher_is_better = true;
  double benefit_threshold = 0.0;
  BuildOptions options;

  // Diagnostics from development.
  std::array<WeightSummary, 2> arm_weights{};
  std::array<std::size_t, 2> arm_rows{};
  std::optional<PropensityPair> propensity;
  std::uint64_t development_fingerprint = 0;
  std::size_t development_rows = 0;
  std::vector<std::string> warnings;
};

// Fits the propensity pair (unless weighting is none), forms arm weights, and
// fits one outcome model per arm on that arm's rows only.
TreatmentRule build_rule(const Dataset& dev, const BuildOptions& options);

// f1(r) - f0(r) on the outcome scale, negated when lower outcomes are better,
// so a positive score always favours treatment.
std::vector<double> score(const TreatmentRule& rule, const Dataset& data);
double score_design_row(const TreatmentRule& rule, const Eigen::RowVectorXd& design_row);

// 1 iff score > benefit_threshold (ties go to no treatment).
std::vector<int> recommend(const TreatmentRule& rule, const Dataset& data);
int recommend_from_score(const TreatmentRule& rule, double score);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_RULE_HPP_

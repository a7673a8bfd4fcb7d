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

#ifndef SPLITRULE_CORE_PROPENSITY_HPP_
#define SPLITRULE_CORE_PROPENSITY_HPP_

#include <optional>
#include <span>
#include <vector>

#include "core/glm.hpp"
#include "core/tabular.hpp"

namespace splitrule {

struct Truncation {
  double lo = 0.05;
  double hi = 0.95;

  double clamp(double p) const;
  double max_ratio() const { return hi / lo; }
  void validate() const;
};

// Numerator P(T=1 | rule inputs) and denominator P(T=1 | rule inputs,
// confounders), each a logistic model with its own encoder.
struct PropensityPair {
  Encoder numerator_encoder;
  FittedGlm numerator;
  Encoder denominator_encoder;
  FittedGlm denominator;
  Truncation truncation;
};

// Throws PositivityError when an arm is empty or carries no weight.
void require_both_arms(const Dataset& data, std::span<const double> weights, const std::string& context);

PropensityPair fit_propensity_pair(const Dataset& data, const GlmSpec& numerator_spec,
                                   const GlmSpec& denominator_spec, Truncation truncation);

// Ratio weights for arm t on every row of `data`:
//   clamp(P(T=t | r)) / clamp(P(T=t | r, c)),
// where P(T=0 | .) = 1 - P(T=1 | .) before clamping, times extra[i] when
// given.
std::vector<double> stabilized_weights(const PropensityPair& pair, const Dataset& data, int arm,
                                       std::optional<std::span<const double>> extra = std::nullopt);

struct WeightSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

WeightSummary summarize(std::span<const double> weights);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_PROPENSITY_HPP_

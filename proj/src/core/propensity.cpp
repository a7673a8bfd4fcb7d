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

#include "core/propensity.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace splitrule {

double Truncation::clamp(double p) const { return std::clamp(p, lo, hi); }

void Truncation::validate() const {
  if (!(lo > 0.0 && lo < hi && hi < 1.0)) {
    throw ValidationError("truncation bounds must satisfy 0 < lo < hi < 1");
  }
}

void require_both_arms(const Dataset& data, std::span<const double> weights,
                       const std::string& context) {
  const auto t = data.treatment();
  double treated = 0.0;
  double control = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    (t[i] == 1.0 ? treated : control) += weights[i];
  }
  if (!(treated > 0.0) || !(control > 0.0)) {
    throw PositivityError(context + ": positivity violated, the " +
                          std::string(treated > 0.0 ? "control (T=0)" : "treated (T=1)") +
                          " arm is empty");
  }
}

PropensityPair fit_propensity_pair(const Dataset& data, const GlmSpec& numerator_spec,
                                   const GlmSpec& denominator_spec, Truncation truncation) {
  truncation.validate();
  const auto& roles = data.roles();
  const auto extra = data.observation_weights();
  require_both_arms(data, extra, "propensity");
  data.require_columns(roles.confounders(), "the propensity denominator");

  const auto t = data.treatment();
  const Eigen::VectorXd response = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(extra.data(), static_cast<Eigen::Index>(extra.size()));

  PropensityPair pair;
  pair.truncation = truncation;
  GlmSpec num = numerator_spec;
  GlmSpec den = denominator_spec;
  num.link = Link::kLogit;
  den.link = Link::kLogit;

  pair.numerator_encoder = Encoder::fit(data, roles.rule_inputs);
  pair.numerator = fit(pair.numerator_encoder.apply(data), response, w, num);
  pair.denominator_encoder = Encoder::fit(data, ordered_union(roles.rule_inputs, roles.confounders()));
  pair.denominator = fit(pair.denominator_encoder.apply(data), response, w, den);
  return pair;
}

std::vector<double> stabilized_weights(const PropensityPair& pair, const Dataset& data, int arm,
                                       std::optional<std::span<const double>> extra) {
  if (arm != 0 && arm != 1) throw ValidationError("arm must be 0 or 1");
  const Eigen::VectorXd num = predict(pair.numerator, pair.numerator_encoder.apply(data));
  const Eigen::VectorXd den = predict(pair.denominator, pair.denominator_encoder.apply(data));
  if (extra && extra->size() != data.rows()) throw ValidationError("extra weights have the wrong length");
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double pn = arm == 1 ? num(k) : 1.0 - num(k);
    const double pd = arm == 1 ? den(k) : 1.0 - den(k);
    out[i] = pair.truncation.clamp(pn) / pair.truncation.clamp(pd);
    if (extra) out[i] *= (*extra)[i];
  }
  return out;
}

WeightSummary summarize(std::span<const double> weights) {
  WeightSummary s;
  if (weights.empty()) return s;
  s.count = weights.size();
  s.min = *std::min_element(weights.begin(), weights.end());
  s.max = *std::max_element(weights.begin(), weights.end());
  double total = 0.0;
  for (const double v : weights) total += v;
  s.mean = total / static_cast<double>(weights.size());
  return s;
}

}  // namespace splitrule

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

#include "core/rule.hpp"

#include "core/errors.hpp"

namespace splitrule {
namespace {

// Re-raises a numerical failure with the arm it happened in.
template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const PositivityError& e) {
    throw PositivityError(context + ": " + e.what());
  } catch (const SeparationError& e) {
    throw SeparationError(context + ": " + e.what());
  } catch (const RankDeficientError& e) {
    throw RankDeficientError(context + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  }
}

double outcome_scale(const FittedGlm& model, const Eigen::RowVectorXd& row) {
  const double eta = row.dot(model.coefficients);
  return model.link() == Link::kLogit ? expit(eta) : eta;
}

}  // namespace

std::string to_string(Weighting weighting) {
  return weighting == Weighting::kNone ? "none" : "stabilized";
}

Weighting parse_weighting(const std::string& text) {
  if (text == "stabilized") return Weighting::kStabilized;
  if (text == "none") return Weighting::kNone;
  throw ValidationError("unknown weighting '" + text + "' (stabilized, none)");
}

TreatmentRule build_rule(const Dataset& dev, const BuildOptions& options) {
  options.truncation.validate();
  const auto& schema = dev.schema();
  dev.require_columns(schema.roles.rule_inputs, "the rule");
  const auto extra = dev.observation_weights();
  require_both_arms(dev, extra, "build");

  TreatmentRule rule;
  rule.rule_inputs = schema.roles.rule_inputs;
  rule.outcome_kind = schema.outcome_kind;
  rule.higher_is_better = schema.higher_is_better;
  rule.benefit_threshold = options.benefit_threshold;
  rule.options = options;
  rule.options.rule.link = schema.outcome_kind == OutcomeKind::kBinary ? Link::kLogit : Link::kIdentity;
  rule.development_fingerprint = dev.fingerprint();
  rule.development_rows = dev.rows();

  std::array<std::vector<double>, 2> weights;
  if (options.weighting == Weighting::kStabilized) {
    rule.propensity = with_context("propensity", [&] {
      return fit_propensity_pair(dev, options.propensity_numerator, options.propensity_denominator,
                                 options.truncation);
    });
    for (int arm = 0; arm < 2; ++arm) {
      weights[static_cast<std::size_t>(arm)] = stabilized_weights(*rule.propensity, dev, arm, extra);
    }
    for (const auto* m : {&rule.propensity->numerator, &rule.propensity->denominator}) {
      for (const auto& w : m->warnings) rule.warnings.push_back("propensity: " + w);
    }
  } else {
    weights = {extra, extra};
  }

  rule.encoder = Encoder::fit(dev, rule.rule_inputs);
  const auto design = rule.encoder.apply(dev);
  const auto t = dev.treatment();
  const auto y = dev.outcome();
  for (int arm = 0; arm < 2; ++arm) {
    const auto a = static_cast<std::size_t>(arm);
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < dev.rows(); ++i) {
      if (t[i] == static_cast<double>(arm)) rows.push_back(static_cast<Eigen::Index>(i));
    }
    const std::string context = "outcome model for arm T=" + std::to_string(arm);
    if (rows.empty()) throw PositivityError(context + ": arm has no rows");

    DesignMatrix x{Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), design.cols()),
                   design.column_names, design.warnings};
    Eigen::VectorXd yy(x.rows());
    Eigen::VectorXd ww(x.rows());
    std::vector<double> arm_weights;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto i = rows[k];
      const auto kk = static_cast<Eigen::Index>(k);
      x.matrix.row(kk) = design.matrix.row(i);
      yy(kk) = y[static_cast<std::size_t>(i)];
      ww(kk) = weights[a][static_cast<std::size_t>(i)];
      arm_weights.push_back(ww(kk));
    }
    rule.arm_rows[a] = rows.size();
    rule.arm_weights[a] = summarize(arm_weights);
    if (!(ww.sum() > 0.0)) throw PositivityError(context + ": arm carries no weight");
    auto model = with_context(context, [&] { return fit(x, yy, ww, rule.options.rule); });
    for (const auto& w : model.warnings) rule.warnings.push_back(context + ": " + w);
    (arm == 0 ? rule.control_model : rule.treated_model) = std::move(model);
  }
  return rule;
}

double score_design_row(const TreatmentRule& rule, const Eigen::RowVectorXd& design_row) {
  if (design_row.size() != rule.treated_model.coefficients.size() ||
      design_row.size() != rule.control_model.coefficients.size()) {
    throw ValidationError("score: design row width does not match the rule");
  }
  const double diff = outcome_scale(rule.treated_model, design_row) -
                      outcome_scale(rule.control_model, design_row);
  return rule.higher_is_better ? diff : -diff;
}

std::vector<double> score(const TreatmentRule& rule, const Dataset& data) {
  data.require_columns(rule.rule_inputs, "scoring the rule");
  const auto design = rule.encoder.apply(data);
  std::vector<double> out(data.rows());
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = score_design_row(rule, design.matrix.row(i));
  }
  return out;
}

int recommend_from_score(const TreatmentRule& rule, double s) {
  return s > rule.benefit_threshold ? 1 : 0;
}

std::vector<int> recommend(const TreatmentRule& rule, const Dataset& data) {
  const auto scores = score(rule, data);
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = recommend_from_score(rule, scores[i]);
  return out;
}

}  // namespace splitrule

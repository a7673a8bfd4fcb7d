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

#include "core/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"

namespace splitrule {
namespace {

constexpr int kMaxRedraws = 100;

DesignMatrix confounder_design(const Dataset& data, const std::vector<std::string>& columns) {
  if (columns.empty()) {
    return DesignMatrix{Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(data.rows()), 1),
                        {"(Intercept)"}, {}};
  }
  data.require_columns(columns, "the evaluation propensity model");
  return encode(data, columns);
}

struct Sample {
  std::vector<double> y;
  std::vector<double> t;
  std::vector<double> extra;
  std::vector<int> rec;
  DesignMatrix x;
};

struct Point {
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::optional<double> ate_positive;
  std::optional<double> ate_negative;
  std::optional<double> abr;
  WeightSummary propensity;
};

// One full pass: propensity fit on the sample, then the three estimators.
Point estimate(const Sample& s, const EvaluationOptions& options) {
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(s.t.data(), static_cast<Eigen::Index>(s.t.size()));
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(s.extra.data(), static_cast<Eigen::Index>(s.extra.size()));
  GlmSpec spec = options.propensity;
  spec.link = Link::kLogit;
  const auto model = fit(s.x, t, w, spec);
  const Eigen::VectorXd raw = predict(model, s.x);
  std::vector<double> p(s.t.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = options.truncation.clamp(raw(static_cast<Eigen::Index>(i)));

  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
  for (std::size_t i = 0; i < s.rec.size(); ++i) (s.rec[i] == 1 ? positive : negative).push_back(i);

  Point out;
  out.n_positive = positive.size();
  out.n_negative = negative.size();
  out.ate_positive = ipw_ate(positive, s.y, s.t, p, s.extra);
  out.ate_negative = ipw_ate(negative, s.y, s.t, p, s.extra);
  out.abr = average_benefit(out.n_positive, out.n_negative, out.ate_positive, out.ate_negative);
  out.propensity = summarize(p);
  return out;
}

// Arms present within the recommended-treat and recommended-control subsets.
std::array<int, 2> arm_mask(const std::vector<int>& rec, const std::vector<double>& t,
                            std::span<const std::size_t> rows) {
  std::array<int, 2> mask{0, 0};
  for (const auto i : rows) mask[static_cast<std::size_t>(rec[i])] |= t[i] == 1.0 ? 2 : 1;
  return mask;
}

}  // namespace

void BootstrapConfig::validate() const {
  if (replicates < 0) throw ValidationError("bootstrap replicates must be >= 0");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("bootstrap level must lie in (0, 1)");
}

std::optional<double> ipw_ate(std::span<const std::size_t> rows, std::span<const double> outcome,
                              std::span<const double> treatment, std::span<const double> propensity,
                              std::span<const double> extra) {
  if (rows.empty()) return std::nullopt;
  double treated = 0.0;
  double control = 0.0;
  for (const auto j : rows) {
    const double e = extra.empty() ? 1.0 : extra[j];
    const double p = propensity[j];
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("ipw_ate: propensity outside (0, 1)");
    treated += treatment[j] * outcome[j] * e / p;
    control += (1.0 - treatment[j]) * outcome[j] * e / (1.0 - p);
  }
  const auto n = static_cast<double>(rows.size());
  return treated / n - control / n;
}

std::optional<double> average_benefit(std::size_t n_positive, std::size_t n_negative,
                                      std::optional<double> ate_positive,
                                      std::optional<double> ate_negative) {
  const auto total = static_cast<double>(n_positive + n_negative);
  if (total == 0.0) return std::nullopt;
  double abr = 0.0;
  if (n_positive > 0) abr += (static_cast<double>(n_positive) / total) * ate_positive.value();
  if (n_negative > 0) abr += (static_cast<double>(n_negative) / total) * (-ate_negative.value());
  return abr;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EvaluationReport evaluate_recommendations(std::span<const int> recommendations, const Dataset& data,
                                          const EvaluationOptions& options) {
  options.truncation.validate();
  options.bootstrap.validate();
  if (data.rows() == 0) throw ValidationError("evaluate: empty evaluation set");
  if (recommendations.size() != data.rows()) {
    throw ValidationError("evaluate: recommendation count does not match the evaluation rows");
  }
  Sample full;
  full.y.assign(data.outcome().begin(), data.outcome().end());
  full.t.assign(data.treatment().begin(), data.treatment().end());
  full.extra = data.observation_weights();
  full.rec.assign(recommendations.begin(), recommendations.end());
  for (const int r : full.rec) {
    if (r != 0 && r != 1) throw ValidationError("evaluate: recommendations must be 0 or 1");
  }
  full.x = confounder_design(data, data.roles().c_t_eval);
  require_both_arms(data, full.extra, "evaluate");

  const Point point = estimate(full, options);
  EvaluationReport report;
  report.n_positive = point.n_positive;
  report.n_negative = point.n_negative;
  report.ate_positive.value = point.ate_positive;
  report.ate_negative.value = point.ate_negative;
  report.abr.value = point.abr;
  report.bootstrap = options.bootstrap;
  report.propensity_summary = point.propensity;
  if (options.bootstrap.replicates == 0) return report;

  // Subsets whose point estimate saw both arms must see both in a resample.
  std::vector<std::size_t> all(data.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto needed = arm_mask(full.rec, full.t, all);

  struct Replicate {
    std::optional<Point> point;
    int redrawn = 0;
  };
  const auto b_count = static_cast<std::size_t>(options.bootstrap.replicates);
  std::vector<Replicate> reps(b_count);
  const std::size_t n = data.rows();
  parallel_for(b_count, options.threads, [&](std::size_t b) {
    Engine rng(derive_seed(options.bootstrap.seed, static_cast<std::uint64_t>(b)));
    Sample s;
    s.y.resize(n);
    s.t.resize(n);
    s.extra.resize(n);
    s.rec.resize(n);
    s.x.matrix.resize(full.x.rows(), full.x.cols());
    s.x.column_names = full.x.column_names;
    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, n));
        s.y[i] = full.y[j];
        s.t[i] = full.t[j];
        s.extra[i] = full.extra[j];
        s.rec[i] = full.rec[j];
        s.x.matrix.row(static_cast<Eigen::Index>(i)) = full.x.matrix.row(static_cast<Eigen::Index>(j));
      }
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      const auto got = arm_mask(s.rec, s.t, idx);
      bool arms_ok = true;
      for (std::size_t k = 0; k < 2; ++k) {
        if (needed[k] == 3 && got[k] != 3) arms_ok = false;
        if (needed[k] != 0 && got[k] == 0) arms_ok = false;
      }
      const bool treated = std::find(s.t.begin(), s.t.end(), 1.0) != s.t.end();
      const bool control = std::find(s.t.begin(), s.t.end(), 0.0) != s.t.end();
      if (arms_ok && treated && control) {
        try {
          reps[b].point = estimate(s, options);
          return;
        } catch (const NumericalError&) {
          // Propensity fit failed on this resample; draw again.
        }
      }
      ++reps[b].redrawn;
    }
  });

  std::vector<double> ate_pos;
  std::vector<double> ate_neg;
  std::vector<double> abr;
  int failed = 0;
  for (const auto& r : reps) {
    report.bootstrap_redrawn += r.redrawn;
    if (!r.point) {
      ++failed;
      continue;
    }
    ++report.bootstrap_used;
    if (r.point->ate_positive) ate_pos.push_back(*r.point->ate_positive);
    if (r.point->ate_negative) ate_neg.push_back(*r.point->ate_negative);
    if (r.point->abr) abr.push_back(*r.point->abr);
  }
  if (failed > 0) {
    report.warnings.push_back(std::to_string(failed) + " bootstrap replicate(s) stayed degenerate after " +
                              std::to_string(kMaxRedraws) + " redraws and were dropped");
  }
  const double alpha = 1.0 - options.bootstrap.level;
  auto interval = [&](const std::vector<double>& v, const std::optional<double>& point_value) -> std::optional<Interval> {
    if (!point_value || v.size() < 2) return std::nullopt;
    return Interval{quantile(v, alpha / 2.0), quantile(v, 1.0 - alpha / 2.0)};
  };
  report.ate_positive.ci = interval(ate_pos, report.ate_positive.value);
  report.ate_negative.ci = interval(ate_neg, report.ate_negative.value);
  report.abr.ci = interval(abr, report.abr.value);
  return report;
}

EvaluationReport evaluate_rule(const TreatmentRule& rule, const Dataset& data,
                               const EvaluationOptions& options) {
  data.require_columns(rule.rule_inputs, "the rule's inputs");
  const auto rec = recommend(rule, data);
  return evaluate_recommendations(rec, data, options);
}

}  // namespace splitrule

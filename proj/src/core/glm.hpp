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

#ifndef SPLITRULE_CORE_GLM_HPP_
#define SPLITRULE_CORE_GLM_HPP_

// Observation-weighted linear and logistic regression with optional lasso or
// ridge penalties.
//
// Weights are normalised to sum to one, so for weights w and penalty P the
// minimised objective is
//
//   identity:  1/2 * sum_i w_i (y_i - x_i'b)^2               + P(b)
//   logit:     sum_i w_i [-y_i log p_i - (1 - y_i) log(1 - p_i)] + P(b)
//
// with P(b) = lambda * sum_j s_j |b_j| (lasso) or lambda/2 * sum_j (s_j b_j)^2
// (ridge). The intercept is never penalised; s_j is the weighted standard
// deviation of column j when standardising and 1 otherwise.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/tabular.hpp"

namespace splitrule {

enum class Link { kIdentity, kLogit };
enum class Penalty { kNone, kRidge, kLasso };

std::string to_string(Link link);
std::string to_string(Penalty penalty);
Link parse_link(const std::string& text);
Penalty parse_penalty(const std::string& text);

inline constexpr double kIrlsWeightFloor = 1e-10;
inline constexpr double kSeparationNorm = 1e6;

struct GlmSpec {
  Link link = Link::kIdentity;
  Penalty penalty = Penalty::kNone;
  double lambda = 0.0;
  // When set, lambda is chosen by cross-validation over lambda_grid (or the
  // default grid when that is empty).
  bool cross_validate = false;
  std::vector<double> lambda_grid;
  int cv_folds = 5;
  std::uint64_t cv_seed = 1;
  // Defaults to on for penalised fits and off otherwise.
  std::optional<bool> standardize;
  int max_iter = 10000;
  double tol = 1e-7;

  bool standardized() const { return standardize.value_or(penalty != Penalty::kNone); }
  void validate() const;
};

struct FittedGlm {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  GlmSpec spec;
  double lambda_used = 0.0;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  std::vector<std::string> warnings;

  Link link() const { return spec.link; }
};

// Logistic function with the linear predictor clamped to +-36 so results stay
// strictly inside (0, 1).
double expit(double eta);

// Throws ValidationError on bad inputs, RankDeficientError for a singular
// unpenalised system, SeparationError when logistic coefficients diverge.
// Non-convergence is reported through `converged` and `warnings`.
FittedGlm fit(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
              const GlmSpec& spec);

Eigen::VectorXd predict(const FittedGlm& model, const DesignMatrix& x);
Eigen::VectorXd linear_predictor(const FittedGlm& model, const Eigen::MatrixXd& x);

// Smallest lambda at which the lasso keeps every non-intercept coefficient at
// zero, on the scale the fit uses (standardised columns when spec says so).
double lambda_max(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                  const GlmSpec& spec);

// 100 log-spaced values from the top of the path down to 1e-3 of it. The top
// is lambda_max for the lasso and 1000 * lambda_max for ridge.
std::vector<double> default_lambda_grid(const DesignMatrix& x, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& w, const GlmSpec& spec);

struct CvResult {
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_loss;  // NaN where every fold failed.
  int folds_used = 0;
  std::vector<std::string> warnings;
};

// K-fold cross-validation of the weighted held-out loss (squared error or
// log-loss). Ties go to the larger lambda.
CvResult cv_lambda(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                   const GlmSpec& spec);

// Penalised objective of `beta` under the given spec and lambda.
double glm_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& beta, const GlmSpec& spec, double lambda);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_GLM_HPP_

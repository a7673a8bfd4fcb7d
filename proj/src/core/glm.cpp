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

#include "core/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/random.hpp"

namespace splitrule {
namespace {

constexpr double kRankThreshold = 1e-12;
constexpr int kMaxHalvings = 30;
// Linear predictor beyond which a fitted probability is numerically 0 or 1.
constexpr double kSaturatedEta = 30.0;
constexpr int kSaturationGrace = 25;

// Design in the coordinates the solver works in: column 0 is the intercept,
// other columns are optionally centred and scaled by their weighted moments.
struct WorkingDesign {
  Eigen::MatrixXd z;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
  std::vector<std::string> warnings;
};

WorkingDesign prepare(const Eigen::MatrixXd& x, const Eigen::VectorXd& wn, bool standardize,
                      const std::vector<std::string>& names) {
  const Eigen::Index p = x.cols();
  WorkingDesign wd{x, Eigen::VectorXd::Zero(p), Eigen::VectorXd::Ones(p), {}};
  if (!standardize) return wd;
  for (Eigen::Index j = 1; j < p; ++j) {
    const double m = wn.dot(x.col(j));
    const double var = wn.dot((x.col(j).array() - m).square().matrix());
    const double sd = std::sqrt(std::max(var, 0.0));
    wd.center(j) = m;
    if (sd > 1e-12 * std::max(1.0, std::abs(m))) {
      wd.scale(j) = sd;
    } else {
      wd.warnings.push_back("column '" + names[static_cast<std::size_t>(j)] +
                            "' has zero weighted variance; its coefficient is held at 0");
    }
    wd.z.col(j) = (x.col(j).array() - m) / wd.scale(j);
  }
  return wd;
}

Eigen::VectorXd to_original(const WorkingDesign& wd, const Eigen::VectorXd& gamma) {
  Eigen::VectorXd beta = gamma.cwiseQuotient(wd.scale);
  beta(0) = gamma(0) - wd.center.tail(gamma.size() - 1).dot(beta.tail(gamma.size() - 1));
  return beta;
}

double log1pexp(double eta) {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double data_loss(Link link, const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& wn) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (wn(i) == 0.0) continue;
    if (link == Link::kIdentity) {
      const double r = y(i) - eta(i);
      loss += 0.5 * wn(i) * r * r;
    } else {
      loss += wn(i) * (log1pexp(eta(i)) - y(i) * eta(i));
    }
  }
  return loss;
}

double penalty_value(Penalty penalty, double lambda, const Eigen::VectorXd& gamma) {
  const auto tail = gamma.tail(gamma.size() - 1);
  switch (penalty) {
    case Penalty::kLasso:
      return lambda * tail.cwiseAbs().sum();
    case Penalty::kRidge:
      return 0.5 * lambda * tail.squaredNorm();
    case Penalty::kNone:
      break;
  }
  return 0.0;
}

double working_objective(const WorkingDesign& wd, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& wn, const Eigen::VectorXd& gamma, Link link,
                         Penalty penalty, double lambda) {
  return data_loss(link, wd.z * gamma, y, wn) + penalty_value(penalty, lambda, gamma);
}

// Solves min sum_i u_i (t_i - z_i'g)^2 + ridge * sum_{j>0} g_j^2.
Eigen::VectorXd solve_weighted(const Eigen::MatrixXd& z, const Eigen::VectorXd& t,
                               const Eigen::VectorXd& u, double ridge) {
  const Eigen::VectorXd su = u.cwiseSqrt();
  if (ridge == 0.0) {
    const Eigen::MatrixXd a = su.asDiagonal() * z;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < z.cols()) {
      throw RankDeficientError("weighted design is rank deficient (rank " + std::to_string(qr.rank()) +
                               " < " + std::to_string(z.cols()) +
                               " columns); drop collinear columns or use a penalized spec");
    }
    return qr.solve(su.cwiseProduct(t));
  }
  Eigen::MatrixXd h = z.transpose() * u.asDiagonal() * z;
  h.diagonal().tail(z.cols() - 1).array() += ridge;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < z.cols()) throw RankDeficientError("penalized normal equations are singular");
  return qr.solve(z.transpose() * u.cwiseProduct(t));
}

double soft_threshold(double v, double lambda) {
  if (v > lambda) return v - lambda;
  if (v < -lambda) return v + lambda;
  return 0.0;
}

// Cyclic coordinate descent on 1/2 sum_i u_i (t_i - z_i'g)^2 + lambda sum_{j>0} |g_j|.
// `resid` must equal t - z * gamma on entry and is kept in sync.
int coordinate_descent(const Eigen::MatrixXd& z, const Eigen::VectorXd& u, double lambda,
                       double tol, int max_iter, Eigen::VectorXd& gamma, Eigen::VectorXd& resid,
                       bool& converged) {
  const Eigen::Index p = z.cols();
  const double usum = u.sum();
  Eigen::VectorXd curvature(p);
  for (Eigen::Index j = 0; j < p; ++j) curvature(j) = u.dot(z.col(j).cwiseAbs2());
  converged = false;
  int it = 0;
  while (it < max_iter) {
    ++it;
    double max_change = 0.0;
    const double d0 = u.dot(resid) / usum;
    gamma(0) += d0;
    resid.array() -= d0;
    max_change = std::abs(d0);
    for (Eigen::Index j = 1; j < p; ++j) {
      if (curvature(j) <= 0.0) continue;
      const double rho = u.dot(z.col(j).cwiseProduct(resid)) + curvature(j) * gamma(j);
      const double next = soft_threshold(rho, lambda) / curvature(j);
      const double d = next - gamma(j);
      if (d != 0.0) {
        resid -= d * z.col(j);
        gamma(j) = next;
        max_change = std::max(max_change, std::abs(d));
      }
    }
    if (max_change < tol) {
      converged = true;
      break;
    }
  }
  return it;
}

double weighted_mean(const Eigen::VectorXd& y, const Eigen::VectorXd& wn) { return wn.dot(y); }

double logit(double p) { return std::log(p / (1.0 - p)); }

void validate_inputs(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                     const GlmSpec& spec) {
  spec.validate();
  if (x.rows() != y.size() || x.rows() != w.size()) {
    throw ValidationError("fit: design has " + std::to_string(x.rows()) + " rows but response has " +
                          std::to_string(y.size()) + " and weights " + std::to_string(w.size()));
  }
  if (x.cols() < 1) throw ValidationError("fit: design has no columns");
  if (!y.allFinite()) throw ValidationError("fit: response has non-finite values");
  if (!w.allFinite() || (w.array() < 0.0).any()) {
    throw ValidationError("fit: weights must be finite and non-negative");
  }
  if (!(w.sum() > 0.0)) throw ValidationError("fit: all observation weights are zero");
  if (spec.link == Link::kLogit && !((y.array() == 0.0) || (y.array() == 1.0)).all()) {
    throw ValidationError("fit: logit link needs a 0/1 response");
  }
}

Eigen::VectorXd null_model(const WorkingDesign& wd, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& wn, Link link) {
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(wd.z.cols());
  const double mean = weighted_mean(y, wn);
  if (link == Link::kIdentity) {
    gamma(0) = mean;
  } else {
    if (mean <= 0.0 || mean >= 1.0) {
      throw SeparationError("logistic fit: response has a single class among weighted rows");
    }
    gamma(0) = logit(mean);
  }
  return gamma;
}

double working_lambda_max(const WorkingDesign& wd, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& wn) {
  const Eigen::VectorXd r = y.array() - weighted_mean(y, wn);
  double top = 0.0;
  for (Eigen::Index j = 1; j < wd.z.cols(); ++j) {
    top = std::max(top, std::abs(wn.dot(wd.z.col(j).cwiseProduct(r))));
  }
  return top;
}

struct SolveResult {
  Eigen::VectorXd gamma;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
};

SolveResult solve_identity(const WorkingDesign& wd, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& wn, const GlmSpec& spec, double lambda) {
  SolveResult out;
  if (spec.penalty != Penalty::kLasso) {
    const double ridge = spec.penalty == Penalty::kRidge ? lambda : 0.0;
    out.gamma = solve_weighted(wd.z, y, wn, ridge);
    out.converged = true;
    out.iterations = 1;
    return out;
  }
  out.gamma = null_model(wd, y, wn, Link::kIdentity);
  if (lambda >= working_lambda_max(wd, y, wn)) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXd resid = y - wd.z * out.gamma;
  out.iterations = coordinate_descent(wd.z, wn, lambda, spec.tol, spec.max_iter, out.gamma, resid,
                                      out.converged);
  return out;
}

// Rows whose fitted probability is numerically 0 or 1 on the side of their
// own outcome.
Eigen::Index saturated_rows(const Eigen::VectorXd& eta, const Eigen::VectorXd& y, const Eigen::VectorXd& wn) {
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (wn(i) > 0.0 && ((y(i) > 0.5 && eta(i) > kSaturatedEta) || (y(i) < 0.5 && eta(i) < -kSaturatedEta))) ++n;
  }
  return n;
}

SolveResult solve_logit(const WorkingDesign& wd, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& wn, const GlmSpec& spec, double lambda) {
  SolveResult out;
  out.gamma = null_model(wd, y, wn, Link::kLogit);
  if (spec.penalty == Penalty::kLasso && lambda >= working_lambda_max(wd, y, wn)) {
    out.converged = true;
    return out;
  }
  const double ridge = spec.penalty == Penalty::kRidge ? lambda : 0.0;
  const double l1 = spec.penalty == Penalty::kLasso ? lambda : 0.0;
  double obj = working_objective(wd, y, wn, out.gamma, Link::kLogit, spec.penalty, lambda);
  bool inner_stalled = false;

  while (out.iterations < spec.max_iter) {
    ++out.iterations;
    const Eigen::VectorXd eta = wd.z * out.gamma;
    Eigen::VectorXd v(eta.size());
    Eigen::VectorXd working(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double p = expit(eta(i));
      v(i) = std::max(p * (1.0 - p), kIrlsWeightFloor);
      working(i) = eta(i) + (y(i) - p) / v(i);
    }
    const Eigen::VectorXd u = wn.cwiseProduct(v);

    Eigen::VectorXd next;
    if (spec.penalty == Penalty::kLasso) {
      next = out.gamma;
      Eigen::VectorXd resid = working - eta;
      bool inner_ok = false;
      coordinate_descent(wd.z, u, l1, spec.tol * 0.1, spec.max_iter, next, resid, inner_ok);
      inner_stalled = inner_stalled || !inner_ok;
    } else {
      next = solve_weighted(wd.z, working, u, ridge);
    }

    // Newton steps can overshoot far from the optimum; halve back toward the
    // current point until the objective does not increase.
    double next_obj = working_objective(wd, y, wn, next, Link::kLogit, spec.penalty, lambda);
    for (int h = 0; h < kMaxHalvings && !(next_obj <= obj + 1e-13 * std::abs(obj)); ++h) {
      next = 0.5 * (next + out.gamma);
      next_obj = working_objective(wd, y, wn, next, Link::kLogit, spec.penalty, lambda);
    }
    const double change = (next - out.gamma).cwiseAbs().maxCoeff();
    out.gamma = next;
    obj = next_obj;
    if (!out.gamma.allFinite() || out.gamma.norm() > kSeparationNorm) {
      throw SeparationError(
          "logistic fit diverged (coefficient norm > 1e6): the response is perfectly separated; "
          "use a penalized (ridge or lasso) spec");
    }
    if (change < spec.tol) {
      out.converged = true;
      break;
    }
    // Under separation the coefficients diverge, but in floating point IRLS
    // stalls once the separated rows reach probability 0 or 1.
    if (ridge == 0.0 && l1 == 0.0 && out.iterations >= kSaturationGrace &&
        saturated_rows(wd.z * out.gamma, y, wn) > 0) {
      throw SeparationError(
          "logistic fit diverged: fitted probabilities reached 0 or 1, the response is separated; "
          "use a penalized (ridge or lasso) spec");
    }
  }
  if (inner_stalled) out.warnings.push_back("inner coordinate descent hit max_iter");
  return out;
}

}  // namespace

std::string to_string(Link link) { return link == Link::kLogit ? "logit" : "identity"; }

std::string to_string(Penalty penalty) {
  switch (penalty) {
    case Penalty::kRidge:
      return "ridge";
    case Penalty::kLasso:
      return "lasso";
    case Penalty::kNone:
      break;
  }
  return "none";
}

Link parse_link(const std::string& text) {
  if (text == "identity") return Link::kIdentity;
  if (text == "logit") return Link::kLogit;
  throw ValidationError("unknown link '" + text + "' (identity, logit)");
}

Penalty parse_penalty(const std::string& text) {
  if (text == "none") return Penalty::kNone;
  if (text == "ridge") return Penalty::kRidge;
  if (text == "lasso") return Penalty::kLasso;
  throw ValidationError("unknown penalty '" + text + "' (none, ridge, lasso)");
}

void GlmSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("glm: lambda must be >= 0");
  if (!(tol > 0.0)) throw ValidationError("glm: tol must be > 0");
  if (max_iter < 1) throw ValidationError("glm: max_iter must be >= 1");
  if (cross_validate) {
    if (penalty == Penalty::kNone) throw ValidationError("glm: cross-validation needs a penalty");
    if (cv_folds < 2) throw ValidationError("glm: cv needs at least 2 folds");
  }
  for (const double l : lambda_grid) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ValidationError("glm: lambda grid values must be >= 0");
  }
}

double expit(double eta) {
  const double e = std::clamp(eta, -36.0, 36.0);
  return 1.0 / (1.0 + std::exp(-e));
}

double glm_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& beta, const GlmSpec& spec, double lambda) {
  const Eigen::VectorXd wn = w / w.sum();
  double penalty = 0.0;
  if (spec.penalty != Penalty::kNone) {
    std::vector<std::string> names(static_cast<std::size_t>(x.cols()));
    const auto wd = prepare(x, wn, spec.standardized(), names);
    penalty = penalty_value(spec.penalty, lambda, beta.cwiseProduct(wd.scale));
  }
  return data_loss(spec.link, x * beta, y, wn) + penalty;
}

double lambda_max(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                  const GlmSpec& spec) {
  validate_inputs(x, y, w, spec);
  const Eigen::VectorXd wn = w / w.sum();
  return working_lambda_max(prepare(x.matrix, wn, spec.standardized(), x.column_names), y, wn);
}

std::vector<double> default_lambda_grid(const DesignMatrix& x, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& w, const GlmSpec& spec) {
  double top = lambda_max(x, y, w, spec);
  if (spec.penalty == Penalty::kRidge) top *= 1000.0;
  if (!(top > 0.0)) return {0.0};
  std::vector<double> grid;
  constexpr int kCount = 100;
  for (int k = 0; k < kCount; ++k) {
    grid.push_back(top * std::pow(10.0, -3.0 * k / (kCount - 1)));
  }
  return grid;
}

FittedGlm fit(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
              const GlmSpec& spec) {
  validate_inputs(x, y, w, spec);
  FittedGlm out;
  out.names = x.column_names;
  out.spec = spec;

  double lambda = spec.penalty == Penalty::kNone ? 0.0 : spec.lambda;
  if (spec.cross_validate) {
    auto cv = cv_lambda(x, y, w, spec);
    lambda = cv.lambda;
    out.warnings.insert(out.warnings.end(), cv.warnings.begin(), cv.warnings.end());
  }
  out.lambda_used = lambda;

  const Eigen::VectorXd wn = w / w.sum();
  const bool standardize = spec.penalty != Penalty::kNone && spec.standardized();
  const auto wd = prepare(x.matrix, wn, standardize, x.column_names);
  if (spec.penalty != Penalty::kNone) {
    out.warnings.insert(out.warnings.end(), wd.warnings.begin(), wd.warnings.end());
    out.warnings.insert(out.warnings.end(), x.warnings.begin(), x.warnings.end());
  }

  const auto solved = spec.link == Link::kIdentity ? solve_identity(wd, y, wn, spec, lambda)
                                                   : solve_logit(wd, y, wn, spec, lambda);
  out.coefficients = to_original(wd, solved.gamma);
  out.converged = solved.converged;
  out.iterations = solved.iterations;
  out.warnings.insert(out.warnings.end(), solved.warnings.begin(), solved.warnings.end());
  if (!out.coefficients.allFinite()) throw NumericalError("fit produced non-finite coefficients");
  if (spec.link == Link::kLogit && out.coefficients.norm() > kSeparationNorm) {
    throw SeparationError("logistic fit diverged (coefficient norm > 1e6); use a penalized spec");
  }
  if (!out.converged) {
    out.warnings.push_back("did not converge within max_iter = " + std::to_string(spec.max_iter));
  }
  out.objective = working_objective(wd, y, wn, solved.gamma, spec.link, spec.penalty, lambda);
  return out;
}

Eigen::VectorXd linear_predictor(const FittedGlm& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.coefficients.size()) {
    throw ValidationError("predict: design has " + std::to_string(x.cols()) + " columns, model has " +
                          std::to_string(model.coefficients.size()) + " coefficients");
  }
  return x * model.coefficients;
}

Eigen::VectorXd predict(const FittedGlm& model, const DesignMatrix& x) {
  Eigen::VectorXd eta = linear_predictor(model, x.matrix);
  if (model.link() == Link::kLogit) eta = eta.unaryExpr([](double e) { return expit(e); });
  return eta;
}

namespace {

double held_out_loss(Link link, const Eigen::VectorXd& pred, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (link == Link::kIdentity) {
      total += w(i) * (y(i) - pred(i)) * (y(i) - pred(i));
    } else {
      total -= w(i) * (y(i) * std::log(pred(i)) + (1.0 - y(i)) * std::log(1.0 - pred(i)));
    }
  }
  return total / w.sum();
}

DesignMatrix take_rows(const DesignMatrix& x, const std::vector<Eigen::Index>& rows) {
  DesignMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), x.cols()), x.column_names, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) out.matrix.row(static_cast<Eigen::Index>(i)) = x.matrix.row(rows[i]);
  return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(rows[i]);
  return out;
}

bool both_classes(const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  bool zero = false;
  bool one = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (w(i) <= 0.0) continue;
    (y(i) == 1.0 ? one : zero) = true;
  }
  return zero && one;
}

}  // namespace

CvResult cv_lambda(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                   const GlmSpec& spec) {
  GlmSpec base = spec;
  base.cross_validate = false;
  validate_inputs(x, y, w, base);
  if (spec.cv_folds < 2) throw ValidationError("cv: need at least 2 folds");
  const auto n = static_cast<std::size_t>(x.rows());
  if (n < static_cast<std::size_t>(spec.cv_folds)) {
    throw ValidationError("cv: fewer rows than folds");
  }

  CvResult out;
  out.grid = spec.lambda_grid.empty() ? default_lambda_grid(x, y, w, base) : spec.lambda_grid;
  if (out.grid.empty()) throw ValidationError("cv: lambda grid is empty");
  std::sort(out.grid.begin(), out.grid.end(), std::greater<>());

  Engine rng(spec.cv_seed);
  const auto perm = permutation(rng, n);
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(spec.cv_folds));

  std::vector<double> sum(out.grid.size(), 0.0);
  std::vector<int> count(out.grid.size(), 0);
  for (int k = 0; k < spec.cv_folds; ++k) {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> test;
    for (std::size_t i = 0; i < n; ++i) (fold[i] == k ? test : train).push_back(static_cast<Eigen::Index>(i));
    const auto x_train = take_rows(x, train);
    const auto x_test = take_rows(x, test);
    const auto y_train = take(y, train);
    const auto y_test = take(y, test);
    const auto w_train = take(w, train);
    const auto w_test = take(w, test);
    const std::string tag = "cv fold " + std::to_string(k + 1);
    if (!(w_train.sum() > 0.0) || !(w_test.sum() > 0.0)) {
      out.warnings.push_back(tag + " skipped: no weight");
      continue;
    }
    if (spec.link == Link::kLogit && (!both_classes(y_train, w_train) || !both_classes(y_test, w_test))) {
      out.warnings.push_back(tag + " skipped: single response class");
      continue;
    }
    ++out.folds_used;
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
      GlmSpec s = base;
      s.lambda = out.grid[g];
      try {
        const auto model = fit(x_train, y_train, w_train, s);
        sum[g] += held_out_loss(spec.link, predict(model, x_test), y_test, w_test);
        ++count[g];
      } catch (const NumericalError& e) {
        out.warnings.push_back(tag + ", lambda " + std::to_string(out.grid[g]) + ": " + e.what());
      }
    }
  }
  if (out.folds_used == 0) throw ValidationError("cv: every fold is degenerate");

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  out.mean_loss.resize(out.grid.size());
  for (std::size_t g = 0; g < out.grid.size(); ++g) {
    out.mean_loss[g] = count[g] > 0 ? sum[g] / count[g] : std::numeric_limits<double>::quiet_NaN();
    // Strict comparison: on ties the earlier (larger) lambda stays.
    if (count[g] > 0 && out.mean_loss[g] < best) {
      best = out.mean_loss[g];
      out.lambda = out.grid[g];
      found = true;
    }
  }
  if (!found) throw NumericalError("cv: no lambda could be fitted in any fold");
  return out;
}

}  // namespace splitrule

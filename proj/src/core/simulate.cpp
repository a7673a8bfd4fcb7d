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

#include "core/simulate.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/random.hpp"

namespace splitrule {
namespace {

const ArmCoefficients& arm_of(const SimCoefficients& c, int arm) {
  return arm == 1 ? c.treated : c.control;
}

std::string format_number(double v) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << v;
  return s.str();
}

}  // namespace

std::string to_string(SimMethod method) {
  return method == SimMethod::kNaive ? "naive" : "weighted";
}

SimMethod parse_sim_method(const std::string& text) {
  if (text == "weighted") return SimMethod::kWeighted;
  if (text == "naive") return SimMethod::kNaive;
  throw ValidationError("unknown simulation method '" + text + "' (weighted, naive)");
}

void SimConfig::validate() const {
  if (sizes.empty()) throw ValidationError("simulate: no development sizes");
  for (const auto s : sizes) {
    if (s < 2) throw ValidationError("simulate: development sizes must be >= 2");
  }
  if (methods.empty()) throw ValidationError("simulate: no methods");
  if (n_eval == 0 || replications == 0 || benchmark_rows == 0) {
    throw ValidationError("simulate: n_eval, replications and benchmark_rows must be positive");
  }
  truncation.validate();
}

SimConfig SimConfig::preset(const std::string& name) {
  SimConfig c;
  if (name == "paper-desk") return c;
  if (name == "paper-full") {
    c.replications = 1000;
    return c;
  }
  throw ValidationError("unknown preset '" + name + "' (paper-desk, paper-full)");
}

Schema simulation_schema() {
  Schema s;
  s.outcome = "Y";
  s.treatment = "T";
  s.outcome_kind = OutcomeKind::kBinary;
  s.higher_is_better = true;
  s.roles = RoleAssignment::from_names({"L"}, {"X", "G"}, std::nullopt);
  return s;
}

double true_probability(const SimCoefficients& c, int arm, double x, double l) {
  const auto& a = arm_of(c, arm);
  return expit(a.intercept + a.slope_x * x + a.effect_l * l);
}

Population draw_population(std::size_t n, std::uint64_t seed) {
  Engine rng(seed);
  Population pop;
  pop.x.resize(n);
  pop.l.resize(n);
  pop.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pop.x[i] = 2.0 * uniform01(rng);
    pop.l[i] = bernoulli(rng, 0.5) ? 1.0 : 0.0;
    pop.g[i] = standard_normal(rng);
  }
  return pop;
}

Dataset generate(const SimCoefficients& coefficients, std::size_t n, std::uint64_t seed) {
  Engine rng(seed);
  std::vector<double> x(n), l(n), g(n), t(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 2.0 * uniform01(rng);
    l[i] = bernoulli(rng, 0.5) ? 1.0 : 0.0;
    g[i] = standard_normal(rng);
    t[i] = bernoulli(rng, l[i] == 0.0 ? 0.75 : 0.25) ? 1.0 : 0.0;
    const double p = true_probability(coefficients, static_cast<int>(t[i]), x[i], l[i]);
    y[i] = bernoulli(rng, p) ? 1.0 : 0.0;
  }
  std::vector<Column> cols;
  cols.push_back({"X", NumericColumn{std::move(x)}});
  cols.push_back({"L", NumericColumn{std::move(l)}});
  cols.push_back({"G", NumericColumn{std::move(g)}});
  cols.push_back({"T", NumericColumn{std::move(t)}});
  cols.push_back({"Y", NumericColumn{std::move(y)}});
  return Dataset(std::move(cols), simulation_schema());
}

double true_mean_outcome(const Policy& policy, const SimCoefficients& c, std::size_t n_eval,
                         std::uint64_t seed) {
  const auto pop = draw_population(n_eval, seed);
  const auto arms = policy(pop);
  if (arms.size() != n_eval) throw ValidationError("policy returned the wrong number of assignments");
  double total = 0.0;
  for (std::size_t i = 0; i < n_eval; ++i) {
    if (arms[i] != 0 && arms[i] != 1) throw ValidationError("policy must assign 0 or 1");
    total += true_probability(c, arms[i], pop.x[i], pop.l[i]);
  }
  return total / static_cast<double>(n_eval);
}

Policy optimal_policy(const SimCoefficients& c) {
  return [c](const Population& pop) {
    std::vector<int> out(pop.x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      double benefit = 0.0;
      for (const double l : {0.0, 1.0}) {
        benefit += true_probability(c, 1, pop.x[i], l) - true_probability(c, 0, pop.x[i], l);
      }
      out[i] = benefit > 0.0 ? 1 : 0;
    }
    return out;
  };
}

Policy constant_policy(int arm) {
  return [arm](const Population& pop) { return std::vector<int>(pop.x.size(), arm); };
}

Policy rule_policy(const TreatmentRule& rule) {
  if (rule.encoder.column_names() != std::vector<std::string>{"(Intercept)", "X", "G"}) {
    throw ValidationError("simulation policies need a rule on inputs (X, G)");
  }
  return [&rule](const Population& pop) {
    Eigen::RowVectorXd row(3);
    std::vector<int> out(pop.x.size());
    // Design layout is (intercept, X, G), fixed by the simulation schema.
    for (std::size_t i = 0; i < out.size(); ++i) {
      row << 1.0, pop.x[i], pop.g[i];
      out[i] = recommend_from_score(rule, score_design_row(rule, row));
    }
    return out;
  };
}

BuildOptions simulation_build_options(SimMethod method, const Truncation& truncation) {
  BuildOptions b;
  b.truncation = truncation;
  b.weighting = method == SimMethod::kNaive ? Weighting::kNone : Weighting::kStabilized;
  b.rule.link = Link::kLogit;
  return b;
}

std::uint64_t replication_seed(std::uint64_t base, SimMethod method, std::size_t n_dev,
                               std::size_t replication) {
  std::uint64_t s = derive_seed(base, to_string(method));
  s = derive_seed(s, static_cast<std::uint64_t>(n_dev));
  return derive_seed(s, static_cast<std::uint64_t>(replication));
}

StudyResult run_study(const SimConfig& config, int threads) {
  config.validate();
  StudyResult result;
  result.config = config;

  const auto bench_seed = derive_seed(config.base_seed, "benchmark");
  result.optimal = true_mean_outcome(optimal_policy(config.coefficients), config.coefficients,
                                     config.benchmark_rows, bench_seed);
  result.treat_all = true_mean_outcome(constant_policy(1), config.coefficients, config.benchmark_rows, bench_seed);
  result.treat_none = true_mean_outcome(constant_policy(0), config.coefficients, config.benchmark_rows, bench_seed);

  struct Outcome {
    bool ok = false;
    bool converged = true;
    double value = 0.0;
    std::vector<double> control;
    std::vector<double> treated;
    std::string error;
  };
  const std::size_t cells = config.methods.size() * config.sizes.size();
  const std::size_t reps = config.replications;
  std::vector<Outcome> outcomes(cells * reps);

  parallel_for(outcomes.size(), threads, [&](std::size_t k) {
    const std::size_t cell = k / reps;
    const std::size_t r = k % reps;
    const SimMethod method = config.methods[cell / config.sizes.size()];
    const std::size_t n_dev = config.sizes[cell % config.sizes.size()];
    const auto seed = replication_seed(config.base_seed, method, n_dev, r);
    auto& out = outcomes[k];
    try {
      const auto dev = generate(config.coefficients, n_dev, seed);
      const auto rule = build_rule(dev, simulation_build_options(method, config.truncation));
      out.value = true_mean_outcome(rule_policy(rule), config.coefficients, config.n_eval,
                                    derive_seed(seed, "evaluation"));
      out.converged = rule.control_model.converged && rule.treated_model.converged &&
                      (!rule.propensity ||
                       (rule.propensity->numerator.converged && rule.propensity->denominator.converged));
      out.control.assign(rule.control_model.coefficients.begin(), rule.control_model.coefficients.end());
      out.treated.assign(rule.treated_model.coefficients.begin(), rule.treated_model.coefficients.end());
      out.ok = true;
    } catch (const NumericalError& e) {
      out.error = e.what();
    }
  });

  for (std::size_t cell = 0; cell < cells; ++cell) {
    StudyCell c;
    c.method = config.methods[cell / config.sizes.size()];
    c.n_dev = config.sizes[cell % config.sizes.size()];
    c.mean_control_coefficients.assign(3, 0.0);
    c.mean_treated_coefficients.assign(3, 0.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& o = outcomes[cell * reps + r];
      if (!o.ok) {
        ++c.failures;
        if (c.failure_messages.size() < 5) c.failure_messages.push_back(o.error);
        continue;
      }
      ++c.successes;
      if (!o.converged) ++c.nonconverged;
      sum += o.value;
      sum_sq += o.value * o.value;
      for (std::size_t j = 0; j < 3; ++j) {
        c.mean_control_coefficients[j] += o.control[j];
        c.mean_treated_coefficients[j] += o.treated[j];
      }
    }
    if (c.successes > 0) {
      const auto m = static_cast<double>(c.successes);
      c.mean = sum / m;
      c.sd = c.successes > 1 ? std::sqrt(std::max(0.0, (sum_sq - m * c.mean * c.mean) / (m - 1.0))) : 0.0;
      for (std::size_t j = 0; j < 3; ++j) {
        c.mean_control_coefficients[j] /= m;
        c.mean_treated_coefficients[j] /= m;
      }
    } else {
      c.mean = std::nan("");
    }
    result.cells.push_back(std::move(c));
  }
  return result;
}

std::string study_table_csv(const StudyResult& result) {
  const auto& sizes = result.config.sizes;
  std::ostringstream out;
  out << "rule_type";
  for (const auto s : sizes) out << ',' << s;
  out << '\n';
  for (const auto method : result.config.methods) {
    out << (method == SimMethod::kWeighted ? "split_regression" : "split_regression_naive");
    for (const auto& c : result.cells) {
      if (c.method == method) out << ',' << format_number(c.mean);
    }
    out << '\n';
  }
  const std::pair<const char*, double> benchmarks[] = {
      {"optimal_rule", result.optimal}, {"treating_all", result.treat_all}, {"treating_none", result.treat_none}};
  for (const auto& [name, value] : benchmarks) {
    out << name;
    for (std::size_t i = 0; i < sizes.size(); ++i) out << ',' << format_number(value);
    out << '\n';
  }
  return out.str();
}

}  // namespace splitrule

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/evaluate.hpp"
#include "core/glm.hpp"
#include "core/propensity.hpp"
#include "core/random.hpp"
#include "core/serialize.hpp"
#include "core/simulate.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

using namespace splitrule;
using namespace splitrule::testing;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SPLITRULE_CLI_PATH;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::scientific << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json run_cli_json(const std::string& args, const fs::path& output, double* seconds = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_command(kCli + " " + args + " -o " + output.string());
  if (seconds) *seconds = seconds_since(start);
  if (r.exit_code != 0) throw std::runtime_error("cli " + args + " exited " + std::to_string(r.exit_code) + ": " + r.output);
  return json::parse(read_file(output));
}

GlmSpec spec_of(Link link, Penalty penalty = Penalty::kNone, double lambda = 0.0) {
  GlmSpec s;
  s.link = link;
  s.penalty = penalty;
  s.lambda = lambda;
  return s;
}

Eigen::VectorXd respond(Engine& rng, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, bool logit) {
  Eigen::VectorXd y = x * beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) = logit ? (bernoulli(rng, expit(y(i))) ? 1.0 : 0.0) : y(i) + standard_normal(rng);
  }
  return y;
}

Eigen::VectorXd random_beta(Engine& rng, Eigen::Index p, double scale) {
  Eigen::VectorXd b(p);
  for (Eigen::Index j = 0; j < p; ++j) b(j) = scale * standard_normal(rng);
  return b;
}

double max_rel_diff(const Eigen::VectorXd& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double ref = b[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(a(j) - ref) / std::max(1.0, std::abs(ref)));
  }
  return worst;
}

// 1. Benchmark rules over one million generated rows.
Verdict benchmarks(const fs::path& dir) {
  Verdict v;
  double secs = 0.0;
  const auto doc = run_cli_json("simulate --sizes 50 --replications 1 --n-eval 1000 --benchmark-rows 1000000 --csv " +
                                    (dir / "bench.csv").string(),
                                dir / "bench.json", &secs);
  const auto& coef = doc["config"]["simulate"]["coefficients"];
  v.require(coef["control"] == json({{"intercept", 0.0}, {"slope_x", -0.55}, {"effect_l", 1.5}}) &&
                coef["treated"] == json({{"intercept", -1.4}, {"slope_x", 0.55}, {"effect_l", 1.5}}),
            "generator uses (0, -0.55, 1.5) / (-1.4, 0.55, 1.5)");
  const auto& b = doc["result"]["benchmarks"];
  const std::pair<const char*, double> expected[] = {
      {"optimal_rule", 0.574}, {"treating_all", 0.479}, {"treating_none", 0.543}};
  for (const auto& [name, target] : expected) {
    const double got = b[name].get<double>();
    v.require(std::abs(got - target) <= 0.005, std::string(name) + " " + fmt(got) + " vs " + fmt(target, 3) + " +-0.005");
  }
  v.require(secs < 30.0, "runtime " + fmt(secs, 1) + " s < 30 s");
  return v;
}

// 2. Method grid at desk scale.
Verdict method_grid(const fs::path& dir) {
  Verdict v;
  double secs = 0.0;
  const auto doc = run_cli_json("simulate --preset paper-desk --csv " + (dir / "desk.csv").string(), dir / "desk.json", &secs);
  v.require(doc["config"]["simulate"]["replications"] == 200 && doc["config"]["simulate"]["n_eval"] == 10000,
            "200 replications, n_eval 10000");
  auto cell = [&](const std::string& method, int n) {
    for (const auto& c : doc["result"]["cells"]) {
      if (c["method"] == method && c["n_dev"] == n) return c["mean_outcome"].get<double>();
    }
    throw std::runtime_error("missing cell " + method + " " + std::to_string(n));
  };
  const double w1000 = cell("weighted", 1000);
  const double n1000 = cell("naive", 1000);
  const double w50 = cell("weighted", 50);
  v.require(std::abs(w1000 - 0.572) <= 0.010, "weighted n=1000 " + fmt(w1000) + " vs 0.572 +-0.010");
  v.require(std::abs(n1000 - 0.549) <= 0.010, "naive n=1000 " + fmt(n1000) + " vs 0.549 +-0.010");
  v.require(std::abs(w50 - 0.543) <= 0.012, "weighted n=50 " + fmt(w50) + " vs 0.543 +-0.012");
  v.require(w1000 - w50 >= 0.02, "weighted gain 50 -> 1000 " + fmt(w1000 - w50) + " >= 0.02");
  for (const int n : {500, 1000}) {
    const double gap = cell("weighted", n) - cell("naive", n);
    v.require(gap >= 0.015, "weighted - naive at n=" + std::to_string(n) + " " + fmt(gap) + " >= 0.015");
  }
  v.require(secs < 600.0, "runtime " + fmt(secs, 1) + " s < 600 s");
  return v;
}

// 3. Solver oracle suite.
Verdict solver_oracles() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  Engine rng(20240601);

  double worst_ls = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t p = 1 + uniform_index(rng, 10);
    const std::size_t n = p + 5 + uniform_index(rng, 200 - p - 5 + 1);
    const auto x = random_design(rng, n, p);
    const auto y = respond(rng, x, random_beta(rng, static_cast<Eigen::Index>(p), 3.0), false);
    const auto w = random_weights(rng, n);
    const auto m = fit(DesignMatrix::from_matrix(x), y, w, spec_of(Link::kIdentity));
    worst_ls = std::max(worst_ls, max_rel_diff(m.coefficients, normal_equation_solve(x, y, w)));
  }
  v.require(worst_ls <= 1e-8, "500 weighted least squares vs normal equations, worst " + sci(worst_ls) + " <= 1e-8");

  double worst_fd = 0.0;
  double worst_grad = 0.0;
  int logistic_ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 2 + uniform_index(rng, 5);
    const std::size_t n = 80 + uniform_index(rng, 121);
    const auto x = random_design(rng, n, p);
    const auto y = respond(rng, x, random_beta(rng, static_cast<Eigen::Index>(p), 0.5), true);
    const auto w = random_weights(rng, n);
    const auto m = fit(DesignMatrix::from_matrix(x), y, w, spec_of(Link::kLogit));
    const auto loss = [&](const Eigen::VectorXd& b) { return weighted_loss(true, x, y, w, b); };
    const auto fd = finite_difference_gradient(loss, m.coefficients);
    const auto an = weighted_loss_gradient(true, x, y, w, m.coefficients);
    const double rel = (fd - an).cwiseAbs().maxCoeff() / std::max(1.0, an.cwiseAbs().maxCoeff());
    worst_fd = std::max(worst_fd, rel);
    worst_grad = std::max(worst_grad, fd.cwiseAbs().maxCoeff());
    if (m.converged && rel <= 1e-4 && fd.cwiseAbs().maxCoeff() <= 1e-4) ++logistic_ok;
  }
  v.require(logistic_ok == 100, "100 logistic fits: finite-difference vs analytic gradient worst " + sci(worst_fd) +
                                     ", stationarity worst " + sci(worst_grad) + " (<= 1e-4)");

  double worst_l0 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 2 + uniform_index(rng, 9);
    const std::size_t n = p + 20 + uniform_index(rng, 150);
    const auto x = random_design(rng, n, p);
    const auto y = respond(rng, x, random_beta(rng, static_cast<Eigen::Index>(p), 2.0), false);
    const auto w = random_weights(rng, n);
    auto spec = spec_of(Link::kIdentity, Penalty::kLasso, 0.0);
    spec.tol = 1e-12;
    const auto m = fit(DesignMatrix::from_matrix(x), y, w, spec);
    worst_l0 = std::max(worst_l0, max_rel_diff(m.coefficients, normal_equation_solve(x, y, w)));
  }
  v.require(worst_l0 <= 1e-6, "100 lasso fits at lambda 0 vs least squares, worst " + sci(worst_l0) + " <= 1e-6");

  int nonzero = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool logit = trial % 2 == 1;
    const std::size_t p = 2 + uniform_index(rng, 9);
    const std::size_t n = 60 + uniform_index(rng, 140);
    const auto x = random_design(rng, n, p);
    const auto y = respond(rng, x, random_beta(rng, static_cast<Eigen::Index>(p), 0.7), logit);
    const auto w = random_weights(rng, n);
    auto spec = spec_of(logit ? Link::kLogit : Link::kIdentity, Penalty::kLasso);
    spec.standardize = trial % 4 < 2;
    const double top = lambda_max(DesignMatrix::from_matrix(x), y, w, spec);
    for (const double f : {1.0, 1.01, 3.0}) {
      spec.lambda = f * top;
      const auto m = fit(DesignMatrix::from_matrix(x), y, w, spec);
      for (Eigen::Index j = 1; j < m.coefficients.size(); ++j) nonzero += m.coefficients(j) != 0.0 ? 1 : 0;
    }
  }
  v.require(nonzero == 0, "lasso at lambda >= lambda_max: " + std::to_string(nonzero) + " non-zero slopes in 300 fits");
  const double secs = seconds_since(start);
  v.require(secs < 60.0, "runtime " + fmt(secs, 1) + " s < 60 s");
  return v;
}

// 4. Estimator identities.
Verdict estimator_identities() {
  Verdict v;
  EvaluationOptions options;
  options.bootstrap.replicates = 0;
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Engine rng(derive_seed(4, k));
    const std::size_t n = 40 + uniform_index(rng, 400);
    const auto data = continuous_fixture(n, derive_seed(40, k), 0.2 + 0.3 * uniform01(rng), 0.5 + 0.3 * uniform01(rng));
    std::vector<int> rec(n);
    const double share = 0.1 + 0.8 * uniform01(rng);
    for (auto& r : rec) r = bernoulli(rng, share) ? 1 : 0;
    const auto r = evaluate_recommendations(rec, data, options);
    const auto total = static_cast<double>(r.n_positive + r.n_negative);
    double abr = 0.0;
    if (r.n_positive > 0) abr += static_cast<double>(r.n_positive) / total * *r.ate_positive.value;
    if (r.n_negative > 0) abr -= static_cast<double>(r.n_negative) / total * *r.ate_negative.value;
    worst = std::max(worst, std::abs(abr - *r.abr.value));
  }
  v.require(worst <= 1e-12, "ABR recomposition on 100 fixtures, worst " + sci(worst) + " <= 1e-12");

  const auto data = continuous_fixture(500, 41, 0.3, 0.7);
  const auto none = evaluate_recommendations(std::vector<int>(500, 0), data, options);
  v.require(none.n_positive == 0 && !none.ate_positive.value.has_value() && none.abr.value &&
                *none.abr.value == -*none.ate_negative.value,
            "treat-no-one: ATE+ = NA and ABR = -ATE-");

  const Dataset four({numeric("x", {0, 1, 2, 3}), numeric("t", {1, 1, 0, 0}), numeric("y", {1, 0, 1, 0})},
                     binary_schema({}, {"x"}));
  const auto r4 = evaluate_recommendations(std::vector<int>(4, 1), four, options);
  v.require(r4.ate_positive.value && *r4.ate_positive.value == 0.0,
            "four-row example ATE+ = " + (r4.ate_positive.value ? fmt(*r4.ate_positive.value, 17) : std::string("NA")) +
                " (exactly 0)");
  return v;
}

// 5. Weight degeneracy and the truncation cap.
Dataset treatment_fixture(std::size_t n, std::uint64_t seed, double strength) {
  Engine rng(seed);
  std::vector<double> x(n), c(n), t(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 2.0 * uniform01(rng);
    c[i] = standard_normal(rng);
    t[i] = bernoulli(rng, expit(strength * (c[i] + 0.5 * x[i] - 0.5))) ? 1.0 : 0.0;
    y[i] = bernoulli(rng, 0.5) ? 1.0 : 0.0;
  }
  return Dataset({numeric("x", x), numeric("c", c), numeric("t", t), numeric("y", y)}, binary_schema({"c"}, {"x"}));
}

Verdict weight_degeneracy() {
  Verdict v;
  const GlmSpec logit{.link = Link::kLogit};
  const auto data = treatment_fixture(10000, 5, 0.0);

  auto pair = fit_propensity_pair(data, logit, logit, Truncation{});
  double free_dev = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    for (const double w : stabilized_weights(pair, data, arm)) free_dev = std::max(free_dev, std::abs(w - 1.0));
  }

  // Refit the denominator with the confounder coefficient held at zero.
  const auto design = pair.denominator_encoder.apply(data);
  const auto t = data.treatment();
  const Eigen::VectorXd response = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (design.column_names[static_cast<std::size_t>(j)] != "c") kept.push_back(j);
  }
  Eigen::MatrixXd reduced(design.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) reduced.col(static_cast<Eigen::Index>(k)) = design.matrix.col(kept[k]);
  const auto constrained = fit(DesignMatrix::from_matrix(reduced), response,
                               Eigen::VectorXd::Ones(response.size()), logit);
  pair.denominator.coefficients.setZero();
  for (std::size_t k = 0; k < kept.size(); ++k) {
    pair.denominator.coefficients(kept[k]) = constrained.coefficients(static_cast<Eigen::Index>(k));
  }
  double forced_dev = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    for (const double w : stabilized_weights(pair, data, arm)) forced_dev = std::max(forced_dev, std::abs(w - 1.0));
  }
  v.require(forced_dev <= 1e-6, "confounder coefficient forced to 0: max |w - 1| " + sci(forced_dev) + " <= 1e-6");
  v.require(free_dev <= 0.1, "freely fitted: max |w - 1| " + fmt(free_dev) + " <= 0.1");

  double largest = 0.0;
  double smallest = 1e300;
  std::size_t count = 0;
  auto scan = [&](const Dataset& d, const PropensityPair& p) {
    for (int arm = 0; arm < 2; ++arm) {
      for (const double w : stabilized_weights(p, d, arm)) {
        largest = std::max(largest, w);
        smallest = std::min(smallest, w);
        ++count;
      }
    }
  };
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto d = treatment_fixture(2000, 50 + k, 0.5 * static_cast<double>(k));
    scan(d, fit_propensity_pair(d, logit, logit, Truncation{}));
    const auto sim = generate(SimCoefficients{}, 2000, 60 + k);
    scan(sim, fit_propensity_pair(sim, logit, logit, Truncation{}));
  }
  const Truncation narrow{0.2, 0.8};
  const auto strong = treatment_fixture(2000, 70, 4.0);
  const auto narrow_pair = fit_propensity_pair(strong, logit, logit, narrow);
  double narrow_max = 0.0;
  for (int arm = 0; arm < 2; ++arm) {
    for (const double w : stabilized_weights(narrow_pair, strong, arm)) narrow_max = std::max(narrow_max, w);
  }
  v.require(largest <= Truncation{}.max_ratio() && smallest > 0.0,
            std::to_string(count) + " weights in (0, 19], largest " + fmt(largest));
  v.require(narrow_max <= narrow.max_ratio(), "bounds (0.2, 0.8): largest " + fmt(narrow_max) + " <= 4");
  return v;
}

// 6. Byte-identical reports across reruns and thread counts.
const char* kPipelineConfig = R"(
seed = 606

[data]
outcome = "Y"
treatment = "T"
outcome_kind = "binary"
higher_is_better = true
names_influencing_treatment = ["L"]
names_influencing_rule = ["X", "G"]

[split]
input = "all.csv"
output_dir = "parts"

[build]
development = "parts/development.csv"
rule = { penalty = "lasso", lambda = "cv" }

[evaluate]
rule = "rule.json"
evaluation = "parts/evaluation.csv"
manifest = "parts/manifest.json"
bootstrap = { replicates = 200 }

[compare]
development = "parts/development.csv"
validation = "parts/validation.csv"
evaluation = { bootstrap = { replicates = 50 } }

[[compare.candidates]]
label = "logistic"

[[compare.candidates]]
label = "ridge-propensity/lasso-rule"
propensity = { penalty = "ridge", lambda = "cv" }
rule = { penalty = "lasso", lambda = "cv" }

[[compare.candidates]]
label = "naive"
weighting = "none"

[simulate]
sizes = [50, 200]
replications = 20
n_eval = 2000
benchmark_rows = 100000
)";

Verdict reproducibility(const fs::path& dir) {
  Verdict v;
  write_csv(generate(SimCoefficients{}, 4000, 606), (dir / "all.csv").string());
  write_file(dir / "c.toml", kPipelineConfig);
  const std::string cfg = "--config " + (dir / "c.toml").string();

  auto run = [&](const std::string& args) {
    const auto r = run_command(kCli + " " + args);
    if (r.exit_code != 0) throw std::runtime_error(args + " exited " + std::to_string(r.exit_code) + ": " + r.output);
  };
  auto snapshot = [&](const fs::path& folder) {
    std::string all;
    for (const auto* f : {"development.csv", "validation.csv", "evaluation.csv", "manifest.json"}) {
      all += read_file(folder / f);
    }
    return all;
  };
  run("split " + cfg + " --threads 1");
  const auto split1 = snapshot(dir / "parts");
  run("split " + cfg + " --threads 8 --output-dir " + (dir / "parts8").string());
  run("split " + cfg + " --threads 1 --output-dir " + (dir / "parts1b").string());
  const bool split_same = split1 == snapshot(dir / "parts1b");
  v.require(split_same && split1 == snapshot(dir / "parts8"), "split: parts and manifest identical");

  for (const std::string sub : {"build", "evaluate", "compare", "simulate"}) {
    const auto a = dir / (sub + "_t1.json");
    const auto b = dir / (sub + "_t8.json");
    const auto c = dir / (sub + "_t1b.json");
    run(sub + " " + cfg + " --threads 1 -o " + a.string());
    if (sub == "build") fs::copy_file(a, dir / "rule.json", fs::copy_options::overwrite_existing);
    run(sub + " " + cfg + " --threads 8 -o " + b.string());
    run(sub + " " + cfg + " --threads 1 -o " + c.string());
    const auto ta = read_file(a);
    v.require(!ta.empty() && ta == read_file(b) && ta == read_file(c),
              sub + ": rerun and --threads 8 identical (" + std::to_string(ta.size()) + " bytes)");
  }
  return v;
}

// 7. End-to-end selection on the generator.
Verdict end_to_end(const fs::path& dir) {
  Verdict v;
  const int runs = 50;
  int wins = 0;
  std::vector<std::string> losses;
  std::map<std::string, int> picked;
  EvaluationOptions eval_options;
  eval_options.bootstrap.replicates = 0;
  for (int r = 0; r < runs; ++r) {
    const auto run_dir = dir / ("run" + std::to_string(r));
    fs::create_directories(run_dir);
    write_csv(generate(SimCoefficients{}, 5000, derive_seed(7007, static_cast<std::uint64_t>(r))),
              (run_dir / "all.csv").string());
    json cfg = json::parse(R"({
      "data": {"outcome": "Y", "treatment": "T", "outcome_kind": "binary", "higher_is_better": true,
               "names_influencing_treatment": ["L"], "names_influencing_rule": ["X", "G"]},
      "split": {"input": "all.csv", "output_dir": "parts"},
      "compare": {"development": "parts/development.csv", "validation": "parts/validation.csv",
                  "output": "validation.json",
                  "candidates": [
                    {"label": "logistic"},
                    {"label": "ridge-propensity/lasso-rule",
                     "propensity": {"penalty": "ridge", "lambda": 0.01},
                     "rule": {"penalty": "lasso", "lambda": 0.001}},
                    {"label": "naive", "weighting": "none"}]}
    })");
    cfg["seed"] = 1000 + r;
    write_file(run_dir / "c.json", cfg.dump(2));
    const std::string c = "--config " + (run_dir / "c.json").string();
    auto run = [&](const std::string& args) {
      const auto res = run_command(kCli + " " + args);
      if (res.exit_code != 0) throw std::runtime_error(args + " exited " + std::to_string(res.exit_code) + ": " + res.output);
    };
    run("split " + c);
    run("compare " + c);
    const auto report = json::parse(read_file(run_dir / "validation.json"));
    const std::string selected = report["result"]["selected"];
    ++picked[selected];

    const auto eval_data = load_csv((run_dir / "parts" / "evaluation.csv").string(), simulation_schema());
    const auto treat_all = evaluate_recommendations(std::vector<int>(eval_data.rows(), 1), eval_data, eval_options);
    double selected_abr = 0.0;
    if (selected == kTreatAll || selected == kTreatNone) {
      const std::vector<int> rec(eval_data.rows(), selected == kTreatAll ? 1 : 0);
      selected_abr = *evaluate_recommendations(rec, eval_data, eval_options).abr.value;
    } else {
      json build = json::object();
      for (const auto& cand : report["config"]["compare"]["candidates"]) {
        if (cand["label"] == selected) build = cand;
      }
      build.erase("label");
      build["development"] = "parts/development.csv";
      build["output"] = "rule.json";
      cfg["build"] = build;
      cfg["evaluate"] = {{"rule", "rule.json"},
                         {"evaluation", "parts/evaluation.csv"},
                         {"manifest", "parts/manifest.json"},
                         {"output", "evaluation.json"},
                         {"bootstrap", {{"replicates", 0}}}};
      write_file(run_dir / "c.json", cfg.dump(2));
      run("build " + c);
      run("evaluate " + c);
      selected_abr = json::parse(read_file(run_dir / "evaluation.json"))["result"]["abr"]["estimate"].get<double>();
    }
    if (selected_abr > *treat_all.abr.value) {
      ++wins;
    } else {
      losses.push_back("run " + std::to_string(r) + " " + selected + " " + fmt(selected_abr) + " <= " +
                       fmt(*treat_all.abr.value));
    }
    fs::remove_all(run_dir);
  }
  std::string picks;
  for (const auto& [label, count] : picked) picks += (picks.empty() ? "" : ", ") + label + " x" + std::to_string(count);
  v.require(wins * 100 >= 95 * runs,
            "selected ABR > treat-all ABR on evaluation in " + std::to_string(wins) + "/" + std::to_string(runs) +
                " runs (>= 95%); selections: " + picks);
  for (const auto& l : losses) v.notes.push_back("  " + l);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const ScratchDir scratch("acceptance");
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"benchmark rules at 1,000,000 rows", [&] { return benchmarks(scratch.path()); }},
      {"method grid at desk scale", [&] { return method_grid(scratch.path()); }},
      {"solver oracle suite", [] { return solver_oracles(); }},
      {"estimator identities", [] { return estimator_identities(); }},
      {"weight degeneracy and truncation cap", [] { return weight_degeneracy(); }},
      {"byte-identical reports", [&] { return reproducibility(scratch.path()); }},
      {"end-to-end selection beats treat-all", [&] { return end_to_end(scratch.path()); }},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int number = static_cast<int>(k) + 1;
    if (!only.empty() && !only.contains(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.notes.push_back(std::string("FAILED with exception: ") + e.what());
    }
    if (!v.pass) ++failed;
    std::cout << "criterion " << number << ": " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << " ["
              << fmt(seconds_since(start), 1) << " s]\n";
    for (const auto& n : v.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}

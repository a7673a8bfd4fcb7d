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

#include "core/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "core/errors.hpp"

namespace splitrule {
namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json estimate_json(const Estimate& e) {
  json j;
  j["estimate"] = optional_number(e.value);
  j["ci"] = e.ci ? json::array({e.ci->lower, e.ci->upper}) : json(nullptr);
  return j;
}

template <typename T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("json: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("json: field '") + key + "': " + e.what());
  }
}

GlmSpec glm_spec_from_json(const json& j) {
  GlmSpec s;
  s.link = parse_link(get<std::string>(j, "link"));
  s.penalty = parse_penalty(get<std::string>(j, "penalty"));
  s.lambda = get<double>(j, "lambda");
  s.cross_validate = get<bool>(j, "cross_validate");
  s.lambda_grid = get<std::vector<double>>(j, "lambda_grid");
  s.cv_folds = get<int>(j, "cv_folds");
  s.cv_seed = get<std::uint64_t>(j, "cv_seed");
  if (!j.at("standardize").is_null()) s.standardize = get<bool>(j, "standardize");
  s.max_iter = get<int>(j, "max_iter");
  s.tol = get<double>(j, "tol");
  return s;
}

Truncation truncation_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("json: truncation must be [lo, hi]");
  Truncation t{j[0].get<double>(), j[1].get<double>()};
  t.validate();
  return t;
}

WeightSummary summary_from_json(const json& j) {
  WeightSummary s;
  s.min = get<double>(j, "min");
  s.max = get<double>(j, "max");
  s.mean = get<double>(j, "mean");
  s.count = get<std::size_t>(j, "count");
  return s;
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 16);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw ValidationError("json: bad fingerprint '" + text + "'");
  return v;
}

json to_json(const GlmSpec& spec) {
  json j;
  j["link"] = to_string(spec.link);
  j["penalty"] = to_string(spec.penalty);
  j["lambda"] = spec.lambda;
  j["cross_validate"] = spec.cross_validate;
  j["lambda_grid"] = spec.lambda_grid;
  j["cv_folds"] = spec.cv_folds;
  j["cv_seed"] = spec.cv_seed;
  j["standardize"] = spec.standardize ? json(*spec.standardize) : json(nullptr);
  j["max_iter"] = spec.max_iter;
  j["tol"] = spec.tol;
  return j;
}

json to_json(const FittedGlm& model) {
  json j;
  json coefs = json::array();
  for (std::size_t k = 0; k < model.names.size(); ++k) {
    coefs.push_back({{"name", model.names[k]}, {"value", model.coefficients(static_cast<Eigen::Index>(k))}});
  }
  j["coefficients"] = std::move(coefs);
  j["spec"] = to_json(model.spec);
  j["lambda_used"] = model.lambda_used;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  j["objective"] = model.objective;
  j["warnings"] = model.warnings;
  return j;
}

FittedGlm fitted_glm_from_json(const json& j) {
  FittedGlm m;
  const auto& coefs = j.at("coefficients");
  m.coefficients.resize(static_cast<Eigen::Index>(coefs.size()));
  for (std::size_t k = 0; k < coefs.size(); ++k) {
    m.names.push_back(get<std::string>(coefs[k], "name"));
    m.coefficients(static_cast<Eigen::Index>(k)) = get<double>(coefs[k], "value");
  }
  if (!m.coefficients.allFinite()) throw ValidationError("json: model coefficients must be finite");
  m.spec = glm_spec_from_json(j.at("spec"));
  m.lambda_used = get<double>(j, "lambda_used");
  m.converged = get<bool>(j, "converged");
  m.iterations = get<int>(j, "iterations");
  m.objective = get<double>(j, "objective");
  m.warnings = get<std::vector<std::string>>(j, "warnings");
  return m;
}

json to_json(const Encoder& encoder) {
  json j = json::array();
  for (const auto& c : encoder.columns()) {
    j.push_back({{"name", c.name}, {"categorical", c.categorical}, {"levels", c.levels}});
  }
  return j;
}

Encoder encoder_from_json(const json& j) {
  std::vector<EncodedColumn> cols;
  for (const auto& c : j) {
    cols.push_back({get<std::string>(c, "name"), get<bool>(c, "categorical"),
                    get<std::vector<std::string>>(c, "levels")});
  }
  return Encoder(std::move(cols));
}

json to_json(const Truncation& truncation) { return json::array({truncation.lo, truncation.hi}); }

json to_json(const WeightSummary& summary) {
  return {{"min", summary.min}, {"max", summary.max}, {"mean", summary.mean}, {"count", summary.count}};
}

json to_json(const BuildOptions& options) {
  json j;
  j["propensity_numerator"] = to_json(options.propensity_numerator);
  j["propensity_denominator"] = to_json(options.propensity_denominator);
  j["rule"] = to_json(options.rule);
  j["truncation"] = to_json(options.truncation);
  j["weighting"] = to_string(options.weighting);
  j["benefit_threshold"] = options.benefit_threshold;
  return j;
}

json to_json(const TreatmentRule& rule) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "treatment_rule";
  j["rule_inputs"] = rule.rule_inputs;
  j["encoding"] = to_json(rule.encoder);
  j["outcome_kind"] = to_string(rule.outcome_kind);
  j["higher_is_better"] = rule.higher_is_better;
  j["benefit_threshold"] = rule.benefit_threshold;
  j["options"] = to_json(rule.options);
  j["models"] = {{"control", to_json(rule.control_model)}, {"treated", to_json(rule.treated_model)}};
  if (rule.propensity) {
    j["propensity"] = {
        {"numerator", {{"encoding", to_json(rule.propensity->numerator_encoder)},
                       {"model", to_json(rule.propensity->numerator)}}},
        {"denominator", {{"encoding", to_json(rule.propensity->denominator_encoder)},
                         {"model", to_json(rule.propensity->denominator)}}},
        {"truncation", to_json(rule.propensity->truncation)}};
  } else {
    j["propensity"] = nullptr;
  }
  json diag;
  diag["development_rows"] = rule.development_rows;
  diag["development_fingerprint"] = hex64(rule.development_fingerprint);
  diag["arm_rows"] = {{"control", rule.arm_rows[0]}, {"treated", rule.arm_rows[1]}};
  diag["arm_weights"] = {{"control", to_json(rule.arm_weights[0])}, {"treated", to_json(rule.arm_weights[1])}};
  diag["warnings"] = rule.warnings;
  j["diagnostics"] = std::move(diag);
  return j;
}

TreatmentRule rule_from_json(const json& j) {
  try {
    if (get<std::string>(j, "kind") != "treatment_rule") throw ValidationError("json: not a treatment rule");
    if (get<int>(j, "schema_version") != kSchemaVersion) {
      throw ValidationError("json: unsupported rule schema_version");
    }
    TreatmentRule r;
    r.rule_inputs = get<std::vector<std::string>>(j, "rule_inputs");
    r.encoder = encoder_from_json(j.at("encoding"));
    r.outcome_kind = parse_outcome_kind(get<std::string>(j, "outcome_kind"));
    r.higher_is_better = get<bool>(j, "higher_is_better");
    r.benefit_threshold = get<double>(j, "benefit_threshold");
    const auto& o = j.at("options");
    r.options.propensity_numerator = glm_spec_from_json(o.at("propensity_numerator"));
    r.options.propensity_denominator = glm_spec_from_json(o.at("propensity_denominator"));
    r.options.rule = glm_spec_from_json(o.at("rule"));
    r.options.truncation = truncation_from_json(o.at("truncation"));
    r.options.weighting = parse_weighting(get<std::string>(o, "weighting"));
    r.options.benefit_threshold = get<double>(o, "benefit_threshold");
    r.control_model = fitted_glm_from_json(j.at("models").at("control"));
    r.treated_model = fitted_glm_from_json(j.at("models").at("treated"));
    const auto width = static_cast<Eigen::Index>(r.encoder.column_names().size());
    if (r.control_model.coefficients.size() != width || r.treated_model.coefficients.size() != width) {
      throw ValidationError("json: rule models do not match the rule encoding");
    }
    if (!j.at("propensity").is_null()) {
      const auto& p = j.at("propensity");
      PropensityPair pair;
      pair.numerator_encoder = encoder_from_json(p.at("numerator").at("encoding"));
      pair.numerator = fitted_glm_from_json(p.at("numerator").at("model"));
      pair.denominator_encoder = encoder_from_json(p.at("denominator").at("encoding"));
      pair.denominator = fitted_glm_from_json(p.at("denominator").at("model"));
      pair.truncation = truncation_from_json(p.at("truncation"));
      r.propensity = std::move(pair);
    }
    const auto& d = j.at("diagnostics");
    r.development_rows = get<std::size_t>(d, "development_rows");
    r.development_fingerprint = parse_hex64(get<std::string>(d, "development_fingerprint"));
    r.arm_rows = {get<std::size_t>(d.at("arm_rows"), "control"), get<std::size_t>(d.at("arm_rows"), "treated")};
    r.arm_weights = {summary_from_json(d.at("arm_weights").at("control")),
                     summary_from_json(d.at("arm_weights").at("treated"))};
    r.warnings = get<std::vector<std::string>>(d, "warnings");
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("json: malformed rule document: ") + e.what());
  }
}

json to_json(const BootstrapConfig& bootstrap) {
  return {{"replicates", bootstrap.replicates}, {"level", bootstrap.level}, {"seed", bootstrap.seed}};
}

json to_json(const EvaluationReport& report) {
  json j;
  j["positives"] = report.n_positive;
  j["negatives"] = report.n_negative;
  j["ate_in_positives"] = estimate_json(report.ate_positive);
  j["ate_in_negatives"] = estimate_json(report.ate_negative);
  j["abr"] = estimate_json(report.abr);
  json b = to_json(report.bootstrap);
  b["used"] = report.bootstrap_used;
  b["redrawn"] = report.bootstrap_redrawn;
  j["bootstrap"] = std::move(b);
  j["evaluation_propensity"] = to_json(report.propensity_summary);
  j["warnings"] = report.warnings;
  return j;
}

json to_json(const ValidationReport& report) {
  json j;
  j["criterion"] = to_string(report.criterion);
  j["selected"] = report.selected.empty() ? json(nullptr) : json(report.selected);
  json ranking = json::array();
  int rank = 0;
  for (const auto& r : report.ranking) {
    json e;
    e["rank"] = ++rank;
    e["label"] = r.label;
    e["baseline"] = r.baseline;
    e["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      e["evaluation"] = to_json(r.report);
      e["criterion_value"] = optional_number(r.criterion_value);
      json flags = json::array();
      if (r.no_identified_benefit) flags.push_back("no_identified_benefit");
      if (r.not_better_than_baseline) flags.push_back("not_better_than_baseline");
      e["flags"] = std::move(flags);
    } else {
      e["error"] = r.error;
    }
    ranking.push_back(std::move(e));
  }
  j["ranking"] = std::move(ranking);
  return j;
}

json to_json(const StudyResult& result) {
  json j;
  j["benchmarks"] = {{"optimal_rule", result.optimal},
                     {"treating_all", result.treat_all},
                     {"treating_none", result.treat_none}};
  json cells = json::array();
  for (const auto& cell : result.cells) {
    json e;
    e["method"] = to_string(cell.method);
    e["n_dev"] = cell.n_dev;
    e["mean_outcome"] = std::isnan(cell.mean) ? json(nullptr) : json(cell.mean);
    e["sd"] = cell.sd;
    e["successes"] = cell.successes;
    e["failures"] = cell.failures;
    e["nonconverged"] = cell.nonconverged;
    const json names = json::array({"(Intercept)", "X", "G"});
    e["mean_coefficients"] = {{"names", names},
                              {"control", cell.mean_control_coefficients},
                              {"treated", cell.mean_treated_coefficients}};
    e["failure_messages"] = cell.failure_messages;
    cells.push_back(std::move(e));
  }
  j["cells"] = std::move(cells);
  return j;
}

json to_json(const SplitManifest& manifest) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "split_manifest";
  j["source"] = manifest.source;
  j["source_rows"] = manifest.source_rows;
  j["seed"] = manifest.spec.seed;
  j["fractions"] = manifest.spec.fractions;
  j["stratify_by_treatment"] = manifest.spec.stratify_by_treatment;
  json parts = json::array();
  for (const auto& p : manifest.parts) {
    parts.push_back({{"name", p.name},
                     {"file", p.file},
                     {"rows", p.row_indices.size()},
                     {"fingerprint", hex64(p.fingerprint)},
                     {"row_indices", p.row_indices}});
  }
  j["parts"] = std::move(parts);
  return j;
}

SplitManifest manifest_from_json(const json& j) {
  try {
    if (get<std::string>(j, "kind") != "split_manifest") throw ValidationError("json: not a split manifest");
    SplitManifest m;
    m.source = get<std::string>(j, "source");
    m.source_rows = get<std::size_t>(j, "source_rows");
    m.spec.seed = get<std::uint64_t>(j, "seed");
    m.spec.fractions = get<std::vector<double>>(j, "fractions");
    m.spec.stratify_by_treatment = get<bool>(j, "stratify_by_treatment");
    for (const auto& p : j.at("parts")) {
      m.parts.push_back({get<std::string>(p, "name"), get<std::string>(p, "file"),
                         parse_hex64(get<std::string>(p, "fingerprint")),
                         get<std::vector<std::size_t>>(p, "row_indices")});
    }
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("json: malformed manifest: ") + e.what());
  }
}

void check_independence(const SplitManifest& manifest, std::uint64_t development_fingerprint,
                        std::uint64_t evaluation_fingerprint) {
  const SplitManifest::Part* dev = nullptr;
  const SplitManifest::Part* eval = nullptr;
  for (const auto& p : manifest.parts) {
    if (p.fingerprint == development_fingerprint) dev = &p;
    if (p.fingerprint == evaluation_fingerprint) eval = &p;
  }
  if (!dev) throw ValidationError("manifest: the rule's development data is not a part of this split");
  if (!eval) throw ValidationError("manifest: the evaluation data is not a part of this split");
  if (dev == eval) throw ValidationError("manifest: development and evaluation data are the same part");
  const std::set<std::size_t> rows(dev->row_indices.begin(), dev->row_indices.end());
  for (const auto r : eval->row_indices) {
    if (rows.contains(r)) {
      throw ValidationError("manifest: parts '" + dev->name + "' and '" + eval->name + "' share row " +
                            std::to_string(r));
    }
  }
}

}  // namespace splitrule

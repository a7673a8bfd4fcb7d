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

#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "core/errors.hpp"

namespace splitrule {
namespace {

json node_to_json(const toml::node& node, const std::string& where) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = node_to_json(v, where + "." + std::string(k.str()));
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(node_to_json(v, where));
    return out;
  }
  if (const auto* s = node.as_string()) return json(s->get());
  if (const auto* i = node.as_integer()) return json(i->get());
  if (const auto* f = node.as_floating_point()) return json(f->get());
  if (const auto* b = node.as_boolean()) return json(b->get());
  throw ValidationError("config: unsupported value type at '" + where + "'");
}

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& context) {
  if (!j.is_object()) throw ValidationError("config: [" + context + "] must be a table");
  for (const auto& [k, v] : j.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; });
    if (!known) throw ValidationError("config: unknown key '" + k + "' in [" + context + "]");
  }
}

std::string where(const std::string& context, const std::string& key) { return context + "." + key; }

double number(const json& j, const std::string& key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError("config: " + where(context, key) + " must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& j, const std::string& key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("config: " + where(context, key) + " must be an integer");
  return v.get<std::int64_t>();
}

std::size_t count(const json& j, const std::string& key, const std::string& context) {
  const auto v = integer(j, key, context);
  if (v < 0) throw ValidationError("config: " + where(context, key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

bool boolean(const json& j, const std::string& key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError("config: " + where(context, key) + " must be true or false");
  return v.get<bool>();
}

std::string text(const json& j, const std::string& key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ValidationError("config: " + where(context, key) + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> names(const json& j, const std::string& key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ValidationError("config: " + where(context, key) + " must be a list of names");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ValidationError("config: " + where(context, key) + " must be a list of names");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ValidationError("config: " + where(context, key) + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError("config: " + where(context, key) + " must be a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

const json& require(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw ValidationError("config: missing " + where(context, key));
  return j.at(key);
}

GlmSpec propensity_spec(const json& j, const std::string& key, const GlmSpec& defaults, const std::string& context) {
  GlmSpec s = j.contains(key) ? glm_spec_from_config(j.at(key), defaults, where(context, key)) : defaults;
  s.link = Link::kLogit;
  return s;
}

json arm_to_config(const ArmCoefficients& a) {
  return {{"intercept", a.intercept}, {"slope_x", a.slope_x}, {"effect_l", a.effect_l}};
}

ArmCoefficients arm_from_config(const json& j, ArmCoefficients a, const std::string& context) {
  allow_keys(j, {"intercept", "slope_x", "effect_l"}, context);
  if (j.contains("intercept")) a.intercept = number(j, "intercept", context);
  if (j.contains("slope_x")) a.slope_x = number(j, "slope_x", context);
  if (j.contains("effect_l")) a.effect_l = number(j, "effect_l", context);
  return a;
}

}  // namespace

json parse_toml(const std::string& content, const std::string& source) {
  try {
    const auto table = toml::parse(content, source);
    return node_to_json(table, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
        << e.description();
    throw ValidationError(msg.str());
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto content = buf.str();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (!is_json) return parse_toml(content, path);
  try {
    auto j = json::parse(content);
    if (!j.is_object()) throw ValidationError("config: " + path + " must hold an object");
    return j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
}

std::uint64_t seed_from_config(const json& value, const std::string& key) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
  }
  throw ValidationError("config: " + key + " must be a non-negative integer seed");
}

Schema schema_from_config(const json& data) {
  const std::string ctx = "data";
  allow_keys(data,
             {"outcome", "treatment", "outcome_kind", "higher_is_better", "names_influencing_treatment",
              "names_influencing_rule", "names_influencing_treatment_eval", "categorical_columns",
              "missingness_weight_column", "names_ignored"},
             ctx);
  Schema s;
  require(data, "outcome", ctx);
  require(data, "treatment", ctx);
  require(data, "outcome_kind", ctx);
  require(data, "higher_is_better", ctx);
  require(data, "names_influencing_rule", ctx);
  s.outcome = text(data, "outcome", ctx);
  s.treatment = text(data, "treatment", ctx);
  s.outcome_kind = parse_outcome_kind(text(data, "outcome_kind", ctx));
  s.higher_is_better = boolean(data, "higher_is_better", ctx);
  std::vector<std::string> treatment_names;
  if (data.contains("names_influencing_treatment")) {
    treatment_names = names(data, "names_influencing_treatment", ctx);
  }
  std::optional<std::vector<std::string>> eval_names;
  if (data.contains("names_influencing_treatment_eval")) {
    eval_names = names(data, "names_influencing_treatment_eval", ctx);
  }
  s.roles = RoleAssignment::from_names(treatment_names, names(data, "names_influencing_rule", ctx), eval_names);
  if (data.contains("names_ignored")) s.roles.c_nn = names(data, "names_ignored", ctx);
  if (data.contains("categorical_columns")) s.categorical_columns = names(data, "categorical_columns", ctx);
  if (data.contains("missingness_weight_column")) {
    s.missingness_weight_column = text(data, "missingness_weight_column", ctx);
  }
  s.validate();
  return s;
}

json to_config(const Schema& schema) {
  json j;
  j["outcome"] = schema.outcome;
  j["treatment"] = schema.treatment;
  j["outcome_kind"] = to_string(schema.outcome_kind);
  j["higher_is_better"] = schema.higher_is_better;
  j["names_influencing_treatment"] = schema.roles.confounders();
  j["names_influencing_rule"] = schema.roles.rule_inputs;
  j["names_influencing_treatment_eval"] = schema.roles.c_t_eval;
  if (!schema.roles.c_nn.empty()) j["names_ignored"] = schema.roles.c_nn;
  j["categorical_columns"] = schema.categorical_columns;
  if (schema.missingness_weight_column) j["missingness_weight_column"] = *schema.missingness_weight_column;
  return j;
}

GlmSpec glm_spec_from_config(const json& j, const GlmSpec& defaults, const std::string& context) {
  allow_keys(j, {"penalty", "lambda", "lambda_grid", "cv_folds", "cv_seed", "standardize", "max_iter", "tol"},
             context);
  GlmSpec s = defaults;
  if (j.contains("penalty")) s.penalty = parse_penalty(text(j, "penalty", context));
  if (j.contains("lambda")) {
    const auto& v = j.at("lambda");
    if (v.is_string() && v.get<std::string>() == "cv") {
      s.cross_validate = true;
      s.lambda = 0.0;
    } else if (v.is_number()) {
      s.cross_validate = false;
      s.lambda = v.get<double>();
    } else {
      throw ValidationError("config: " + where(context, "lambda") + " must be a number or \"cv\"");
    }
  }
  if (j.contains("lambda_grid")) s.lambda_grid = numbers(j, "lambda_grid", context);
  if (j.contains("cv_folds")) s.cv_folds = static_cast<int>(integer(j, "cv_folds", context));
  if (j.contains("cv_seed")) s.cv_seed = seed_from_config(j.at("cv_seed"), where(context, "cv_seed"));
  if (j.contains("standardize")) s.standardize = boolean(j, "standardize", context);
  if (j.contains("max_iter")) s.max_iter = static_cast<int>(integer(j, "max_iter", context));
  if (j.contains("tol")) s.tol = number(j, "tol", context);
  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("config: [" + context + "]: " + e.what());
  }
  return s;
}

json to_config(const GlmSpec& spec) {
  json j;
  j["penalty"] = to_string(spec.penalty);
  j["lambda"] = spec.cross_validate ? json("cv") : json(spec.lambda);
  j["lambda_grid"] = spec.lambda_grid;
  j["cv_folds"] = spec.cv_folds;
  j["cv_seed"] = spec.cv_seed;
  if (spec.standardize) j["standardize"] = *spec.standardize;
  j["max_iter"] = spec.max_iter;
  j["tol"] = spec.tol;
  return j;
}

Truncation truncation_from_config(const json& j) {
  Truncation t;
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      throw ValidationError("config: truncation must be [lo, hi]");
    }
    t = {j[0].get<double>(), j[1].get<double>()};
  } else {
    allow_keys(j, {"lo", "hi"}, "truncation");
    if (j.contains("lo")) t.lo = number(j, "lo", "truncation");
    if (j.contains("hi")) t.hi = number(j, "hi", "truncation");
  }
  t.validate();
  return t;
}

BootstrapConfig bootstrap_from_config(const json& j, const BootstrapConfig& defaults) {
  const std::string ctx = "bootstrap";
  allow_keys(j, {"replicates", "level", "seed"}, ctx);
  BootstrapConfig b = defaults;
  if (j.contains("replicates")) b.replicates = static_cast<int>(integer(j, "replicates", ctx));
  if (j.contains("level")) b.level = number(j, "level", ctx);
  if (j.contains("seed")) b.seed = seed_from_config(j.at("seed"), where(ctx, "seed"));
  b.validate();
  return b;
}

SplitSpec split_spec_from_config(const json& j) {
  allow_keys(j, {"fractions", "seed", "stratify_by_treatment"}, "split");
  SplitSpec s;
  if (j.contains("fractions")) s.fractions = numbers(j, "fractions", "split");
  if (j.contains("seed")) s.seed = seed_from_config(j.at("seed"), "split.seed");
  if (j.contains("stratify_by_treatment")) s.stratify_by_treatment = boolean(j, "stratify_by_treatment", "split");
  s.validate();
  return s;
}

json to_config(const SplitSpec& spec) {
  return {{"fractions", spec.fractions}, {"seed", spec.seed}, {"stratify_by_treatment", spec.stratify_by_treatment}};
}

BuildOptions build_options_from_config(const json& j) {
  const std::string ctx = "build";
  allow_keys(j,
             {"weighting", "benefit_threshold", "truncation", "propensity", "propensity_numerator",
              "propensity_denominator", "rule"},
             ctx);
  BuildOptions o;
  if (j.contains("weighting")) o.weighting = parse_weighting(text(j, "weighting", ctx));
  if (j.contains("benefit_threshold")) o.benefit_threshold = number(j, "benefit_threshold", ctx);
  if (j.contains("truncation")) o.truncation = truncation_from_config(j.at("truncation"));
  const GlmSpec shared = propensity_spec(j, "propensity", o.propensity_numerator, ctx);
  o.propensity_numerator = propensity_spec(j, "propensity_numerator", shared, ctx);
  o.propensity_denominator = propensity_spec(j, "propensity_denominator", shared, ctx);
  if (j.contains("rule")) o.rule = glm_spec_from_config(j.at("rule"), o.rule, where(ctx, "rule"));
  return o;
}

json to_config(const BuildOptions& options) {
  json j;
  j["weighting"] = to_string(options.weighting);
  j["benefit_threshold"] = options.benefit_threshold;
  j["truncation"] = to_json(options.truncation);
  j["propensity_numerator"] = to_config(options.propensity_numerator);
  j["propensity_denominator"] = to_config(options.propensity_denominator);
  j["rule"] = to_config(options.rule);
  return j;
}

EvaluationOptions evaluation_options_from_config(const json& j) {
  const std::string ctx = "evaluate";
  allow_keys(j, {"propensity", "truncation", "bootstrap"}, ctx);
  EvaluationOptions o;
  o.propensity = propensity_spec(j, "propensity", o.propensity, ctx);
  if (j.contains("truncation")) o.truncation = truncation_from_config(j.at("truncation"));
  if (j.contains("bootstrap")) o.bootstrap = bootstrap_from_config(j.at("bootstrap"), o.bootstrap);
  return o;
}

json to_config(const EvaluationOptions& options) {
  json j;
  j["propensity"] = to_config(options.propensity);
  j["truncation"] = to_json(options.truncation);
  j["bootstrap"] = to_json(options.bootstrap);
  return j;
}

CompareOptions compare_options_from_config(const json& j) {
  const std::string ctx = "compare";
  allow_keys(j, {"criterion", "evaluation", "candidates"}, ctx);
  CompareOptions o;
  if (j.contains("criterion")) o.criterion = parse_criterion(text(j, "criterion", ctx));
  if (j.contains("evaluation")) {
    const auto bootstrap = o.evaluation.bootstrap;
    json e = j.at("evaluation");
    if (!e.is_object()) throw ValidationError("config: [compare.evaluation] must be a table");
    if (!e.contains("bootstrap")) e["bootstrap"] = to_json(bootstrap);
    o.evaluation = evaluation_options_from_config(e);
  }
  const auto& cands = require(j, "candidates", ctx);
  if (!cands.is_array()) throw ValidationError("config: compare.candidates must be an array of tables");
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto& c = cands[k];
    const auto cctx = ctx + ".candidates[" + std::to_string(k) + "]";
    allow_keys(c,
               {"label", "weighting", "benefit_threshold", "truncation", "propensity", "propensity_numerator",
                "propensity_denominator", "rule"},
               cctx);
    require(c, "label", cctx);
    const auto label = text(c, "label", cctx);
    for (const auto& prev : o.candidates) {
      if (prev.label == label) throw ValidationError("config: duplicate candidate label '" + label + "'");
    }
    json build = c;
    build.erase("label");
    o.candidates.push_back({label, build_options_from_config(build)});
  }
  return o;
}

json to_config(const CompareOptions& options) {
  json j;
  j["criterion"] = to_string(options.criterion);
  j["evaluation"] = to_config(options.evaluation);
  json cands = json::array();
  for (const auto& c : options.candidates) {
    json e;
    e["label"] = c.label;
    const json build = to_config(c.build);
    for (const auto& [k, v] : build.items()) e[k] = v;
    cands.push_back(std::move(e));
  }
  j["candidates"] = std::move(cands);
  return j;
}

SimConfig sim_config_from_config(const json& j) {
  const std::string ctx = "simulate";
  allow_keys(j,
             {"preset", "sizes", "methods", "n_eval", "replications", "benchmark_rows", "base_seed", "truncation",
              "coefficients"},
             ctx);
  SimConfig c = j.contains("preset") ? SimConfig::preset(text(j, "preset", ctx)) : SimConfig{};
  if (j.contains("sizes")) {
    c.sizes.clear();
    const auto& v = j.at("sizes");
    if (!v.is_array()) throw ValidationError("config: simulate.sizes must be a list of counts");
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<std::int64_t>() <= 0) {
        throw ValidationError("config: simulate.sizes must be a list of positive counts");
      }
      c.sizes.push_back(e.get<std::size_t>());
    }
  }
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : names(j, "methods", ctx)) c.methods.push_back(parse_sim_method(m));
  }
  if (j.contains("n_eval")) c.n_eval = count(j, "n_eval", ctx);
  if (j.contains("replications")) c.replications = count(j, "replications", ctx);
  if (j.contains("benchmark_rows")) c.benchmark_rows = count(j, "benchmark_rows", ctx);
  if (j.contains("base_seed")) c.base_seed = seed_from_config(j.at("base_seed"), where(ctx, "base_seed"));
  if (j.contains("truncation")) c.truncation = truncation_from_config(j.at("truncation"));
  if (j.contains("coefficients")) {
    const auto& co = j.at("coefficients");
    allow_keys(co, {"control", "treated"}, where(ctx, "coefficients"));
    if (co.contains("control")) {
      c.coefficients.control = arm_from_config(co.at("control"), c.coefficients.control, ctx + ".coefficients.control");
    }
    if (co.contains("treated")) {
      c.coefficients.treated = arm_from_config(co.at("treated"), c.coefficients.treated, ctx + ".coefficients.treated");
    }
  }
  c.validate();
  return c;
}

json to_config(const SimConfig& config) {
  json j;
  j["sizes"] = config.sizes;
  json methods = json::array();
  for (const auto m : config.methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  j["n_eval"] = config.n_eval;
  j["replications"] = config.replications;
  j["benchmark_rows"] = config.benchmark_rows;
  j["base_seed"] = config.base_seed;
  j["truncation"] = to_json(config.truncation);
  j["coefficients"] = {{"control", arm_to_config(config.coefficients.control)},
                       {"treated", arm_to_config(config.coefficients.treated)}};
  return j;
}

}  // namespace splitrule

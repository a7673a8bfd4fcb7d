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

#ifndef SPLITRULE_CORE_CONFIG_HPP_
#define SPLITRULE_CORE_CONFIG_HPP_

// Run configuration. One TOML (or JSON) document with a [data] table and a
// table per subcommand. Unknown keys are rejected. Every reader has a writer
// producing the resolved form, which reads back to the same value.

#include <string>

#include "core/evaluate.hpp"
#include "core/select.hpp"
#include "core/serialize.hpp"
#include "core/simulate.hpp"
#include "core/splitting.hpp"

namespace splitrule {

// Parses TOML text into the JSON document model.
json parse_toml(const std::string& text, const std::string& source = "config");
// Reads a config file; ".json" files are parsed as JSON, anything else as TOML.
json load_config_file(const std::string& path);

// Non-negative integer, or a decimal string for values beyond 2^63.
std::uint64_t seed_from_config(const json& value, const std::string& key);

Schema schema_from_config(const json& data);
json to_config(const Schema& schema);

// Missing keys keep the values in `defaults`. "lambda" may be a number or "cv".
GlmSpec glm_spec_from_config(const json& j, const GlmSpec& defaults, const std::string& context);
json to_config(const GlmSpec& spec);

// [lo, hi] or {lo = .., hi = ..}.
Truncation truncation_from_config(const json& j);

BootstrapConfig bootstrap_from_config(const json& j, const BootstrapConfig& defaults);

SplitSpec split_spec_from_config(const json& j);
json to_config(const SplitSpec& spec);

// Keys: weighting, benefit_threshold, truncation, propensity (shared default
// for both propensity models), propensity_numerator, propensity_denominator,
// rule.
BuildOptions build_options_from_config(const json& j);
json to_config(const BuildOptions& options);

// Keys: propensity, truncation, bootstrap. Thread count is not part of the
// configuration.
EvaluationOptions evaluation_options_from_config(const json& j);
json to_config(const EvaluationOptions& options);

// Keys: criterion, candidates (array of {label, ...build keys}), evaluation.
CompareOptions compare_options_from_config(const json& j);
json to_config(const CompareOptions& options);

// Keys: preset, sizes, methods, n_eval, replications, benchmark_rows,
// base_seed, truncation, coefficients {control, treated}.
SimConfig sim_config_from_config(const json& j);
json to_config(const SimConfig& config);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_CONFIG_HPP_

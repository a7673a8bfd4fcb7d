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

#ifndef SPLITRULE_CORE_SERIALIZE_HPP_
#define SPLITRULE_CORE_SERIALIZE_HPP_

// JSON forms of models, rules and reports. Rule and report documents carry a
// schema_version field.

#include "json.hpp"

#include "core/evaluate.hpp"
#include "core/glm.hpp"
#include "core/rule.hpp"
#include "core/select.hpp"
#include "core/simulate.hpp"
#include "core/splitting.hpp"

namespace splitrule {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

json to_json(const GlmSpec& spec);
json to_json(const FittedGlm& model);
FittedGlm fitted_glm_from_json(const json& j);

json to_json(const Encoder& encoder);
Encoder encoder_from_json(const json& j);

json to_json(const Truncation& truncation);
json to_json(const WeightSummary& summary);
json to_json(const BuildOptions& options);

json to_json(const TreatmentRule& rule);
TreatmentRule rule_from_json(const json& j);

json to_json(const BootstrapConfig& bootstrap);
json to_json(const EvaluationReport& report);
json to_json(const ValidationReport& report);
json to_json(const StudyResult& result);

std::string hex64(std::uint64_t v);
std::uint64_t parse_hex64(const std::string& text);

// Manifest written next to split parts.
struct SplitManifest {
  SplitSpec spec;
  std::string source;
  std::size_t source_rows = 0;
  struct Part {
    std::string name;
    std::string file;
    std::uint64_t fingerprint = 0;
    std::vector<std::size_t> row_indices;
  };
  std::vector<Part> parts;
};

json to_json(const SplitManifest& manifest);
SplitManifest manifest_from_json(const json& j);

// Throws ValidationError unless both fingerprints name parts of the manifest
// and those parts share no row.
void check_independence(const SplitManifest& manifest, std::uint64_t development_fingerprint,
                        std::uint64_t evaluation_fingerprint);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_SERIALIZE_HPP_

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

#ifndef SPLITRULE_CORE_SELECT_HPP_
#define SPLITRULE_CORE_SELECT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "core/evaluate.hpp"
#include "core/rule.hpp"

namespace splitrule {

enum class SelectionCriterion { kAbr, kAtePositive };

std::string to_string(SelectionCriterion criterion);
SelectionCriterion parse_criterion(const std::string& text);

struct Candidate {
  std::string label;
  BuildOptions build;
};

inline constexpr const char* kTreatAll = "treat-all";
inline constexpr const char* kTreatNone = "treat-none";

struct CompareOptions {
  std::vector<Candidate> candidates;
  EvaluationOptions evaluation{.bootstrap = {.replicates = 0}};
  SelectionCriterion criterion = SelectionCriterion::kAbr;
};

struct CandidateResult {
  std::string label;
  bool baseline = false;
  bool ok = false;
  std::string error;
  EvaluationReport report;
  std::optional<double> criterion_value;
  // ATE+ is null or <= 0 on the validation set.
  bool no_identified_benefit = false;
  // Criterion does not exceed the best baseline.
  bool not_better_than_baseline = false;
};

struct ValidationReport {
  std::vector<CandidateResult> ranking;  // Best first.
  std::string selected;
  SelectionCriterion criterion = SelectionCriterion::kAbr;
};

// Builds every candidate on `dev`, evaluates it and the treat-all/treat-none
// baselines on `val`, and ranks by the criterion (descending, then label).
// Candidates that fail to fit are kept in the ranking, after all successes.
ValidationReport compare_on_validation(const Dataset& dev, const Dataset& val,
                                       const CompareOptions& options);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_SELECT_HPP_

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

#include "core/select.hpp"

#include <algorithm>
#include <set>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace splitrule {

std::string to_string(SelectionCriterion criterion) {
  return criterion == SelectionCriterion::kAtePositive ? "ate_positive" : "abr";
}

SelectionCriterion parse_criterion(const std::string& text) {
  if (text == "abr") return SelectionCriterion::kAbr;
  if (text == "ate_positive") return SelectionCriterion::kAtePositive;
  throw ValidationError("unknown selection criterion '" + text + "' (abr, ate_positive)");
}

ValidationReport compare_on_validation(const Dataset& dev, const Dataset& val,
                                       const CompareOptions& options) {
  if (options.candidates.empty()) throw ValidationError("compare: candidate grid is empty");
  std::set<std::string> labels = {kTreatAll, kTreatNone};
  for (const auto& c : options.candidates) {
    if (c.label.empty()) throw ValidationError("compare: candidate label is empty");
    if (!labels.insert(c.label).second) throw ValidationError("compare: duplicate label '" + c.label + "'");
  }
  if (dev.fingerprint() == val.fingerprint()) {
    throw ValidationError("compare: development and validation sets are identical");
  }

  EvaluationOptions eval = options.evaluation;
  eval.threads = 1;  // Parallelism is spent across candidates.
  auto finish = [&](CandidateResult& r) {
    r.ok = true;
    r.criterion_value =
        options.criterion == SelectionCriterion::kAbr ? r.report.abr.value : r.report.ate_positive.value;
    r.no_identified_benefit = !r.report.ate_positive.value || *r.report.ate_positive.value <= 0.0;
  };

  const std::size_t k = options.candidates.size();
  std::vector<CandidateResult> results(k + 2);
  parallel_for(k + 2, options.evaluation.threads, [&](std::size_t i) {
    auto& r = results[i];
    if (i >= k) {
      r.baseline = true;
      r.label = i == k ? kTreatAll : kTreatNone;
      const std::vector<int> rec(val.rows(), i == k ? 1 : 0);
      try {
        r.report = evaluate_recommendations(rec, val, eval);
        finish(r);
      } catch (const NumericalError& e) {
        r.error = e.what();
      }
      return;
    }
    const auto& c = options.candidates[i];
    r.label = c.label;
    try {
      const auto rule = build_rule(dev, c.build);
      r.report = evaluate_rule(rule, val, eval);
      finish(r);
    } catch (const NumericalError& e) {
      r.error = e.what();
    } catch (const ValidationError& e) {
      r.error = e.what();
    }
  });

  std::optional<double> best_baseline;
  for (const auto& r : results) {
    if (r.baseline && r.ok && r.criterion_value) {
      best_baseline = best_baseline ? std::max(*best_baseline, *r.criterion_value) : *r.criterion_value;
    }
  }
  for (auto& r : results) {
    if (!r.baseline && r.ok) {
      r.not_better_than_baseline =
          !r.criterion_value || (best_baseline && *r.criterion_value <= *best_baseline);
    }
  }

  std::sort(results.begin(), results.end(), [](const CandidateResult& a, const CandidateResult& b) {
    const int ga = a.ok ? (a.criterion_value ? 0 : 1) : 2;
    const int gb = b.ok ? (b.criterion_value ? 0 : 1) : 2;
    if (ga != gb) return ga < gb;
    if (ga == 0 && *a.criterion_value != *b.criterion_value) return *a.criterion_value > *b.criterion_value;
    return a.label < b.label;
  });

  ValidationReport out;
  out.criterion = options.criterion;
  if (results.front().ok && results.front().criterion_value) out.selected = results.front().label;
  out.ranking = std::move(results);
  return out;
}

}  // namespace splitrule

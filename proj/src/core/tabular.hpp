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

#ifndef SPLITRULE_CORE_TABULAR_HPP_
#define SPLITRULE_CORE_TABULAR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace splitrule {

enum class OutcomeKind { kContinuous, kBinary };

std::string to_string(OutcomeKind kind);
OutcomeKind parse_outcome_kind(const std::string& text);

// Clinically assigned covariate roles. The first letter says whether the
// variable influences treatment (T) or not (N) in the study at hand, the second
// whether it will be observed (I) or not (N) where the rule is deployed.
struct RoleAssignment {
  std::vector<std::string> c_ti;
  std::vector<std::string> c_tn;
  std::vector<std::string> c_ni;
  std::vector<std::string> c_nn;  // Accepted, never used.
  std::vector<std::string> rule_inputs;
  std::vector<std::string> c_t_eval;

  // c_ti followed by c_tn.
  std::vector<std::string> confounders() const;
  // c_ti followed by c_ni.
  std::vector<std::string> deployable() const;

  // Builds roles from the two user-facing lists. Variables in both lists are
  // c_ti, confounders only in the treatment list are c_tn, rule inputs not
  // influencing treatment are c_ni. Evaluation confounders default to the
  // development ones.
  static RoleAssignment from_names(std::vector<std::string> influencing_treatment,
                                   std::vector<std::string> influencing_rule,
                                   std::optional<std::vector<std::string>> influencing_treatment_eval);

  // Disjointness, rule_inputs within c_i and non-empty, no overlap with the
  // outcome or treatment column. Throws ValidationError.
  void validate(const std::string& outcome, const std::string& treatment) const;
};

struct Schema {
  std::string outcome;
  std::string treatment;
  OutcomeKind outcome_kind = OutcomeKind::kContinuous;
  bool higher_is_better = true;
  std::vector<std::string> categorical_columns;
  std::optional<std::string> missingness_weight_column;
  RoleAssignment roles;

  bool is_categorical(const std::string& column) const;
  void validate() const;
};

struct NumericColumn {
  std::vector<double> values;
};

struct CategoricalColumn {
  std::vector<std::uint32_t> codes;
  std::vector<std::string> levels;  // First-observed order.
};

struct Column {
  std::string name;
  std::variant<NumericColumn, CategoricalColumn> data;

  std::size_t size() const;
  bool is_categorical() const { return std::holds_alternative<CategoricalColumn>(data); }
  const NumericColumn& numeric() const;
  const CategoricalColumn& categorical() const;
  // Text written back to CSV; numbers use the shortest round-trip form.
  std::string cell_text(std::size_t row) const;
};

// Immutable observational dataset. Validation happens once in the constructor.
class Dataset {
 public:
  Dataset(std::vector<Column> columns, Schema schema);

  std::size_t rows() const { return rows_; }
  const Schema& schema() const { return schema_; }
  const RoleAssignment& roles() const { return schema_.roles; }
  const std::vector<Column>& columns() const { return columns_; }

  bool has_column(const std::string& name) const;
  const Column& column(const std::string& name) const;

  std::span<const double> outcome() const;
  std::span<const double> treatment() const;
  // All ones when no missingness-weight column is declared.
  std::vector<double> observation_weights() const;

  std::size_t count_treated() const;

  // Rows in the given order; categorical levels are carried over unchanged.
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset with_schema(Schema schema) const;

  // Throws ValidationError listing every absent name.
  void require_columns(const std::vector<std::string>& names, const std::string& purpose) const;

  // Canonical CSV text and its FNV-1a hash.
  std::string to_csv() const;
  std::uint64_t fingerprint() const;

  // Rows with incomplete data dropped at load time.
  std::size_t dropped_incomplete_rows() const { return dropped_rows_; }
  void set_dropped_incomplete_rows(std::size_t n) { dropped_rows_ = n; }

 private:
  std::vector<Column> columns_;
  Schema schema_;
  std::size_t rows_ = 0;
  std::size_t dropped_rows_ = 0;
};

// Loads a CSV file. Keeps the outcome, the treatment, the missingness-weight
// column and every role column that is present; rule inputs are mandatory.
// Empty or "NA" cells are errors unless a missingness-weight column is
// declared, in which case incomplete rows are dropped.
Dataset load_csv(const std::string& path, const Schema& schema);
Dataset parse_csv(const std::string& text, const Schema& schema);
void write_csv(const Dataset& data, const std::string& path);

struct DesignMatrix {
  Eigen::MatrixXd matrix;
  std::vector<std::string> column_names;
  std::vector<std::string> warnings;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }

  // Wraps a raw matrix; checks the intercept column and finiteness.
  static DesignMatrix from_matrix(Eigen::MatrixXd matrix, std::vector<std::string> names = {});
};

// One source column of a design: numeric pass-through or reference-coded
// categorical (levels[0] is the dropped reference).
struct EncodedColumn {
  std::string name;
  bool categorical = false;
  std::vector<std::string> levels;
};

// Column layout learned from one dataset and applied to any other with the
// same columns, so development and evaluation designs line up.
class Encoder {
 public:
  Encoder() = default;
  explicit Encoder(std::vector<EncodedColumn> columns) : columns_(std::move(columns)) {}

  static Encoder fit(const Dataset& data, const std::vector<std::string>& columns);

  DesignMatrix apply(const Dataset& data) const;
  std::vector<std::string> column_names() const;
  const std::vector<EncodedColumn>& columns() const { return columns_; }
  std::vector<std::string> source_columns() const;

 private:
  std::vector<EncodedColumn> columns_;
};

DesignMatrix encode(const Dataset& data, const std::vector<std::string>& columns);

// Ordered union without duplicates.
std::vector<std::string> ordered_union(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b);

}  // namespace splitrule

#endif  // SPLITRULE_CORE_TABULAR_HPP_

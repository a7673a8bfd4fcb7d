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

#include "core/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"

namespace splitrule {
namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += v[i];
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

std::optional<double> parse_double(const std::string& cell) {
  std::string_view s = cell;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void check_unique(const std::vector<std::string>& names, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw ValidationError(what + " lists '" + n + "' twice");
  }
}

}  // namespace

std::string to_string(OutcomeKind kind) {
  return kind == OutcomeKind::kBinary ? "binary" : "continuous";
}

OutcomeKind parse_outcome_kind(const std::string& text) {
  if (text == "binary") return OutcomeKind::kBinary;
  if (text == "continuous") return OutcomeKind::kContinuous;
  throw ValidationError("outcome_kind must be 'binary' or 'continuous', got '" + text + "'");
}

std::vector<std::string> ordered_union(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const auto* v : {&a, &b}) {
    for (const auto& s : *v) {
      if (!contains(out, s)) out.push_back(s);
    }
  }
  return out;
}

std::vector<std::string> RoleAssignment::confounders() const { return ordered_union(c_ti, c_tn); }
std::vector<std::string> RoleAssignment::deployable() const { return ordered_union(c_ti, c_ni); }

RoleAssignment RoleAssignment::from_names(
    std::vector<std::string> influencing_treatment, std::vector<std::string> influencing_rule,
    std::optional<std::vector<std::string>> influencing_treatment_eval) {
  RoleAssignment roles;
  for (const auto& c : influencing_treatment) {
    (contains(influencing_rule, c) ? roles.c_ti : roles.c_tn).push_back(c);
  }
  for (const auto& r : influencing_rule) {
    if (!contains(influencing_treatment, r)) roles.c_ni.push_back(r);
  }
  roles.rule_inputs = std::move(influencing_rule);
  roles.c_t_eval = influencing_treatment_eval ? std::move(*influencing_treatment_eval)
                                              : std::move(influencing_treatment);
  return roles;
}

void RoleAssignment::validate(const std::string& outcome, const std::string& treatment) const {
  const std::vector<std::pair<const char*, const std::vector<std::string>*>> sets = {
      {"c_ti", &c_ti}, {"c_tn", &c_tn}, {"c_ni", &c_ni}, {"c_nn", &c_nn}};
  std::map<std::string, std::string> owner;
  for (const auto& [label, set] : sets) {
    check_unique(*set, label);
    for (const auto& name : *set) {
      if (name == outcome || name == treatment) {
        throw ValidationError(std::string("role set ") + label + " contains the " +
                              (name == outcome ? "outcome" : "treatment") + " column '" + name + "'");
      }
      const auto [it, fresh] = owner.emplace(name, label);
      if (!fresh) {
        throw ValidationError("column '" + name + "' is in both " + it->second + " and " + label);
      }
    }
  }
  if (rule_inputs.empty()) throw ValidationError("rule inputs (names_influencing_rule) are empty");
  check_unique(rule_inputs, "names_influencing_rule");
  check_unique(c_t_eval, "names_influencing_treatment_eval");
  const auto ci = deployable();
  for (const auto& r : rule_inputs) {
    if (!contains(ci, r)) {
      throw ValidationError("rule input '" + r + "' is not observable at deployment (not in c_ti or c_ni)");
    }
  }
  for (const auto& e : c_t_eval) {
    if (e == outcome || e == treatment) {
      throw ValidationError("evaluation confounders contain the outcome or treatment column '" + e + "'");
    }
  }
}

bool Schema::is_categorical(const std::string& column) const {
  return contains(categorical_columns, column);
}

void Schema::validate() const {
  if (outcome.empty()) throw ValidationError("schema: outcome column not set");
  if (treatment.empty()) throw ValidationError("schema: treatment column not set");
  if (outcome == treatment) throw ValidationError("schema: outcome and treatment are the same column");
  if (is_categorical(outcome) || is_categorical(treatment)) {
    throw ValidationError("schema: outcome and treatment columns cannot be categorical");
  }
  roles.validate(outcome, treatment);
  if (missingness_weight_column) {
    const auto& w = *missingness_weight_column;
    if (w == outcome || w == treatment || contains(roles.confounders(), w) ||
        contains(roles.rule_inputs, w) || contains(roles.c_t_eval, w) || is_categorical(w)) {
      throw ValidationError("schema: missingness weight column '" + w + "' has another role");
    }
  }
}

std::size_t Column::size() const {
  return std::visit(
      [](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, NumericColumn>) {
          return c.values.size();
        } else {
          return c.codes.size();
        }
      },
      data);
}

const NumericColumn& Column::numeric() const {
  if (const auto* n = std::get_if<NumericColumn>(&data)) return *n;
  throw ValidationError("column '" + name + "' is categorical where a numeric column is required");
}

const CategoricalColumn& Column::categorical() const {
  if (const auto* c = std::get_if<CategoricalColumn>(&data)) return *c;
  throw ValidationError("column '" + name + "' is numeric where a categorical column is required");
}

std::string Column::cell_text(std::size_t row) const {
  if (const auto* c = std::get_if<CategoricalColumn>(&data)) return c->levels.at(c->codes.at(row));
  return format_double(std::get<NumericColumn>(data).values.at(row));
}

Dataset::Dataset(std::vector<Column> columns, Schema schema)
    : columns_(std::move(columns)), schema_(std::move(schema)) {
  schema_.validate();
  if (columns_.empty()) throw ValidationError("dataset has no columns");
  rows_ = columns_.front().size();
  std::set<std::string> names;
  for (const auto& col : columns_) {
    if (!names.insert(col.name).second) throw ValidationError("duplicate column '" + col.name + "'");
    if (col.size() != rows_) {
      throw ValidationError("column '" + col.name + "' has " + std::to_string(col.size()) +
                            " entries, expected " + std::to_string(rows_));
    }
    if (const auto* num = std::get_if<NumericColumn>(&col.data)) {
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!std::isfinite(num->values[i])) {
          throw ValidationError("non-finite value in column '" + col.name + "' at row " +
                                std::to_string(i + 1));
        }
      }
    } else {
      const auto& cat = std::get<CategoricalColumn>(col.data);
      for (const auto code : cat.codes) {
        if (code >= cat.levels.size()) {
          throw ValidationError("categorical code out of range in column '" + col.name + "'");
        }
      }
    }
  }
  if (rows_ == 0) throw ValidationError("dataset has no rows");

  const auto& t = column(schema_.treatment).numeric().values;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (t[i] != 0.0 && t[i] != 1.0) {
      throw ValidationError("treatment column '" + schema_.treatment + "' has value " +
                            format_double(t[i]) + " at row " + std::to_string(i + 1) +
                            "; only 0 and 1 are allowed");
    }
  }
  const auto& y = column(schema_.outcome).numeric().values;
  if (schema_.outcome_kind == OutcomeKind::kBinary) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (y[i] != 0.0 && y[i] != 1.0) {
        throw ValidationError("binary outcome '" + schema_.outcome + "' has value " +
                              format_double(y[i]) + " at row " + std::to_string(i + 1));
      }
    }
  }
  if (schema_.missingness_weight_column) {
    const auto& w = column(*schema_.missingness_weight_column).numeric().values;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (w[i] < 0.0) {
        throw ValidationError("negative missingness weight at row " + std::to_string(i + 1));
      }
    }
  }
  for (const auto& col : columns_) {
    if (schema_.is_categorical(col.name) != col.is_categorical()) {
      throw ValidationError("column '" + col.name + "' type does not match the schema declaration");
    }
  }
}

bool Dataset::has_column(const std::string& name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

const Column& Dataset::column(const std::string& name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c;
  }
  throw ValidationError("missing column '" + name + "'");
}

std::span<const double> Dataset::outcome() const {
  return column(schema_.outcome).numeric().values;
}

std::span<const double> Dataset::treatment() const {
  return column(schema_.treatment).numeric().values;
}

std::vector<double> Dataset::observation_weights() const {
  if (!schema_.missingness_weight_column) return std::vector<double>(rows_, 1.0);
  return column(*schema_.missingness_weight_column).numeric().values;
}

std::size_t Dataset::count_treated() const {
  const auto t = treatment();
  return static_cast<std::size_t>(std::count(t.begin(), t.end(), 1.0));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) {
    Column out{c.name, {}};
    if (const auto* num = std::get_if<NumericColumn>(&c.data)) {
      NumericColumn n;
      n.values.reserve(rows.size());
      for (const auto r : rows) n.values.push_back(num->values.at(r));
      out.data = std::move(n);
    } else {
      const auto& cat = std::get<CategoricalColumn>(c.data);
      CategoricalColumn k;
      k.levels = cat.levels;
      k.codes.reserve(rows.size());
      for (const auto r : rows) k.codes.push_back(cat.codes.at(r));
      out.data = std::move(k);
    }
    cols.push_back(std::move(out));
  }
  return Dataset(std::move(cols), schema_);
}

Dataset Dataset::with_schema(Schema schema) const {
  Dataset out(columns_, std::move(schema));
  out.dropped_rows_ = dropped_rows_;
  return out;
}

void Dataset::require_columns(const std::vector<std::string>& names,
                              const std::string& purpose) const {
  std::vector<std::string> missing;
  for (const auto& n : names) {
    if (!has_column(n)) missing.push_back(n);
  }
  if (!missing.empty()) {
    throw ValidationError("missing column(s) required for " + purpose + ": " + join(missing));
  }
}

std::string Dataset::to_csv() const {
  std::string out;
  csv::Record header;
  for (const auto& c : columns_) header.push_back(c.name);
  out += csv::format_record(header);
  csv::Record rec(columns_.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < columns_.size(); ++j) rec[j] = columns_[j].cell_text(r);
    out += csv::format_record(rec);
  }
  return out;
}

std::uint64_t Dataset::fingerprint() const { return fnv1a64(to_csv()); }

Dataset parse_csv(const std::string& text, const Schema& schema) {
  schema.validate();
  const auto records = csv::parse(text);
  if (records.empty()) throw ValidationError("csv has no header row");
  const auto& header = records.front();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!index.emplace(header[j], j).second) {
      throw ValidationError("csv header repeats column '" + header[j] + "'");
    }
  }

  std::vector<std::string> required = {schema.outcome, schema.treatment};
  if (schema.missingness_weight_column) required.push_back(*schema.missingness_weight_column);
  required = ordered_union(required, schema.roles.rule_inputs);
  std::vector<std::string> missing;
  for (const auto& r : required) {
    if (!index.contains(r)) missing.push_back(r);
  }
  if (!missing.empty()) throw ValidationError("schema error: csv lacks column(s): " + join(missing));

  // Retained columns, in file order.
  auto wanted = ordered_union(required, ordered_union(schema.roles.confounders(),
                                                      ordered_union(schema.roles.deployable(),
                                                                    schema.roles.c_t_eval)));
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (contains(wanted, header[j])) keep.push_back(j);
  }

  const bool drop_incomplete = schema.missingness_weight_column.has_value();
  std::vector<const csv::Record*> rows;
  std::size_t dropped = 0;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw ValidationError("csv row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                            " fields, header has " + std::to_string(header.size()));
    }
    bool complete = true;
    for (const auto j : keep) {
      if (!is_missing(rec[j])) continue;
      if (!drop_incomplete || header[j] == *schema.missingness_weight_column) {
        throw ValidationError("missing-data error: row " + std::to_string(r) + ", column '" +
                              header[j] +
                              "' is empty and no missingness_weight_column is declared");
      }
      complete = false;
    }
    if (complete) {
      rows.push_back(&rec);
    } else {
      ++dropped;
    }
  }

  std::vector<Column> columns;
  for (const auto j : keep) {
    Column col{header[j], {}};
    if (schema.is_categorical(header[j])) {
      CategoricalColumn cat;
      std::unordered_map<std::string, std::uint32_t> codes;
      for (const auto* rec : rows) {
        const auto& cell = (*rec)[j];
        auto [it, fresh] = codes.emplace(cell, static_cast<std::uint32_t>(cat.levels.size()));
        if (fresh) cat.levels.push_back(cell);
        cat.codes.push_back(it->second);
      }
      col.data = std::move(cat);
    } else {
      NumericColumn num;
      num.values.reserve(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto v = parse_double((*rows[r])[j]);
        if (!v || !std::isfinite(*v)) {
          throw ValidationError("validation error: column '" + header[j] + "' has non-numeric value '" +
                                (*rows[r])[j] + "' (declare it in categorical_columns if it is categorical)");
        }
        num.values.push_back(*v);
      }
      col.data = std::move(num);
    }
    columns.push_back(std::move(col));
  }
  if (rows.size() < 2) {
    throw ValidationError("dataset needs at least 2 complete rows, found " + std::to_string(rows.size()));
  }
  Dataset data(std::move(columns), schema);
  data.set_dropped_incomplete_rows(dropped);
  return data;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  return parse_csv(csv::read_file(path), schema);
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << data.to_csv();
  if (!out) throw IoError("write failed for '" + path + "'");
}

DesignMatrix DesignMatrix::from_matrix(Eigen::MatrixXd matrix, std::vector<std::string> names) {
  if (matrix.cols() == 0 || matrix.rows() == 0) throw ValidationError("design matrix is empty");
  if (!matrix.allFinite()) throw ValidationError("design matrix has non-finite entries");
  if (!(matrix.col(0).array() == 1.0).all()) {
    throw ValidationError("design matrix must start with an all-ones intercept column");
  }
  if (names.empty()) {
    names.push_back("(Intercept)");
    for (Eigen::Index j = 1; j < matrix.cols(); ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != matrix.cols()) {
    throw ValidationError("design matrix column names do not match its width");
  }
  return DesignMatrix{std::move(matrix), std::move(names), {}};
}

Encoder Encoder::fit(const Dataset& data, const std::vector<std::string>& columns) {
  if (columns.empty()) throw ValidationError("encode: no columns requested");
  check_unique(columns, "encode column list");
  data.require_columns(columns, "encoding");
  std::vector<EncodedColumn> out;
  for (const auto& name : columns) {
    const auto& col = data.column(name);
    EncodedColumn enc{name, col.is_categorical(), {}};
    if (enc.categorical) {
      // Levels in first-observed row order of this dataset.
      const auto& cat = col.categorical();
      std::vector<bool> seen(cat.levels.size(), false);
      for (const auto code : cat.codes) {
        if (!seen[code]) {
          seen[code] = true;
          enc.levels.push_back(cat.levels[code]);
        }
      }
    }
    out.push_back(std::move(enc));
  }
  return Encoder(std::move(out));
}

std::vector<std::string> Encoder::column_names() const {
  std::vector<std::string> names = {"(Intercept)"};
  for (const auto& c : columns_) {
    if (!c.categorical) {
      names.push_back(c.name);
      continue;
    }
    for (std::size_t k = 1; k < c.levels.size(); ++k) names.push_back(c.name + "=" + c.levels[k]);
  }
  return names;
}

std::vector<std::string> Encoder::source_columns() const {
  std::vector<std::string> names;
  for (const auto& c : columns_) names.push_back(c.name);
  return names;
}

DesignMatrix Encoder::apply(const Dataset& data) const {
  data.require_columns(source_columns(), "the model design");
  auto names = column_names();
  const auto n = static_cast<Eigen::Index>(data.rows());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(names.size()));
  m.col(0).setOnes();
  Eigen::Index j = 1;
  std::vector<std::string> warnings;
  for (const auto& enc : columns_) {
    const auto& col = data.column(enc.name);
    if (col.is_categorical() != enc.categorical) {
      throw ValidationError("column '" + enc.name + "' changed type between datasets");
    }
    if (!enc.categorical) {
      const auto& v = col.numeric().values;
      for (Eigen::Index i = 0; i < n; ++i) m(i, j) = v[static_cast<std::size_t>(i)];
      const bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
      if (constant) warnings.push_back("column '" + enc.name + "' is constant");
      ++j;
      continue;
    }
    const auto& cat = col.categorical();
    // Map this dataset's codes onto the encoder's level positions.
    std::vector<long> position(cat.levels.size(), -1);
    for (std::size_t c = 0; c < cat.levels.size(); ++c) {
      const auto it = std::find(enc.levels.begin(), enc.levels.end(), cat.levels[c]);
      if (it != enc.levels.end()) position[c] = it - enc.levels.begin();
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto code = cat.codes[static_cast<std::size_t>(i)];
      const long pos = position[code];
      if (pos < 0) {
        throw ValidationError("column '" + enc.name + "' has level '" + cat.levels[code] +
                              "' unseen when the encoding was fitted");
      }
      if (pos > 0) m(i, j + pos - 1) = 1.0;
    }
    if (enc.levels.size() <= 1) warnings.push_back("column '" + enc.name + "' has a single level");
    j += static_cast<Eigen::Index>(enc.levels.size()) - 1;
  }
  return DesignMatrix{std::move(m), std::move(names), std::move(warnings)};
}

DesignMatrix encode(const Dataset& data, const std::vector<std::string>& columns) {
  return Encoder::fit(data, columns).apply(data);
}

}  // namespace splitrule

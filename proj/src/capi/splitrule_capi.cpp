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

#include "splitrule/splitrule.h"

#include <cstring>
#include <new>
#include <string>
#include <thread>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/evaluate.hpp"
#include "core/rule.hpp"
#include "core/select.hpp"
#include "core/serialize.hpp"
#include "core/simulate.hpp"
#include "core/splitting.hpp"
#include "core/tabular.hpp"

struct sr_dataset {
  splitrule::Dataset data;
};

struct sr_partition {
  splitrule::SplitSpec spec;
  std::size_t source_rows;
  splitrule::Partition partition;
};

struct sr_rule {
  splitrule::TreatmentRule rule;
};

namespace {

thread_local std::string last_error;

template <typename F>
sr_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SR_OK;
  } catch (const splitrule::NumericalError& e) {
    last_error = e.what();
    return SR_ERR_NUMERICAL;
  } catch (const splitrule::ValidationError& e) {
    last_error = e.what();
    return SR_ERR_VALIDATION;
  } catch (const splitrule::IoError& e) {
    last_error = e.what();
    return SR_ERR_IO;
  } catch (const splitrule::json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return SR_ERR_VALIDATION;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SR_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SR_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw splitrule::ValidationError(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  auto* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

splitrule::json parse_json(const char* text, const char* what) {
  require(text, what);
  try {
    return splitrule::json::parse(text);
  } catch (const splitrule::json::parse_error& e) {
    throw splitrule::ValidationError(std::string(what) + ": " + e.what());
  }
}

splitrule::json parse_object(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return splitrule::json::object();
  auto j = parse_json(text, what);
  if (!j.is_object()) throw splitrule::ValidationError(std::string(what) + " must be a JSON object");
  return j;
}

std::string dump(const splitrule::json& j) { return j.dump(2) + "\n"; }

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

extern "C" {

const char* sr_version(void) { return "0.3.0"; }

const char* sr_last_error(void) { return last_error.c_str(); }

void sr_string_free(char* s) { delete[] s; }

sr_status sr_config_load(const char* path, char** json_out) {
  return guarded([&] {
    require(path, "path");
    require(json_out, "json_out");
    *json_out = dup_string(splitrule::load_config_file(path).dump());
  });
}

sr_status sr_config_resolve(const char* section, const char* section_json, char** json_out) {
  return guarded([&] {
    require(section, "section");
    require(json_out, "json_out");
    using namespace splitrule;
    const std::string name = section;
    const json j = parse_object(section_json, "section_json");
    json out;
    if (name == "data") {
      out = to_config(schema_from_config(j));
    } else if (name == "split") {
      out = to_config(split_spec_from_config(j));
    } else if (name == "build") {
      out = to_config(build_options_from_config(j));
    } else if (name == "evaluate") {
      out = to_config(evaluation_options_from_config(j));
    } else if (name == "compare") {
      out = to_config(compare_options_from_config(j));
    } else if (name == "simulate") {
      out = to_config(sim_config_from_config(j));
    } else {
      throw ValidationError("unknown config section '" + name + "'");
    }
    *json_out = dup_string(out.dump());
  });
}

sr_status sr_dataset_load_csv(const char* path, const char* data_json, sr_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto schema = splitrule::schema_from_config(parse_object(data_json, "data_json"));
    *out = new sr_dataset{splitrule::load_csv(path, schema)};
  });
}

sr_status sr_dataset_parse_csv(const char* csv_text, const char* data_json, sr_dataset** out) {
  return guarded([&] {
    require(csv_text, "csv_text");
    require(out, "out");
    const auto schema = splitrule::schema_from_config(parse_object(data_json, "data_json"));
    *out = new sr_dataset{splitrule::parse_csv(csv_text, schema)};
  });
}

sr_status sr_dataset_write_csv(const sr_dataset* data, const char* path) {
  return guarded([&] {
    require(data, "data");
    require(path, "path");
    splitrule::write_csv(data->data, path);
  });
}

size_t sr_dataset_rows(const sr_dataset* data) { return data ? data->data.rows() : 0; }

uint64_t sr_dataset_fingerprint(const sr_dataset* data) { return data ? data->data.fingerprint() : 0; }

size_t sr_dataset_dropped_rows(const sr_dataset* data) { return data ? data->data.dropped_incomplete_rows() : 0; }

sr_status sr_dataset_column(const sr_dataset* data, const char* name, double* out, size_t n) {
  return guarded([&] {
    require(data, "data");
    require(name, "name");
    require(out, "out");
    if (n != data->data.rows()) throw splitrule::ValidationError("output length does not match the row count");
    const auto& col = data->data.column(name);
    if (col.is_categorical()) throw splitrule::ValidationError("column '" + std::string(name) + "' is categorical");
    const auto& v = col.numeric().values;
    std::copy(v.begin(), v.end(), out);
  });
}

void sr_dataset_free(sr_dataset* data) { delete data; }

sr_status sr_split(const sr_dataset* data, const char* split_json, sr_partition** out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    const auto spec = splitrule::split_spec_from_config(parse_object(split_json, "split_json"));
    *out = new sr_partition{spec, data->data.rows(), splitrule::split(data->data, spec)};
  });
}

size_t sr_partition_count(const sr_partition* partition) { return partition ? partition->partition.parts.size() : 0; }

sr_status sr_partition_part(const sr_partition* partition, size_t k, sr_dataset** out) {
  return guarded([&] {
    require(partition, "partition");
    require(out, "out");
    if (k >= partition->partition.parts.size()) throw splitrule::ValidationError("part index out of range");
    *out = new sr_dataset{partition->partition.parts[k]};
  });
}

sr_status sr_partition_indices(const sr_partition* partition, size_t k, const size_t** indices, size_t* n) {
  return guarded([&] {
    require(partition, "partition");
    require(indices, "indices");
    require(n, "n");
    if (k >= partition->partition.row_indices.size()) throw splitrule::ValidationError("part index out of range");
    *indices = partition->partition.row_indices[k].data();
    *n = partition->partition.row_indices[k].size();
  });
}

sr_status sr_partition_manifest(const sr_partition* partition, const char* source, const char* const* part_names,
                                const char* const* part_files, char** json_out) {
  return guarded([&] {
    require(partition, "partition");
    require(source, "source");
    require(part_names, "part_names");
    require(part_files, "part_files");
    require(json_out, "json_out");
    splitrule::SplitManifest m;
    m.spec = partition->spec;
    m.source = source;
    m.source_rows = partition->source_rows;
    for (std::size_t k = 0; k < partition->partition.parts.size(); ++k) {
      require(part_names[k], "part name");
      require(part_files[k], "part file");
      m.parts.push_back({part_names[k], part_files[k], partition->partition.parts[k].fingerprint(),
                         partition->partition.row_indices[k]});
    }
    *json_out = dup_string(dump(splitrule::to_json(m)));
  });
}

void sr_partition_free(sr_partition* partition) { delete partition; }

sr_status sr_check_independence(const char* manifest_json, uint64_t development_fingerprint,
                                uint64_t evaluation_fingerprint) {
  return guarded([&] {
    const auto m = splitrule::manifest_from_json(parse_json(manifest_json, "manifest_json"));
    splitrule::check_independence(m, development_fingerprint, evaluation_fingerprint);
  });
}

sr_status sr_rule_build(const sr_dataset* development, const char* build_json, sr_rule** out) {
  return guarded([&] {
    require(development, "development");
    require(out, "out");
    const auto options = splitrule::build_options_from_config(parse_object(build_json, "build_json"));
    *out = new sr_rule{splitrule::build_rule(development->data, options)};
  });
}

sr_status sr_rule_from_json(const char* rule_json, sr_rule** out) {
  return guarded([&] {
    require(out, "out");
    *out = new sr_rule{splitrule::rule_from_json(parse_json(rule_json, "rule_json"))};
  });
}

sr_status sr_rule_to_json(const sr_rule* rule, char** json_out) {
  return guarded([&] {
    require(rule, "rule");
    require(json_out, "json_out");
    *json_out = dup_string(dump(splitrule::to_json(rule->rule)));
  });
}

uint64_t sr_rule_development_fingerprint(const sr_rule* rule) { return rule ? rule->rule.development_fingerprint : 0; }

sr_status sr_rule_score(const sr_rule* rule, const sr_dataset* data, double* out, size_t n) {
  return guarded([&] {
    require(rule, "rule");
    require(data, "data");
    require(out, "out");
    if (n != data->data.rows()) throw splitrule::ValidationError("output length does not match the row count");
    const auto s = splitrule::score(rule->rule, data->data);
    std::copy(s.begin(), s.end(), out);
  });
}

sr_status sr_rule_recommend(const sr_rule* rule, const sr_dataset* data, int* out, size_t n) {
  return guarded([&] {
    require(rule, "rule");
    require(data, "data");
    require(out, "out");
    if (n != data->data.rows()) throw splitrule::ValidationError("output length does not match the row count");
    const auto r = splitrule::recommend(rule->rule, data->data);
    std::copy(r.begin(), r.end(), out);
  });
}

void sr_rule_free(sr_rule* rule) { delete rule; }

sr_status sr_evaluate(const sr_rule* rule, const sr_dataset* evaluation, const char* evaluate_json, int threads,
                      char** report_json) {
  return guarded([&] {
    require(rule, "rule");
    require(evaluation, "evaluation");
    require(report_json, "report_json");
    auto options = splitrule::evaluation_options_from_config(parse_object(evaluate_json, "evaluate_json"));
    options.threads = resolve_threads(threads);
    const auto report = splitrule::evaluate_rule(rule->rule, evaluation->data, options);
    *report_json = dup_string(splitrule::to_json(report).dump());
  });
}

sr_status sr_compare(const sr_dataset* development, const sr_dataset* validation, const char* compare_json,
                     int threads, char** report_json) {
  return guarded([&] {
    require(development, "development");
    require(validation, "validation");
    require(report_json, "report_json");
    auto options = splitrule::compare_options_from_config(parse_object(compare_json, "compare_json"));
    options.evaluation.threads = resolve_threads(threads);
    const auto report = splitrule::compare_on_validation(development->data, validation->data, options);
    *report_json = dup_string(splitrule::to_json(report).dump());
  });
}

sr_status sr_simulate(const char* simulate_json, int threads, char** report_json, char** table_csv) {
  return guarded([&] {
    require(report_json, "report_json");
    const auto config = splitrule::sim_config_from_config(parse_object(simulate_json, "simulate_json"));
    const auto result = splitrule::run_study(config, resolve_threads(threads));
    std::string json_text = splitrule::to_json(result).dump();
    std::string csv_text = table_csv ? splitrule::study_table_csv(result) : std::string();
    *report_json = dup_string(json_text);
    if (table_csv) *table_csv = dup_string(csv_text);
  });
}

}  // extern "C"

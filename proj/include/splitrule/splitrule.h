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


#ifndef SPLITRULE_SPLITRULE_H_
#define SPLITRULE_SPLITRULE_H_

/*
 * C interface to splitrule: treatment rules from observational data with
 * ratio-of-propensity weights, and their evaluation on independent data.
 *
 * Functions return an sr_status. On failure the message is available from
 * sr_last_error() on the calling thread until the next call on that thread.
 * Strings returned through char** are owned by the caller and released with
 * sr_string_free(). Configuration arguments are JSON texts in the same shape
 * as the sections of a config file.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(SPLITRULE_BUILDING_LIBRARY)
#define SR_API __attribute__((visibility("default")))
#else
#define SR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
  SR_OK = 0,
  SR_ERR_VALIDATION = 1,
  SR_ERR_NUMERICAL = 2,
  SR_ERR_IO = 3,
  SR_ERR_INTERNAL = 4
} sr_status;

typedef struct sr_dataset sr_dataset;
typedef struct sr_partition sr_partition;
typedef struct sr_rule sr_rule;

SR_API const char* sr_version(void);
SR_API const char* sr_last_error(void);
SR_API void sr_string_free(char* s);

/* Configuration. */

/* Reads a TOML or JSON config file into a JSON document. */
SR_API sr_status sr_config_load(const char* path, char** json_out);
/* Resolves one section ("data", "split", "build", "evaluate", "compare" or
 * "simulate") to its complete form with every default filled in. */
SR_API sr_status sr_config_resolve(const char* section, const char* section_json, char** json_out);

/* Datasets. */

SR_API sr_status sr_dataset_load_csv(const char* path, const char* data_json, sr_dataset** out);
SR_API sr_status sr_dataset_parse_csv(const char* csv_text, const char* data_json, sr_dataset** out);
SR_API sr_status sr_dataset_write_csv(const sr_dataset* data, const char* path);
SR_API size_t sr_dataset_rows(const sr_dataset* data);
SR_API uint64_t sr_dataset_fingerprint(const sr_dataset* data);
/* Rows dropped at load time for missing cells (missingness-weighted data). */
SR_API size_t sr_dataset_dropped_rows(const sr_dataset* data);
/* Copies a numeric column into out[0..n), n must equal the row count. */
SR_API sr_status sr_dataset_column(const sr_dataset* data, const char* name, double* out, size_t n);
SR_API void sr_dataset_free(sr_dataset* data);

/* Splitting. */

SR_API sr_status sr_split(const sr_dataset* data, const char* split_json, sr_partition** out);
SR_API size_t sr_partition_count(const sr_partition* partition);
/* New handle holding a copy of part k. */
SR_API sr_status sr_partition_part(const sr_partition* partition, size_t k, sr_dataset** out);
/* Row indices of part k into the source dataset; valid while the partition lives. */
SR_API sr_status sr_partition_indices(const sr_partition* partition, size_t k, const size_t** indices,
                                      size_t* n);
/* Manifest recording seed, fractions, row indices and fingerprints. */
SR_API sr_status sr_partition_manifest(const sr_partition* partition, const char* source,
                                       const char* const* part_names, const char* const* part_files,
                                       char** json_out);
SR_API void sr_partition_free(sr_partition* partition);
/* Fails with SR_ERR_VALIDATION unless both fingerprints are disjoint parts of the manifest. */
SR_API sr_status sr_check_independence(const char* manifest_json, uint64_t development_fingerprint,
                                       uint64_t evaluation_fingerprint);

/* Rules. */

SR_API sr_status sr_rule_build(const sr_dataset* development, const char* build_json, sr_rule** out);
SR_API sr_status sr_rule_from_json(const char* rule_json, sr_rule** out);
SR_API sr_status sr_rule_to_json(const sr_rule* rule, char** json_out);
SR_API uint64_t sr_rule_development_fingerprint(const sr_rule* rule);
/* Treatment benefit per row; positive favours treatment. n must equal the row count. */
SR_API sr_status sr_rule_score(const sr_rule* rule, const sr_dataset* data, double* out, size_t n);
SR_API sr_status sr_rule_recommend(const sr_rule* rule, const sr_dataset* data, int* out, size_t n);
SR_API void sr_rule_free(sr_rule* rule);

/* Reports. threads <= 0 means one worker per hardware thread. */

SR_API sr_status sr_evaluate(const sr_rule* rule, const sr_dataset* evaluation, const char* evaluate_json,
                             int threads, char** report_json);
SR_API sr_status sr_compare(const sr_dataset* development, const sr_dataset* validation,
                            const char* compare_json, int threads, char** report_json);
/* Runs the simulation study; table_csv may be NULL. */
SR_API sr_status sr_simulate(const char* simulate_json, int threads, char** report_json, char** table_csv);

#ifdef __cplusplus
}
#endif

#endif /* SPLITRULE_SPLITRULE_H_ */

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

// splitrule command-line tool. Every subcommand reads one config file, lets
// flags override it, and writes JSON reports that embed the resolved config.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitrule/splitrule.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kDefaultSeed = 20200101;

struct Failure {
  sr_status status;
  std::string message;
};

int exit_code(sr_status s) {
  switch (s) {
    case SR_OK: return 0;
    case SR_ERR_VALIDATION:
    case SR_ERR_IO: return 1;
    case SR_ERR_NUMERICAL: return 2;
    default: return 3;
  }
}

void check(sr_status s) {
  if (s != SR_OK) throw Failure{s, sr_last_error()};
}

[[noreturn]] void invalid(const std::string& message) { throw Failure{SR_ERR_VALIDATION, message}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  sr_string_free(s);
  return out;
}

struct DatasetDeleter {
  void operator()(sr_dataset* d) const { sr_dataset_free(d); }
};
struct RuleDeleter {
  void operator()(sr_rule* r) const { sr_rule_free(r); }
};
struct PartitionDeleter {
  void operator()(sr_partition* p) const { sr_partition_free(p); }
};
using DatasetPtr = std::unique_ptr<sr_dataset, DatasetDeleter>;
using RulePtr = std::unique_ptr<sr_rule, RuleDeleter>;
using PartitionPtr = std::unique_ptr<sr_partition, PartitionDeleter>;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SR_ERR_IO, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to a temporary file in the target directory, then renames over the target.
void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{SR_ERR_IO, "cannot write '" + tmp.string() + "'"};
    out << content;
    out.flush();
    if (!out) throw Failure{SR_ERR_IO, "write failed for '" + tmp.string() + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Failure{SR_ERR_IO, "cannot rename onto '" + path + "': " + ec.message()};
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string output;
};

struct Config {
  json doc = json::object();
  fs::path base;

  json section(const std::string& name) const {
    if (!doc.contains(name)) return json::object();
    const auto& s = doc.at(name);
    if (!s.is_object()) invalid("config: [" + name + "] must be a table");
    return s;
  }

  // Config paths are relative to the config file.
  std::string path_of(const std::string& p) const {
    const fs::path fp(p);
    return fp.is_absolute() || base.empty() ? p : (base / fp).lexically_normal().string();
  }
};

Config load_config(const std::string& path, bool required) {
  Config c;
  if (path.empty()) {
    if (required) invalid("--config is required");
    return c;
  }
  char* text = nullptr;
  check(sr_config_load(path.c_str(), &text));
  c.doc = json::parse(take(text));
  c.base = fs::path(path).parent_path();
  for (const auto& [k, v] : c.doc.items()) {
    static const std::vector<std::string> known = {"seed", "data", "split", "build", "evaluate", "compare", "simulate"};
    if (std::find(known.begin(), known.end(), k) == known.end()) invalid("config: unknown section '" + k + "'");
  }
  return c;
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    invalid(what + " must be a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t seed_value(const json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) return parse_seed_text(v.get<std::string>(), what);
  invalid(what + " must be a non-negative integer");
}

// Flag, then the section's own key, then the top-level seed, then
// SPLITRULE_SEED, then the built-in default.
std::uint64_t resolve_seed(const Common& common, const Config& config, const json& section, const char* key) {
  if (common.seed) return *common.seed;
  if (section.contains(key)) return seed_value(section.at(key), key);
  if (config.doc.contains("seed")) return seed_value(config.doc.at("seed"), "seed");
  if (const char* env = std::getenv("SPLITRULE_SEED"); env && *env) return parse_seed_text(env, "SPLITRULE_SEED");
  return kDefaultSeed;
}

// Pulls a file key out of a section so the remainder can be validated by the library.
std::optional<std::string> take_key(json& section, const char* key) {
  if (!section.contains(key)) return std::nullopt;
  const auto& v = section.at(key);
  if (!v.is_string()) invalid(std::string("config: ") + key + " must be a path string");
  std::string out = v.get<std::string>();
  section.erase(key);
  return out;
}

std::string pick_path(const std::string& flag, std::optional<std::string> from_config, const Config& config,
                      const std::string& what) {
  if (!flag.empty()) return flag;
  if (from_config) return config.path_of(*from_config);
  invalid("no " + what + " given (flag or config)");
}

json resolve(const char* section, const json& j) {
  char* out = nullptr;
  check(sr_config_resolve(section, j.dump().c_str(), &out));
  return json::parse(take(out));
}

json resolved_data(const Config& config) {
  if (!config.doc.contains("data")) invalid("config: missing [data] section");
  return resolve("data", config.section("data"));
}

DatasetPtr load_dataset(const std::string& path, const json& data) {
  sr_dataset* d = nullptr;
  check(sr_dataset_load_csv(path.c_str(), data.dump().c_str(), &d));
  return DatasetPtr(d);
}

json dataset_info(const std::string& path, const sr_dataset* d) {
  json j;
  j["path"] = path;
  j["rows"] = sr_dataset_rows(d);
  j["dropped_incomplete_rows"] = sr_dataset_dropped_rows(d);
  j["fingerprint"] = hex64(sr_dataset_fingerprint(d));
  return j;
}

json report_header(const char* kind, std::uint64_t seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["tool_version"] = sr_version();
  j["seed"] = seed;
  return j;
}

// Sets cv_seed on every model spec in a build-shaped table that lacks one,
// or on all of them when the seed came from the command line.
void seed_specs(json& build, std::uint64_t seed, bool force) {
  for (const char* key : {"propensity", "propensity_numerator", "propensity_denominator", "rule"}) {
    if (!build.contains(key)) build[key] = json::object();
    auto& spec = build[key];
    if (!spec.is_object()) invalid(std::string("config: ") + key + " must be a table");
    if (force || !spec.contains("cv_seed")) spec["cv_seed"] = seed;
  }
}

// split -----------------------------------------------------------------------

struct SplitArgs {
  std::string input;
  std::string output_dir;
  std::vector<double> fractions;
  std::vector<std::string> names;
  bool stratify = false;
};

void run_split(const Common& common, const SplitArgs& args) {
  const auto config = load_config(common.config_path, true);
  json section = config.section("split");
  const auto input = pick_path(args.input, take_key(section, "input"), config, "input CSV");
  const auto cfg_dir = take_key(section, "output_dir");
  std::string out_dir = !common.output.empty() ? common.output : !args.output_dir.empty() ? args.output_dir
                        : cfg_dir ? config.path_of(*cfg_dir) : std::string("split");
  std::vector<std::string> names;
  if (section.contains("names")) {
    names = section.at("names").get<std::vector<std::string>>();
    section.erase("names");
  }
  if (!args.names.empty()) names = args.names;
  const auto seed = resolve_seed(common, config, section, "seed");
  section["seed"] = seed;
  if (!args.fractions.empty()) section["fractions"] = args.fractions;
  if (args.stratify) section["stratify_by_treatment"] = true;
  const json split_cfg = resolve("split", section);
  const auto parts = split_cfg.at("fractions").size();
  if (names.empty()) {
    names = parts == 2 ? std::vector<std::string>{"development", "evaluation"}
                       : std::vector<std::string>{"development", "validation", "evaluation"};
  }
  if (names.size() != parts) invalid("split: " + std::to_string(parts) + " parts need as many names");

  const json data_cfg = resolved_data(config);
  const auto data = load_dataset(input, data_cfg);
  sr_partition* p = nullptr;
  check(sr_split(data.get(), split_cfg.dump().c_str(), &p));
  const PartitionPtr partition(p);

  std::vector<std::string> files;
  for (std::size_t k = 0; k < parts; ++k) {
    files.push_back(names[k] + ".csv");
    sr_dataset* part = nullptr;
    check(sr_partition_part(partition.get(), k, &part));
    const DatasetPtr owned(part);
    const auto target = (fs::path(out_dir) / files.back()).string();
    const auto tmp = target + ".tmp." + std::to_string(::getpid());
    fs::create_directories(out_dir);
    check(sr_dataset_write_csv(owned.get(), tmp.c_str()));
    fs::rename(tmp, target);
  }
  std::vector<const char*> name_ptrs, file_ptrs;
  for (std::size_t k = 0; k < parts; ++k) {
    name_ptrs.push_back(names[k].c_str());
    file_ptrs.push_back(files[k].c_str());
  }
  char* manifest_text = nullptr;
  check(sr_partition_manifest(partition.get(), input.c_str(), name_ptrs.data(), file_ptrs.data(), &manifest_text));
  json manifest = json::parse(take(manifest_text));
  manifest["tool_version"] = sr_version();
  manifest["config"] = {{"data", data_cfg}, {"split", split_cfg}};
  manifest["source_fingerprint"] = hex64(sr_dataset_fingerprint(data.get()));
  write_atomic((fs::path(out_dir) / "manifest.json").string(), dump(manifest));
  std::cerr << "split " << sr_dataset_rows(data.get()) << " rows into " << parts << " parts under " << out_dir
            << "\n";
}

// build -----------------------------------------------------------------------

struct BuildArgs {
  std::string data;
};

void run_build(const Common& common, const BuildArgs& args) {
  const auto config = load_config(common.config_path, true);
  json section = config.section("build");
  const auto input = pick_path(args.data, take_key(section, "development"), config, "development CSV");
  const auto output = pick_path(common.output, take_key(section, "output"), config, "output path");
  const auto seed = resolve_seed(common, config, json::object(), "seed");
  seed_specs(section, seed, common.seed.has_value());
  const json build_cfg = resolve("build", section);
  const json data_cfg = resolved_data(config);
  const auto data = load_dataset(input, data_cfg);
  sr_rule* r = nullptr;
  check(sr_rule_build(data.get(), build_cfg.dump().c_str(), &r));
  const RulePtr rule(r);
  char* text = nullptr;
  check(sr_rule_to_json(rule.get(), &text));
  json doc = json::parse(take(text));
  doc["tool_version"] = sr_version();
  doc["seed"] = seed;
  doc["config"] = {{"data", data_cfg}, {"build", build_cfg}};
  doc["inputs"] = {{"development", dataset_info(input, data.get())}};
  write_atomic(output, dump(doc));
  std::cerr << "wrote rule to " << output << "\n";
}

// evaluate --------------------------------------------------------------------

struct EvaluateArgs {
  std::string rule;
  std::string data;
  std::string manifest;
  std::optional<int> replicates;
};

void run_evaluate(const Common& common, const EvaluateArgs& args) {
  const auto config = load_config(common.config_path, true);
  json section = config.section("evaluate");
  const auto rule_path = pick_path(args.rule, take_key(section, "rule"), config, "rule file");
  const auto input = pick_path(args.data, take_key(section, "evaluation"), config, "evaluation CSV");
  const auto output = pick_path(common.output, take_key(section, "output"), config, "output path");
  const auto manifest_cfg = take_key(section, "manifest");
  const std::string manifest = !args.manifest.empty() ? args.manifest
                               : manifest_cfg         ? config.path_of(*manifest_cfg)
                                                      : std::string();
  json bootstrap = section.contains("bootstrap") ? section.at("bootstrap") : json::object();
  const auto seed = resolve_seed(common, config, bootstrap, "seed");
  bootstrap["seed"] = seed;
  if (args.replicates) bootstrap["replicates"] = *args.replicates;
  section["bootstrap"] = bootstrap;
  const json eval_cfg = resolve("evaluate", section);
  const json data_cfg = resolved_data(config);

  sr_rule* r = nullptr;
  check(sr_rule_from_json(read_text(rule_path).c_str(), &r));
  const RulePtr rule(r);
  const auto data = load_dataset(input, data_cfg);
  if (!manifest.empty()) {
    check(sr_check_independence(read_text(manifest).c_str(), sr_rule_development_fingerprint(rule.get()),
                                sr_dataset_fingerprint(data.get())));
  }
  char* text = nullptr;
  check(sr_evaluate(rule.get(), data.get(), eval_cfg.dump().c_str(), common.threads, &text));
  json doc = report_header("evaluation_report", seed);
  doc["config"] = {{"data", data_cfg}, {"evaluate", eval_cfg}};
  doc["inputs"] = {{"rule", {{"path", rule_path},
                             {"development_fingerprint", hex64(sr_rule_development_fingerprint(rule.get()))}}},
                   {"evaluation", dataset_info(input, data.get())}};
  if (!manifest.empty()) doc["inputs"]["manifest"] = manifest;
  doc["result"] = json::parse(take(text));
  write_atomic(output, dump(doc));
  std::cerr << "wrote evaluation to " << output << "\n";
}

// compare ---------------------------------------------------------------------

struct CompareArgs {
  std::string development;
  std::string validation;
  std::string criterion;
};

void run_compare(const Common& common, const CompareArgs& args) {
  const auto config = load_config(common.config_path, true);
  json section = config.section("compare");
  const auto dev_path = pick_path(args.development, take_key(section, "development"), config, "development CSV");
  const auto val_path = pick_path(args.validation, take_key(section, "validation"), config, "validation CSV");
  const auto output = pick_path(common.output, take_key(section, "output"), config, "output path");
  if (!args.criterion.empty()) section["criterion"] = args.criterion;
  const auto seed = resolve_seed(common, config, json::object(), "seed");
  if (section.contains("candidates") && section.at("candidates").is_array()) {
    for (auto& c : section["candidates"]) {
      if (c.is_object()) seed_specs(c, seed, common.seed.has_value());
    }
  }
  json evaluation = section.contains("evaluation") ? section.at("evaluation") : json::object();
  json bootstrap = evaluation.contains("bootstrap") ? evaluation.at("bootstrap") : json{{"replicates", 0}};
  if (common.seed || !bootstrap.contains("seed")) bootstrap["seed"] = seed;
  evaluation["bootstrap"] = bootstrap;
  section["evaluation"] = evaluation;
  const json compare_cfg = resolve("compare", section);
  const json data_cfg = resolved_data(config);
  const auto dev = load_dataset(dev_path, data_cfg);
  const auto val = load_dataset(val_path, data_cfg);
  char* text = nullptr;
  check(sr_compare(dev.get(), val.get(), compare_cfg.dump().c_str(), common.threads, &text));
  json doc = report_header("validation_report", seed);
  doc["config"] = {{"data", data_cfg}, {"compare", compare_cfg}};
  doc["inputs"] = {{"development", dataset_info(dev_path, dev.get())},
                   {"validation", dataset_info(val_path, val.get())}};
  doc["result"] = json::parse(take(text));
  write_atomic(output, dump(doc));
  std::cerr << "wrote validation report to " << output << "\n";
}

// simulate --------------------------------------------------------------------

struct SimulateArgs {
  std::string preset;
  std::vector<std::size_t> sizes;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> n_eval;
  std::optional<std::size_t> benchmark_rows;
  std::string csv;
};

void run_simulate(const Common& common, const SimulateArgs& args) {
  const auto config = load_config(common.config_path, false);
  json section = config.section("simulate");
  const auto output_cfg = take_key(section, "output");
  const auto csv_cfg = take_key(section, "csv");
  const std::string output = !common.output.empty() ? common.output
                             : output_cfg           ? config.path_of(*output_cfg)
                                                    : std::string("simulation.json");
  const std::string csv = !args.csv.empty() ? args.csv
                          : csv_cfg         ? config.path_of(*csv_cfg)
                                            : fs::path(output).replace_extension(".csv").string();
  if (!args.preset.empty()) section["preset"] = args.preset;
  if (!args.sizes.empty()) section["sizes"] = args.sizes;
  if (args.replications) section["replications"] = *args.replications;
  if (args.n_eval) section["n_eval"] = *args.n_eval;
  if (args.benchmark_rows) section["benchmark_rows"] = *args.benchmark_rows;
  const auto seed = resolve_seed(common, config, section, "base_seed");
  section["base_seed"] = seed;
  const json sim_cfg = resolve("simulate", section);
  char* text = nullptr;
  char* table = nullptr;
  check(sr_simulate(sim_cfg.dump().c_str(), common.threads, &text, &table));
  json doc = report_header("simulation_report", seed);
  doc["config"] = {{"simulate", sim_cfg}};
  doc["result"] = json::parse(take(text));
  write_atomic(csv, take(table));
  write_atomic(output, dump(doc));
  std::cerr << "wrote simulation grid to " << output << " and " << csv << "\n";
}

void add_common(CLI::App* sub, Common& common, bool config_required) {
  auto* opt = sub->add_option("-c,--config", common.config_path, "Config file (TOML, or JSON by extension)");
  if (config_required) opt->required();
  sub->add_option_function<std::string>(
      "--seed", [&common](const std::string& s) { common.seed = parse_seed_text(s, "--seed"); },
      "Seed override (default: config, then SPLITRULE_SEED)");
  sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  sub->add_option("-o,--output", common.output, "Output path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitrule: treatment rules from observational data with ratio-of-propensity weights"};
  app.set_version_flag("--version", std::string(sr_version()));
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Common common;

  SplitArgs split_args;
  auto* split = app.add_subcommand("split", "Partition a dataset into development/(validation/)evaluation parts");
  add_common(split, common, true);
  split->add_option("--input", split_args.input, "Input CSV");
  split->add_option("--output-dir", split_args.output_dir, "Directory for part CSVs and manifest.json");
  split->add_option("--fractions", split_args.fractions, "Part fractions, e.g. 0.5,0.25,0.25")->delimiter(',');
  split->add_option("--names", split_args.names, "Part names")->delimiter(',');
  split->add_flag("--stratify", split_args.stratify, "Stratify by treatment arm");

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "Build a treatment rule on development data");
  add_common(build, common, true);
  build->add_option("--data", build_args.data, "Development CSV");

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a rule on independent data");
  add_common(evaluate, common, true);
  evaluate->add_option("--rule", eval_args.rule, "Rule JSON written by build");
  evaluate->add_option("--data", eval_args.data, "Evaluation CSV");
  evaluate->add_option("--manifest", eval_args.manifest, "Split manifest used to check independence");
  evaluate->add_option("--replicates", eval_args.replicates, "Bootstrap replicates (0 disables)")
      ->check(CLI::NonNegativeNumber);

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Rank candidate specifications on validation data");
  add_common(compare, common, true);
  compare->add_option("--development", compare_args.development, "Development CSV");
  compare->add_option("--validation", compare_args.validation, "Validation CSV");
  compare->add_option("--criterion", compare_args.criterion, "abr or ate_positive");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the simulation study");
  add_common(simulate, common, false);
  simulate->add_option("--preset", sim_args.preset, "paper-desk or paper-full");
  simulate->add_option("--sizes", sim_args.sizes, "Development sizes, e.g. 50,100,1000")->delimiter(',');
  simulate->add_option("--replications", sim_args.replications, "Replications per cell");
  simulate->add_option("--n-eval", sim_args.n_eval, "Evaluation population per replication");
  simulate->add_option("--benchmark-rows", sim_args.benchmark_rows, "Population for the benchmark rules");
  simulate->add_option("--csv", sim_args.csv, "Grid CSV path (default: output with .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*split) run_split(common, split_args);
    if (*build) run_build(common, build_args);
    if (*evaluate) run_evaluate(common, eval_args);
    if (*compare) run_compare(common, compare_args);
    if (*simulate) run_simulate(common, sim_args);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code(f.status);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

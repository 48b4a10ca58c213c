#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ell2/numerics.hpp"

namespace ell2 {

struct RunConfig {
  // a_i = weight_ratio^i, listed explicitly up to weight_count, same rule beyond.
  int weight_count = 8;
  double weight_ratio = 0.5;
  int dims = 8;
  std::uint64_t seed = 20240601;
  long fernique_samples = 1000000;
  long cutoff_samples = 100000;
  long gauss_green_samples = 200000;
  std::vector<std::string> suites;
  std::string out;
  std::string format = "csv";

  WeightSequence weights() const { return WeightSequence::geometric(weight_count, weight_ratio); }
  // Throws ConfigError.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// Missing keys keep their defaults; unknown keys are a ConfigError.
RunConfig parse_config(const std::string& json_text);
std::string to_json(const RunConfig& cfg);
// ELL2_SEED, when set, replaces cfg.seed.
void apply_env_overrides(RunConfig& cfg);

struct NamedValue {
  std::string name;
  double value = 0.0;
  bool operator==(const NamedValue&) const = default;
};

struct Record {
  std::string suite;
  std::string check;
  std::string anchor;  // the statement the check exercises
  std::string inputs_digest;
  std::vector<NamedValue> values;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  double wall_seconds = 0.0;  // kept out of the report body, see emit()

  double value(const std::string& name) const;
  // Value equality; wall time is ignored.
  bool operator==(const Record& o) const {
    return suite == o.suite && check == o.check && anchor == o.anchor && inputs_digest == o.inputs_digest &&
           values == o.values && tolerance == o.tolerance && pass == o.pass && detail == o.detail;
  }
};

struct Report {
  std::vector<Record> records;

  bool all_pass() const;
  // SHA-1 of the CSV form.
  std::string digest() const;
  bool operator==(const Report&) const = default;
};

// Declared suite order. "all" expands to this list.
const std::vector<std::string>& suite_names();

// Runs the selected suites in declared order. Suite exceptions become
// failing records rather than propagating.
Report run_suite(const RunConfig& cfg);

// Columns: suite,check,anchor,inputs_digest,values,tolerance,pass,detail.
// values is "name=value;..." with 17 significant digits.
std::string to_csv(const Report& r);
std::string to_json(const Report& r);
Report report_from_json(const std::string& text);

// Writes the report to `path` and the wall times to `path + ".timing.csv"`,
// so that the report itself stays byte-identical across runs. Throws IoError.
void emit(const Report& r, const std::string& path, const std::string& format);

std::string sha1_hex(const std::string& data);

}  // namespace ell2

#pragma once

#include "polarkit/check.hpp"
#include "polarkit/io.hpp"
#include "polarkit/models.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polarkit {

/// polar, isometry, tower, theorem22, graded, norm_formula, words
const std::vector<std::string>& suite_names();

struct SuiteConfig {
  std::vector<ModelSpec> models;
  std::vector<std::string> suites;
  double tol = kDefaultTol;
  int kmax = 64;
  std::uint64_t seed = 0;
  std::string output;
  /// Record wall-clock times; reports are byte-identical only without it.
  bool timings = false;

  /// Throws ConfigError.
  void validate() const;
  /// {"models": [spec, ...] | "zoo", "suites": [...] | "all", "tol", "kmax",
  /// "seed", "output"}. Throws ConfigError.
  static SuiteConfig from_json(const Json& j);
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const { return all_pass(checks); }
};

struct ModelResult {
  std::string name;
  ModelSpec spec;
  std::vector<SuiteResult> suites;
};

struct Report {
  double tol = kDefaultTol;
  int kmax = 64;
  std::uint64_t seed = 0;
  std::vector<std::string> suites;
  std::vector<ModelResult> models;

  bool pass() const;
  Json to_json() const;
  std::string summary() const;
};

/// Seed for one (model, suite) pair: seed ^ (fnv1a(suite) + golden * (index + 1)).
std::uint64_t suite_seed(std::uint64_t seed, std::size_t model_index, const std::string& suite);

/// Runs one suite on one model. Library errors raised by the suite become a
/// failing "<suite>.error" check.
SuiteResult run_model_suite(const ModelSpec& spec, const std::string& suite, const SuiteConfig& config,
                            std::uint64_t seed);

/// Suites run in name order for every model in list order; checks within a
/// suite are sorted by name.
Report run_suite(const SuiteConfig& config);

/// 0 when every check passes, 1 otherwise.
inline int exit_code(const Report& r) { return r.pass() ? 0 : 1; }

}  // namespace polarkit

#include <doctest.h>

#include "polarkit/report.hpp"

#include <set>

using namespace polarkit;

namespace {

ModelSpec q_model(double q, int n) {
  ModelSpec s;
  s.kind = ModelKind::q_oscillator;
  s.q = q;
  s.h = 1.0;
  s.dim = n;
  return s;
}

const Check* find(const Report& r, const std::string& name) {
  for (const auto& m : r.models)
    for (const auto& s : m.suites)
      for (const auto& c : s.checks)
        if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("run_suite examples") {
  SuiteConfig c;
  ModelSpec normal;
  normal.kind = ModelKind::normal;
  normal.diag = {1.0, Complex(0, 2), -1.0};
  c.models = {normal};
  c.suites = {"polar"};
  auto r = run_suite(c);
  CHECK(r.pass());
  CHECK(exit_code(r) == 0);

  ModelSpec jordan;
  jordan.kind = ModelKind::jordan_block;
  jordan.dim = 3;
  c.models = {jordan};
  c.suites = {"theorem22"};
  r = run_suite(c);
  CHECK(exit_code(r) == 1);
  const auto* err = find(r, "theorem22.error");
  REQUIRE(err != nullptr);
  CHECK(err->note.find("not a function") != std::string::npos);

  c.models = {q_model(1.0, 4)};
  c.suites = {"norm_formula"};
  r = run_suite(c);
  CHECK(r.pass());
  const auto* rel = find(r, "norm_formula.relative_error");
  REQUIRE(rel != nullptr);
  CHECK(rel->residual <= 0.05);
}

TEST_CASE("config validation") {
  SuiteConfig c;
  c.models = {q_model(0.5, 4)};
  c.suites = {"polar"};
  CHECK_NOTHROW(c.validate());
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.tol = 1e-9;
  c.kmax = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.kmax = 64;
  c.suites = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.suites = {"spectral"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.suites = {"polar"};
  c.models = {q_model(0.0, 4)};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  CHECK_THROWS_AS(SuiteConfig::from_json(Json::array()), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json{{"kmax", "many"}}), ConfigError);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json{{"models", Json::array({Json{{"kind", "nope"}}})}}), ConfigError);
  const auto z = SuiteConfig::from_json(Json{{"models", "zoo"}, {"suites", "all"}, {"seed", 7}});
  CHECK(z.models.size() == zoo().size());
  CHECK(z.suites == suite_names());
  CHECK(z.seed == 7);
}

TEST_CASE("report ordering and determinism") {
  SuiteConfig c;
  c.models = {q_model(0.5, 4), q_model(1.0, 4)};
  c.suites = {"words", "graded", "polar", "isometry"};
  c.seed = 3;
  const auto r1 = run_suite(c);
  const auto r2 = run_suite(c);
  CHECK(r1.to_json().dump(2) == r2.to_json().dump(2));
  CHECK(r1.pass());
  for (const auto& m : r1.models) {
    std::vector<std::string> names;
    for (const auto& s : m.suites) names.push_back(s.suite);
    CHECK(names == std::vector<std::string>{"graded", "isometry", "polar", "words"});
    for (const auto& s : m.suites)
      for (std::size_t i = 1; i < s.checks.size(); ++i) CHECK(s.checks[i - 1].name <= s.checks[i].name);
  }
  for (const auto& m : r1.to_json()["models"])
    for (const auto& s : m["suites"])
      for (const auto& ch : s["checks"]) {
        CHECK(ch["paper_anchor"].get<std::string>().size() > 0);
        CHECK(ch["elapsed_ms"].get<double>() == 0.0);
      }

  c.seed = 4;
  CHECK(run_suite(c).to_json().dump() != r1.to_json().dump());
}

TEST_CASE("suite seeds differ per model and suite") {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 5; ++i)
    for (const auto& s : suite_names()) seen.insert(suite_seed(0, i, s));
  CHECK(seen.size() == 5 * suite_names().size());
}

#include "polarkit/report.hpp"

#include "polarkit/graded.hpp"
#include "polarkit/isometry.hpp"
#include "polarkit/relation.hpp"
#include "polarkit/rng.hpp"
#include "polarkit/tower.hpp"
#include "polarkit/words.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace polarkit {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"polar", "isometry", "tower", "theorem22", "graded", "norm_formula",
                                              "words"};
  return names;
}

void SuiteConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (kmax < 1) throw ConfigError("kmax must be at least 1");
  if (suites.empty()) throw ConfigError("at least one suite is required");
  if (models.empty()) throw ConfigError("at least one model is required");
  const auto& known = suite_names();
  for (const auto& s : suites)
    if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite '" + s + "'");
  for (std::size_t i = 0; i < models.size(); ++i) {
    try {
      build(models[i]);
    } catch (const InvalidSpec& e) {
      throw ConfigError("models[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

SuiteConfig SuiteConfig::from_json(const Json& j) {
  SuiteConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (j.contains("models")) {
      const auto& m = j["models"];
      if (m.is_string() && m.get<std::string>() == "zoo") {
        c.models = zoo();
      } else if (m.is_array()) {
        for (std::size_t i = 0; i < m.size(); ++i)
          c.models.push_back(model_spec_from_json(m[i], "models[" + std::to_string(i) + "]"));
      } else {
        throw ConfigError("models must be a list of model specs or \"zoo\"");
      }
    }
    if (j.contains("suites")) {
      const auto& s = j["suites"];
      if (s.is_string() && s.get<std::string>() == "all") {
        c.suites = suite_names();
      } else if (s.is_array()) {
        for (const auto& name : s) {
          if (!name.is_string()) throw ConfigError("suites must be strings");
          c.suites.push_back(name.get<std::string>());
        }
      } else {
        throw ConfigError("suites must be a list of names or \"all\"");
      }
    }
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("kmax")) c.kmax = j.at("kmax").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::uint64_t suite_seed(std::uint64_t seed, std::size_t model_index, const std::string& suite) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : suite) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return seed ^ (h + 0x9E3779B97F4A7C15ULL * (model_index + 1));
}

namespace {

using Clock = std::chrono::steady_clock;

class Runner {
 public:
  Runner(const ModelSpec& spec, const SuiteConfig& config, std::uint64_t seed)
      : spec_(spec), config_(config), tol_(config.tol), rng_(seed), seed_(seed), a_(build(spec)), n_(a_.rows()) {}

  std::vector<Check> run(const std::string& suite) {
    if (suite == "polar") return polar();
    if (suite == "isometry") return isometry();
    if (suite == "tower") return tower();
    if (suite == "theorem22") return timed([&] { return theorem22_report(a_, tol_); });
    if (suite == "graded") return graded();
    if (suite == "norm_formula") return norm_formula();
    if (suite == "words") return words();
    throw ConfigError("unknown suite '" + suite + "'");
  }

 private:
  std::vector<Check> timed(const std::function<std::vector<Check>()>& fn) {
    const auto start = Clock::now();
    auto out = fn();
    if (config_.timings) {
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      for (auto& c : out) c.elapsed_ms = ms;
    }
    return out;
  }

  std::vector<Check> polar() {
    return timed([&] {
      std::vector<Check> out;
      const auto p = polar_decompose(a_, tol_);
      const double na = operator_norm(a_);
      out.push_back(make_check("polar.reconstruction", "a = U|a|", operator_norm(a_ - p.U * p.absA), tol_ * (1 + na)));
      out.push_back(make_check("polar.abs_square", "|a|^2 = a*a", operator_norm(p.absA * p.absA - a_.adjoint() * a_),
                               tol_ * (1 + na * na)));
      {
        const auto eig = hermitian_eig(p.absA, tol_ * (1 + na));
        const double neg = std::max(0.0, -eig.eigenvalues.minCoeff());
        out.push_back(make_check("polar.abs_positive", "|a| is positive", neg + operator_norm(p.absA - p.absA.adjoint()),
                                 tol_ * (1 + na)));
      }
      {
        const auto r = partial_isometry_report(p.U, tol_);
        auto c = make_check("polar.partial_isometry", "U is a partial isometry",
                            *std::max_element(r.residuals.begin(), r.residuals.end()), tol_);
        c.pass = c.pass && r.all() && r.consistent;
        out.push_back(c);
      }
      out.push_back(make_check("polar.initial_projection", "U*U is the support projection of |a|",
                               operator_norm(p.U.adjoint() * p.U - range_projection(p.absA, tol_)), tol_));
      {
        double worst = 0.0;
        int bad = 0;
        for (int t = 0; t < 20; ++t) {
          const Eigen::Index n = rng_.integer(2, 16);
          const ComplexMatrix m = rng_.gaussian_matrix(n);
          const auto q = polar_decompose(m, tol_);
          const double nm = operator_norm(m);
          worst = std::max(worst, operator_norm(m - q.U * q.absA) / (1 + nm));
          const auto r = partial_isometry_report(q.U, tol_);
          if (!r.all() || !r.consistent) ++bad;
        }
        auto c = make_check("polar.random_samples", "a = U|a| on random matrices", worst, tol_, "20 samples");
        c.pass = c.pass && bad == 0;
        out.push_back(c);
      }
      return out;
    });
  }

  std::vector<Check> isometry() {
    return timed([&] {
      std::vector<Check> out;
      const auto p = polar_decompose(a_, tol_);
      const int kmax = static_cast<int>(n_);
      {
        const auto r = partial_isometry_report(p.U, tol_);
        auto c = make_check("isometry.five_conditions", "five equivalent partial isometry conditions",
                            *std::max_element(r.residuals.begin(), r.residuals.end()), tol_);
        c.pass = c.pass && r.all() && r.consistent;
        out.push_back(c);
      }
      {
        const auto r = power_isometry_check(p.U, kmax, tol_);
        auto c = make_check("isometry.power_equivalence", "powers are partial isometries iff their projections decrease",
                            r.equivalent ? 0.0 : std::max(r.powers_residual, r.projections_residual), tol_);
        c.pass = r.equivalent;
        std::ostringstream os;
        os << "(ii) " << r.powers_partial_isometries << " (iii) " << r.decreasing_projections;
        c.note = os.str();
        out.push_back(c);
      }
      try {
        const auto r = commuting_projection_properties(p.U, kmax, tol_);
        auto c = make_check(
            "isometry.commuting_projections", "consequences of [U*U, U^k U*^k] = 0",
            std::max({r.commutant_residual, r.reduction_residual, r.final_projections_residual}), tol_);
        c.pass = c.pass && r.all();
        out.push_back(c);
      } catch (const HypothesisViolated& e) {
        out.push_back(skipped_check("isometry.commuting_projections", "consequences of [U*U, U^k U*^k] = 0", e.what()));
      }
      {
        int bad = 0;
        for (int t = 0; t < 30; ++t) {
          const Eigen::Index n = rng_.integer(1, 8);
          ComplexMatrix v;
          switch (t % 3) {
            case 0: v = rng_.partial_isometry(n, rng_.integer(0, static_cast<int>(n))); break;
            case 1: v = rng_.unitary(n); break;
            default: v = rng_.gaussian_matrix(n); break;
          }
          const auto r = partial_isometry_report(v, tol_);
          const bool expect = t % 3 != 2;
          if (!r.consistent || (expect && !r.all()) || (!expect && !r.none())) ++bad;
          if (!power_isometry_check(v, static_cast<int>(n) + 1, tol_).equivalent) ++bad;
        }
        out.push_back(make_check("isometry.random_samples", "characterizations agree on random inputs", bad, 0.0,
                                 "30 samples; residual counts violations"));
      }
      return out;
    });
  }

  std::vector<Check> tower() {
    return timed([&] {
      const auto p = polar_decompose(a_, tol_);
      const EndoPair pair(p.U, tol_);
      const auto t = build_tower(generate({p.absA}, true, n_), pair, tol_);
      auto out = t.checks;
      const auto theorems = verify_tower_theorems(t, pair, tol_);
      out.insert(out.end(), theorems.begin(), theorems.end());
      return out;
    });
  }

  std::vector<Check> graded() {
    return timed([&] {
      std::vector<Check> out;
      const auto model = graded_model_for(a_, spec_.name(), tol_);
      const int width = std::min<int>(3, static_cast<int>(n_) - 1);
      {
        double mul = 0.0;
        double adj = 0.0;
        for (int t = 0; t < 20; ++t) {
          const auto g1 = random_graded_element(model, rng_, rng_.integer(0, width));
          const auto g2 = random_graded_element(model, rng_, rng_.integer(0, width));
          const ComplexMatrix r1 = realize(g1);
          const ComplexMatrix r2 = realize(g2);
          const double scale = 1 + operator_norm(r1) * operator_norm(r2);
          mul = std::max(mul, operator_norm(realize(graded_mul(g1, g2)) - r1 * r2) / scale);
          adj = std::max(adj, operator_norm(realize(graded_adjoint(g1)) - r1.adjoint()) / (1 + operator_norm(r1)));
        }
        out.push_back(make_check("graded.ring_homomorphism", "realize is multiplicative", mul, tol_, "20 pairs"));
        out.push_back(make_check("graded.adjoint", "realize commutes with the adjoint", adj, tol_, "20 samples"));
      }
      {
        std::vector<ComplexMatrix> ds;
        int bad = 0;
        for (int t = 0; t < 20; ++t) {
          ds.clear();
          const int m = rng_.integer(1, 5);
          for (int i = 0; i < m; ++i) ds.push_back(rng_.gaussian_matrix(n_));
          if (!sum_norm_inequalities(ds, tol_).all()) ++bad;
        }
        out.push_back(make_check("graded.sum_norms", "norm inequalities for sums of m terms", bad, 0.0,
                                 "20 tuples; residual counts violations"));
      }
      if (model->band_sign() == 0) {
        const char* why = "U is not a single-band shift";
        out.push_back(skipped_check("graded.property_star", "||b|| >= ||N_0(b)||", why));
        out.push_back(skipped_check("graded.sandwich", "||N_0(bb*)|| <= ||b||^2 <= (2n+1)||N_0(bb*)||", why));
        out.push_back(skipped_check("graded.gauge_average", "N_0 is the gauge average", why));
        return out;
      }
      {
        const auto r = check_property_star(model, 100, tol_, seed_);
        auto c = make_check("graded.property_star", "||b|| >= ||N_0(b)||", std::max(0.0, -r.worst_margin), tol_,
                            "100 samples");
        c.pass = r.holds();
        out.push_back(c);
      }
      {
        int bad = 0;
        double gauge = 0.0;
        for (int t = 0; t < 100; ++t) {
          const auto b = random_graded_element(model, rng_, rng_.integer(1, std::max(1, std::min(2, width))));
          if (!sandwich_check(b, tol_).holds()) ++bad;
          if (t < 10) {
            const ComplexMatrix r = realize(b);
            gauge = std::max(gauge, operator_norm(gauge_average_N0(r, b.bandwidth(), *model) - extract_N(b, 0)) /
                                        (1 + operator_norm(r)));
          }
        }
        out.push_back(make_check("graded.sandwich", "||N_0(bb*)|| <= ||b||^2 <= (2n+1)||N_0(bb*)||", bad, 0.0,
                                 "100 samples; residual counts violations"));
        out.push_back(make_check("graded.gauge_average", "N_0 is the gauge average", gauge, tol_, "10 samples"));
      }
      return out;
    });
  }

  std::vector<Check> norm_formula() {
    return timed([&] {
      std::vector<Check> out;
      const auto model = graded_model_for(a_, spec_.name(), tol_);
      const char* rel_anchor = "||b|| = lim ||N_0((bb*)^{2k})||^{1/4k}";
      const char* lower_anchor = "s_k <= ||b||";
      const char* upper_anchor = "||b|| <= (4kn+1)^{1/4k} s_k";
      if (model->band_sign() == 0) {
        const char* why = "U is not a single-band shift";
        out.push_back(skipped_check("norm_formula.relative_error", rel_anchor, why));
        out.push_back(skipped_check("norm_formula.lower_bounds", lower_anchor, why));
        out.push_back(skipped_check("norm_formula.upper_bounds", upper_anchor, why));
        return out;
      }
      const ComplexMatrix b = a_ + a_.adjoint();
      NormEstimateOptions opts;
      opts.kmax = config_.kmax;
      const auto est = norm_estimate(regrade(b, model, tol_), opts);
      const double dense = operator_norm(b);
      double lower = 0.0;
      double upper = 0.0;
      for (std::size_t i = 0; i < est.ks.size(); ++i) {
        lower = std::max(lower, (est.estimates[i] - dense) / dense);
        upper = std::max(upper, (dense - est.upper_bounds[i]) / dense);
      }
      std::ostringstream os;
      os.precision(17);
      os << "a + a*, kmax " << config_.kmax << ", estimate " << est.final << ", dense " << dense;
      out.push_back(make_check("norm_formula.relative_error", rel_anchor, std::abs(est.final - dense) / dense, 0.05,
                               os.str()));
      out.push_back(make_check("norm_formula.lower_bounds", lower_anchor, std::max(0.0, lower), tol_));
      out.push_back(make_check("norm_formula.upper_bounds", upper_anchor, std::max(0.0, upper), tol_));
      return out;
    });
  }

  Word random_word(int max_len) {
    Word w;
    const int len = rng_.integer(0, max_len);
    for (int i = 0; i < len; ++i) w.letters.push_back(rng_.uniform() < 0.5 ? Letter::gen : Letter::gen_star);
    return w;
  }

  std::vector<Check> words() {
    return timed([&] {
      std::vector<Check> out;
      if (spec_.kind != ModelKind::q_oscillator) {
        const char* why = "no affine phi for this model";
        out.push_back(skipped_check("words.interior_agreement", "normal ordering preserves the evaluation", why));
        out.push_back(skipped_check("words.degree_identity", "m1 - l1 + m2 - l2 = m3 - l3", why));
        out.push_back(skipped_check("words.property_double_star", "||b_0|| <= ||b||", why));
        out.push_back(skipped_check("words.b0_commutative", "B_0 is commutative", why));
        return out;
      }
      const auto phi = phi_for(spec_, tol_);
      const int max_len = std::min<int>(6, static_cast<int>(n_) - 1);
      double gap = 0.0;
      int degree_bad = 0;
      std::vector<ComplexMatrix> zero_degree;
      for (int t = 0; t < 50; ++t) {
        const Word w1 = random_word(max_len);
        const Word w2 = random_word(max_len - static_cast<int>(w1.size()));
        const auto n1 = normal_order(w1, phi);
        const auto n2 = normal_order(w2, phi);
        const auto prod = nf_mul(n1, n2, phi);
        if (prod.m - prod.l != n1.m - n1.l + n2.m - n2.l || prod.degree() != deg(w1 * w2)) ++degree_bad;
        const Word w = w1 * w2;
        const ComplexMatrix ew = evaluate(w, a_);
        const ComplexMatrix p = interior_projection(n_, static_cast<int>(w.size()));
        gap = std::max(gap, operator_norm((ew - evaluate(prod, a_)) * p) / (1 + operator_norm(ew)));
        if (deg(w) == 0) zero_degree.push_back(ew);
      }
      out.push_back(make_check("words.interior_agreement", "normal ordering preserves the evaluation", gap, 1e-8,
                               "50 words on the interior subspace"));
      out.push_back(make_check("words.degree_identity", "m1 - l1 + m2 - l2 = m3 - l3", degree_bad, 0.0,
                               "50 products; residual counts violations"));
      {
        int bad = 0;
        for (int t = 0; t < 20; ++t) {
          WordSum b;
          const int terms = rng_.integer(1, 4);
          for (int i = 0; i < terms; ++i) b.push_back({rng_.complex_normal(), random_word(max_len)});
          const auto r = check_property_double_star(b, spec_, tol_);
          if (!r.holds || r.bucket_residual > 1e-8 * (1 + r.norm_b)) ++bad;
        }
        out.push_back(make_check("words.property_double_star", "||b_0|| <= ||b||", bad, 0.0,
                                 "20 sums; residual counts violations"));
      }
      {
        double worst = 0.0;
        for (const auto& x : zero_degree)
          for (const auto& y : zero_degree)
            worst = std::max(worst, operator_norm(x * y - y * x) / (1 + operator_norm(x) * operator_norm(y)));
        out.push_back(make_check("words.b0_commutative", "B_0 is commutative", worst, tol_));
      }
      return out;
    });
  }

  const ModelSpec& spec_;
  const SuiteConfig& config_;
  double tol_;
  Rng rng_;
  std::uint64_t seed_;
  ComplexMatrix a_;
  Eigen::Index n_;
};

}  // namespace

SuiteResult run_model_suite(const ModelSpec& spec, const std::string& suite, const SuiteConfig& config,
                            std::uint64_t seed) {
  SuiteResult r;
  r.suite = suite;
  try {
    Runner runner(spec, config, seed);
    r.checks = runner.run(suite);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    Check c;
    c.name = suite + ".error";
    c.anchor = "suite preconditions";
    c.pass = false;
    c.residual = 0.0;
    c.note = e.what();
    r.checks = {c};
  }
  std::stable_sort(r.checks.begin(), r.checks.end(), [](const Check& x, const Check& y) { return x.name < y.name; });
  return r;
}

Report run_suite(const SuiteConfig& config) {
  config.validate();
  Report report;
  report.tol = config.tol;
  report.kmax = config.kmax;
  report.seed = config.seed;
  std::vector<std::string> suites(config.suites);
  std::sort(suites.begin(), suites.end());
  suites.erase(std::unique(suites.begin(), suites.end()), suites.end());
  report.suites = suites;
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    ModelResult mr;
    mr.spec = config.models[i];
    mr.name = mr.spec.name();
    for (const auto& s : suites) mr.suites.push_back(run_model_suite(mr.spec, s, config, suite_seed(config.seed, i, s)));
    report.models.push_back(std::move(mr));
  }
  return report;
}

bool Report::pass() const {
  for (const auto& m : models)
    for (const auto& s : m.suites)
      if (!s.pass()) return false;
  return true;
}

Json Report::to_json() const {
  int total = 0;
  int passed = 0;
  int skipped = 0;
  Json ms = Json::array();
  for (std::size_t i = 0; i < models.size(); ++i) {
    Json ss = Json::array();
    for (const auto& s : models[i].suites) {
      for (const auto& c : s.checks) {
        ++total;
        passed += c.pass ? 1 : 0;
        skipped += c.skipped ? 1 : 0;
      }
      ss.push_back(Json{{"suite", s.suite}, {"pass", s.pass()}, {"checks", checks_to_json(s.checks)}});
    }
    ms.push_back(Json{{"index", i}, {"name", models[i].name}, {"spec", model_spec_to_json(models[i].spec)},
                      {"suites", ss}});
  }
  return Json{{"config", {{"tol", tol}, {"kmax", kmax}, {"seed", seed}, {"suites", suites}}},
              {"models", ms},
              {"summary",
               {{"checks", total}, {"passed", passed}, {"failed", total - passed}, {"skipped", skipped}, {"pass", pass()}}}};
}

std::string Report::summary() const {
  std::ostringstream os;
  int total = 0;
  int failed = 0;
  for (const auto& m : models)
    for (const auto& s : m.suites) {
      int ok = 0;
      for (const auto& c : s.checks) ok += c.pass ? 1 : 0;
      total += static_cast<int>(s.checks.size());
      failed += static_cast<int>(s.checks.size()) - ok;
      os << (s.pass() ? "PASS " : "FAIL ") << m.name << " " << s.suite << " " << ok << "/" << s.checks.size() << "\n";
      for (const auto& c : s.checks)
        if (!c.pass) os << "  failed " << c.name << " residual " << c.residual << (c.note.empty() ? "" : " ") << c.note << "\n";
    }
  os << (failed == 0 ? "all " : "") << total - failed << "/" << total << " checks passed\n";
  return os.str();
}

}  // namespace polarkit

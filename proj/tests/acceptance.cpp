// Acceptance criteria; one PASS/FAIL line each, exit status 1 if any fails.

#include "polarkit/graded.hpp"
#include "polarkit/isometry.hpp"
#include "polarkit/models.hpp"
#include "polarkit/relation.hpp"
#include "polarkit/report.hpp"
#include "polarkit/rng.hpp"
#include "polarkit/tower.hpp"
#include "polarkit/words.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace polarkit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream os;
  os.precision(3);
  os << secs << " s";
  if (limit_s > 0) {
    os << " (limit " << limit_s << " s)";
    if (secs >= limit_s) o.pass = false;
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " | " << o.detail << " | "
            << os.str() << std::endl;
}

// Largest singular value from the Hermitian eigenproblem of m* m.
double norm_oracle(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix raising(const std::vector<double>& w) {
  const auto n = static_cast<Eigen::Index>(w.size()) + 1;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i + 1, i) = w[static_cast<std::size_t>(i)];
  return a;
}

std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(rng.integer(0, i))]);
  return p;
}

ModelSpec q_model(double q, int n) {
  ModelSpec s;
  s.kind = ModelKind::q_oscillator;
  s.q = q;
  s.h = 1.0;
  s.dim = n;
  return s;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome polar_suite() {
  Rng rng(1001);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = rng.integer(2, 16);
    ComplexMatrix a = rng.gaussian_matrix(n);
    if (t % 2) {
      const Eigen::Index r = rng.integer(0, static_cast<int>(n) - 1);
      a = a.leftCols(r) * rng.gaussian_matrix(n).topRows(r);
    }
    const auto p = polar_decompose(a);
    const double scale = 1 + norm_oracle(a);
    const double res = norm_oracle(a - p.U * p.absA);
    worst = std::max(worst, res / scale);
    const auto rep = partial_isometry_report(p.U);
    if (res > 1e-9 * scale || !rep.consistent || !rep.all()) ++bad;
  }
  return {bad == 0, "200 matrices, worst ||a - U|a|||/(1+||a||) " + fmt(worst) + ", violations " + std::to_string(bad)};
}

Outcome equivalences() {
  Rng rng(1002);
  int bad = 0;
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index n = rng.integer(1, 8);
    ComplexMatrix v;
    bool expect = true;
    switch (t % 4) {
      case 0: v = rng.partial_isometry(n, rng.integer(0, static_cast<int>(n))); break;
      case 1: v = rng.unitary(n); break;
      case 2: {
        // Powers of a truncated shift are partial isometries; conjugate by a unitary.
        const ComplexMatrix u = rng.unitary(n);
        v = u * raising(std::vector<double>(static_cast<std::size_t>(n - 1), 1.0)) * u.adjoint();
        break;
      }
      default:
        v = rng.gaussian_matrix(n);
        expect = false;
    }
    const auto r = partial_isometry_report(v);
    if (!r.consistent || (expect ? !r.all() : !r.none())) ++bad;
    const auto pw = power_isometry_check(v, static_cast<int>(n) + 1);
    if (!pw.equivalent || pw.powers_partial_isometries != pw.decreasing_projections) ++bad;
  }
  return {bad == 0, "500 inputs, violations " + std::to_string(bad)};
}

Outcome relation_gate() {
  int bad = 0;
  int tested = 0;
  for (const auto& s : zoo()) {
    const auto c = verify_I1(build(s));
    ++tested;
    if (!c.forms_agree) ++bad;
    const bool expect = s.kind != ModelKind::jordan_block;
    if (c.holds != expect) ++bad;
  }
  Rng rng(1003);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = rng.integer(1, 7);
    ComplexMatrix a;
    if (t % 2) {
      a = rng.gaussian_matrix(n);
    } else {
      std::vector<double> w;
      for (Eigen::Index i = 0; i + 1 < n; ++i) w.push_back(rng.uniform(0.1, 3.0));
      a = raising(w);
    }
    ++tested;
    if (!verify_I1(a).forms_agree) ++bad;
  }
  return {bad == 0, std::to_string(tested) + " inputs, violations " + std::to_string(bad)};
}

Outcome tower_suite() {
  const ComplexMatrix a = raising({1.0, std::sqrt(2.0), std::sqrt(3.0)});
  const auto p = polar_decompose(a);
  const EndoPair pair(p.U);
  const auto a0 = generate({diagonal(std::vector<double>{1, 1, 0, 0})}, true, 4);
  const auto t = build_tower(a0, pair);
  auto checks = t.checks;
  const auto th = verify_tower_theorems(t, pair);
  checks.insert(checks.end(), th.begin(), th.end());
  double worst = 0.0;
  bool ok = t.inf_a.dim() == 4;
  bool saw_equality = false;
  bool saw_intertwining = false;
  std::string failed;
  for (const auto& c : checks) {
    if (!c.skipped) worst = std::max(worst, c.residual);
    if (!c.pass || (!c.skipped && c.residual > 1e-9)) {
      ok = false;
      failed += " " + c.name;
    }
    saw_equality = saw_equality || (c.name == "tower.double_closure_equality" && !c.skipped);
    saw_intertwining = saw_intertwining || (c.name == "tower.intertwining" && !c.skipped);
  }
  ok = ok && saw_equality && saw_intertwining;
  return {ok, "dim _inf A " + std::to_string(t.inf_a.dim()) + ", " + std::to_string(checks.size()) +
                  " checks, worst residual " + fmt(worst) + (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome ten_properties() {
  int bad = 0;
  double worst = 0.0;
  for (double q : {1.0, 0.5})
    for (int n : {4, 8, 16}) {
      for (const auto& c : theorem22_report(build(q_model(q, n)))) {
        worst = std::max(worst, c.residual);
        if (!c.pass || c.residual > 1e-9) ++bad;
      }
    }
  return {bad == 0, "6 models, worst residual " + fmt(worst) + ", failures " + std::to_string(bad)};
}

Outcome graded_ring() {
  Rng rng(1006);
  std::vector<ModelPtr> models;
  for (int n = 2; n <= 16; ++n) {
    std::vector<double> w;
    for (int i = 0; i + 1 < n; ++i) w.push_back(0.5 + i + rng.uniform(0, 0.5));
    models.push_back(graded_model_for(raising(w), "shift" + std::to_string(n)));
  }
  for (const auto& s : zoo())
    if (s.kind == ModelKind::normal) models.push_back(graded_model_for(build(s), s.name()));
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto& m = models[static_cast<std::size_t>(rng.integer(0, static_cast<int>(models.size()) - 1))];
    const int cap = std::min<int>(3, static_cast<int>(m->ambient_dim()) - 1);
    const auto g1 = random_graded_element(m, rng, rng.integer(0, cap));
    const auto g2 = random_graded_element(m, rng, rng.integer(0, cap));
    const ComplexMatrix r1 = realize(g1);
    const ComplexMatrix r2 = realize(g2);
    const double scale = 1 + norm_oracle(r1) * norm_oracle(r2);
    const double res = norm_oracle(realize(graded_mul(g1, g2)) - r1 * r2);
    worst = std::max(worst, res / scale);
    if (res > 1e-9 * scale) ++bad;
  }
  return {bad == 0, "200 pairs, worst relative residual " + fmt(worst) + ", violations " + std::to_string(bad)};
}

Outcome property_star() {
  int bad = 0;
  int models = 0;
  for (const auto& s : zoo()) {
    const ComplexMatrix a = build(s);
    if (!verify_I1(a).holds) continue;
    const auto m = graded_model_for(a, s.name());
    if (m->band_sign() == 0) continue;
    ++models;
    bad += check_property_star(m, 100, kDefaultTol, 1007).violations;
    Rng rng(1007 + static_cast<std::uint64_t>(models));
    const int cap = std::min<int>(3, static_cast<int>(m->ambient_dim()) - 1);
    for (int t = 0; t < 100; ++t) {
      const auto b = random_graded_element(m, rng, rng.integer(1, cap));
      const ComplexMatrix r = realize(b);
      const ComplexMatrix bb = r * r.adjoint();
      // Degree zero is the diagonal for a shift grading with diagonal A.
      const ComplexMatrix n0 = bb.diagonal().asDiagonal();
      const double lhs = norm_oracle(n0);
      const double mid = std::pow(norm_oracle(r), 2);
      const double n = b.bandwidth();
      if (lhs > mid * (1 + 1e-9) || mid > (2 * n + 1) * lhs * (1 + 1e-9)) ++bad;
      const auto lib = sandwich_check(b);
      if (!lib.holds() || std::abs(lib.n0 - lhs) > 1e-9 * (1 + lhs)) ++bad;
    }
  }
  return {bad == 0 && models > 0,
          std::to_string(models) + " shift-graded models, 200 samples each, violations " + std::to_string(bad)};
}

Outcome norm_formula() {
  const ComplexMatrix u = raising({1.0, 1.0, 1.0});
  const auto m = GradedModel::make("unit_shift4", u, diagonal_algebra(4));
  const ComplexMatrix p1 = u * u.adjoint();
  const auto g = GradedElement::from_beta(m, {{1, p1}, {-1, p1}});
  const double exact = 2 * std::cos(std::acos(-1.0) / 5);
  const double dense = norm_oracle(realize(g));
  NormEstimateOptions opts;
  opts.kmax = 64;
  const auto est = norm_estimate(g, opts);
  const double rel = std::abs(est.final - exact) / exact;
  bool ok = rel <= 0.05 && std::abs(dense - exact) <= 1e-12 && !est.ks.empty() && est.ks.back() == 64;
  for (std::size_t i = 0; i < est.ks.size(); ++i) {
    const double k = est.ks[i];
    const double envelope = std::pow(4 * k * 1 + 1, 1 / (4 * k));
    ok = ok && est.estimates[i] <= dense * (1 + 1e-12) && dense <= envelope * est.estimates[i] * (1 + 1e-12);
  }
  return {ok, "estimate " + fmt(est.final) + " vs 2cos(pi/5) = " + fmt(exact) + ", relative error " + fmt(rel) +
                  ", " + std::to_string(est.ks.size()) + " k values bracketed"};
}

Outcome sum_norms() {
  Rng rng(1009);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = rng.integer(1, 10);
    const int m = rng.integer(1, 5);
    std::vector<ComplexMatrix> ds;
    for (int i = 0; i < m; ++i) ds.push_back(rng.gaussian_matrix(n) * rng.uniform(0.1, 2.0));
    ComplexMatrix sum = ComplexMatrix::Zero(n, n), dds = sum, dsd = sum, absd = sum, absds = sum;
    for (const auto& d : ds) {
      sum += d;
      dds += d * d.adjoint();
      dsd += d.adjoint() * d;
      absd += sqrt_psd(d.adjoint() * d);
      absds += sqrt_psd(d * d.adjoint());
    }
    const double s2 = std::pow(norm_oracle(sum), 2);
    const double eps = 1e-9 * (1 + s2 + norm_oracle(dds) * m);
    const bool oracle = s2 <= m * norm_oracle(dds) + eps && s2 <= m * norm_oracle(dsd) + eps &&
                        norm_oracle(dsd) / m <= std::pow(norm_oracle(absd), 2) + eps &&
                        norm_oracle(dds) / m <= std::pow(norm_oracle(absds), 2) + eps;
    if (!oracle || !sum_norm_inequalities(ds).all()) ++bad;
  }
  return {bad == 0, "200 tuples, violations " + std::to_string(bad)};
}

Outcome word_engine() {
  const auto spec = q_model(0.5, 32);
  const ComplexMatrix a = build(spec);
  const auto phi = PhiMap::affine(0.5, 1.0);
  Rng rng(1010);
  auto random_word = [&](int max_len) {
    Word w;
    const int len = rng.integer(0, max_len);
    for (int i = 0; i < len; ++i) w.letters.push_back(rng.uniform() < 0.5 ? Letter::gen : Letter::gen_star);
    return w;
  };
  double worst = 0.0;
  int degree_bad = 0;
  int calls = 0;
  for (int t = 0; t < 200; ++t) {
    const Word w = random_word(6);
    const auto nf = normal_order(w, phi);
    if (nf.degree() != deg(w)) ++degree_bad;
    const ComplexMatrix p = interior_projection(32, static_cast<int>(w.size()));
    worst = std::max(worst, norm_oracle((evaluate(w, a) - evaluate(nf, a)) * p));
    const Word v = random_word(6);
    const auto nv = normal_order(v, phi);
    const auto prod = nf_mul(nf, nv, phi);
    ++calls;
    if (prod.m - prod.l != (nf.m - nf.l) + (nv.m - nv.l)) ++degree_bad;
    const auto exact = nf_mul(normal_order(w, Rational(1, 2), Rational(1)), normal_order(v, Rational(1, 2), Rational(1)),
                              Rational(1, 2), Rational(1));
    ++calls;
    if (exact.m - exact.l != deg(w) + deg(v)) ++degree_bad;
  }
  return {worst <= 1e-8 && degree_bad == 0, "200 words, worst interior gap " + fmt(worst) + ", " +
                                                std::to_string(calls) + " nf_mul calls, degree violations " +
                                                std::to_string(degree_bad)};
}

Outcome transport() {
  Rng rng(1011);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = rng.integer(3, 8);
    std::vector<double> w;
    for (int i = 0; i + 1 < n; ++i) w.push_back(0.5 + i + rng.uniform(0, 0.5));
    const auto m1 = graded_model_for(raising(w), "model");
    const auto perm = random_permutation(rng, n);
    const ComplexMatrix p = permutation_matrix(perm);
    std::vector<ComplexMatrix> moved;
    for (const auto& b : m1->A().basis()) moved.push_back(p * b * p.adjoint());
    const auto m2 = GradedModel::make("permuted", p * m1->U() * p.adjoint(), generate(moved, true, n));
    const auto g = random_graded_element(m1, rng, rng.integer(1, 2));
    NormEstimateOptions opts;
    opts.kmax = 16;
    const auto r = transport_compare(g, m1, m2, perm, opts);
    const double rel = std::abs(r.estimate1 - r.estimate2) / r.estimate1;
    worst = std::max(worst, rel);
    if (rel > 1e-6 || !r.agree()) ++bad;
  }
  return {bad == 0, "20 elements, worst relative gap " + fmt(worst) + ", violations " + std::to_string(bad)};
}

Outcome determinism() {
  SuiteConfig c;
  c.models = zoo();
  c.suites = suite_names();
  c.seed = 12345;
  const std::string first = run_suite(c).to_json().dump(2);
  const std::string second = run_suite(c).to_json().dump(2);
  return {first == second && !first.empty(), std::to_string(first.size()) + " bytes, " +
                                                 (first == second ? "identical" : "different")};
}

}  // namespace

int main() {
  criterion(1, "polar decomposition suite", 10, polar_suite);
  criterion(2, "partial isometry equivalences", 0, equivalences);
  criterion(3, "relation gate", 0, relation_gate);
  criterion(4, "tower suite on the dim-4 shift", 5, tower_suite);
  criterion(5, "ten-property structure theorem on q-oscillators", 0, ten_properties);
  criterion(6, "graded ring consistency", 0, graded_ring);
  criterion(7, "property (*) and sandwich inequality", 0, property_star);
  criterion(8, "norm formula for U + U* on the dim-4 shift", 30, norm_formula);
  criterion(9, "sum norm inequalities", 0, sum_norms);
  criterion(10, "word engine normal ordering", 0, word_engine);
  criterion(11, "transport under permutation conjugation", 0, transport);
  criterion(12, "run_suite determinism", 0, determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

#include <doctest.h>

#include "polarkit/models.hpp"
#include "polarkit/relation.hpp"
#include "polarkit/rng.hpp"
#include "support.hpp"

#include <cmath>

using namespace polarkit;
using testsupport::diag;
using testsupport::max_abs;
using testsupport::shift;
using testsupport::unit_shift;

namespace {

void require_all_pass(const std::vector<Check>& checks, double tol) {
  for (const auto& c : checks) {
    INFO(c.name << " residual " << c.residual << " " << c.note);
    CHECK(c.pass);
    if (!c.skipped) CHECK(c.residual <= tol);
  }
}

ModelSpec q_spec(double q, int n) {
  ModelSpec s;
  s.kind = ModelKind::q_oscillator;
  s.q = q;
  s.h = 1.0;
  s.dim = n;
  return s;
}

}  // namespace

TEST_CASE("verify_I1 examples") {
  auto c = verify_I1(diagonal(std::vector<Complex>{1.0, Complex(0, 2), -1.0}));
  CHECK(c.holds);
  CHECK(c.forms_agree);
  // aa* = a*a: gamma is the identity on the spectrum {1, 4}.
  for (const auto& [x, y] : c.gamma_table) CHECK(std::abs(x - y) < 1e-12);

  c = verify_I1(shift({1, std::sqrt(2.0), std::sqrt(3.0)}));
  CHECK(c.holds);
  CHECK(c.forms_agree);
  REQUIRE(c.gamma_table.size() == 4);
  // a*a = diag(1,2,3,0), aa* = diag(0,1,2,3): gamma(0)=3, gamma(1)=0, gamma(2)=1, gamma(3)=2.
  const double expect[4][2] = {{0, 3}, {1, 0}, {2, 1}, {3, 2}};
  for (int i = 0; i < 4; ++i) {
    CHECK(c.gamma_table[i].first == doctest::Approx(expect[i][0]));
    CHECK(c.gamma_table[i].second == doctest::Approx(expect[i][1]));
  }

  c = verify_I1(unit_shift(3));
  CHECK_FALSE(c.holds);
  CHECK_FALSE(c.holds_polar_form);
  CHECK(c.offending_eigenvalue == doctest::Approx(1.0));
  CHECK(c.membership_residual > 0.1);
}

TEST_CASE("verify_I1 forms agree on random inputs") {
  Rng rng(51);
  for (int t = 0; t < 60; ++t) {
    const Eigen::Index n = rng.integer(1, 6);
    ComplexMatrix a;
    switch (t % 3) {
      case 0: a = rng.gaussian_matrix(n); break;
      case 1: {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& x : w) x = rng.uniform(0.2, 3.0);
        a = shift(w);
        break;
      }
      default: {
        const ComplexMatrix u = rng.unitary(n);
        std::vector<Complex> d;
        for (Eigen::Index i = 0; i < n; ++i) d.push_back(rng.complex_normal());
        a = u * diagonal(d) * u.adjoint();
      }
    }
    const auto c = verify_I1(a);
    CHECK(c.forms_agree);
    if (t % 3 != 0) CHECK(c.holds);
  }
}

TEST_CASE("theorem22_report") {
  require_all_pass(theorem22_report(shift({1, std::sqrt(2.0), std::sqrt(3.0)})), 1e-9);
  require_all_pass(theorem22_report(identity(3)), 1e-12);
  CHECK_THROWS_AS(theorem22_report(unit_shift(3)), RelationViolated);
  for (double q : {1.0, 0.5})
    for (int n : {4, 8, 16}) {
      const auto checks = theorem22_report(build(q_spec(q, n)));
      CHECK(checks.size() == 12);
      require_all_pass(checks, 1e-9);
    }
}

TEST_CASE("delta squares on C*(|a|)") {
  for (const auto& spec : zoo()) {
    const ComplexMatrix a = build(spec);
    if (!verify_I1(a).holds) continue;
    const auto p = polar_decompose(a);
    const ComplexMatrix& u = p.U;
    for (const auto& b : generate({p.absA}, false, a.rows()).basis()) {
      const ComplexMatrix db = u * b * u.adjoint();
      CHECK(operator_norm(u * b * b * u.adjoint() - db * db) <= 1e-9);
    }
  }
}

TEST_CASE("coefficient_algebra examples") {
  auto t = coefficient_algebra(shift({1, std::sqrt(2.0), std::sqrt(3.0)}));
  CHECK(t.inf_a_inf.dim() == 4);
  CHECK(mutual_membership_residual(t.inf_a_inf, diagonal_algebra(4)) <= 1e-9);
  require_all_pass(t.checks, 1e-9);

  t = coefficient_algebra(diag({2, 3}));
  CHECK(mutual_membership_residual(t.inf_a_inf, t.a0) <= 1e-9);
  CHECK(t.forward_index == 0);
  CHECK(t.backward_index == 0);
  require_all_pass(t.checks, 1e-9);

  ModelSpec s;
  s.kind = ModelKind::weighted_shift;
  s.weights = {1, 1, 2, 2, 3};
  CHECK_FALSE(verify_I1(build(s)).holds);
  CHECK_THROWS_AS(coefficient_algebra(build(s)), RelationViolated);

  for (int n : {4, 8}) {
    t = coefficient_algebra(build(q_spec(0.5, n)));
    require_all_pass(t.checks, 1e-9);
  }
}

TEST_CASE("build_calB examples") {
  auto b = build_calB(shift({1, std::sqrt(2.0), std::sqrt(3.0)}));
  CHECK(b.B.dim() == 16);
  CHECK(b.bandwidth == 3);
  CHECK(b.graded_basis.size() == 16);
  CHECK(b.span_residual <= 1e-9);
  CHECK(b.round_trip_residual <= 1e-9);

  ComplexMatrix two(1, 1);
  two(0, 0) = 2.0;
  b = build_calB(two);
  CHECK(b.B.dim() == 1);

  b = build_calB(ComplexMatrix::Zero(3, 3));
  CHECK(b.B.dim() == 1);
  CHECK(b.bandwidth == 0);
  CHECK(b.span_residual <= 1e-9);
}

TEST_CASE("property (*) on calB models") {
  for (const auto& spec : zoo()) {
    const ComplexMatrix a = build(spec);
    if (!verify_I1(a).holds) continue;
    const auto model = graded_model_for(a, spec.name());
    const auto r = check_property_star(model, 30);
    // Holds for every shift-graded model; diagonal unitaries can violate it.
    if (model->band_sign() != 0) CHECK(r.holds());
  }
}

TEST_CASE("model zoo: build") {
  ModelSpec s;
  s.kind = ModelKind::normal;
  s.diag = {1.0, Complex(0, 1)};
  CHECK(max_abs(build(s) - diagonal(s.diag)) == 0.0);
  CHECK(verify_I1(build(s)).holds);

  const ComplexMatrix a = build(q_spec(1.0, 4));
  // Lowering convention with weights 1, sqrt 2, sqrt 3 on the superdiagonal.
  CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
  const ComplexMatrix heis = a * a.adjoint() - a.adjoint() * a;
  CHECK(max_abs(heis.topLeftCorner(3, 3) - identity(3)) < 1e-14);

  ModelSpec j;
  j.kind = ModelKind::jordan_block;
  j.dim = 3;
  CHECK_FALSE(verify_I1(build(j)).holds);

  ModelSpec bad;
  bad.kind = ModelKind::weighted_shift;
  bad.weights = {1, 0};
  CHECK_THROWS_AS(build(bad), InvalidSpec);
  CHECK_THROWS_AS(build(q_spec(0.0, 3)), InvalidSpec);
  CHECK_THROWS_AS(parse_kind("toeplitz"), InvalidSpec);
}

TEST_CASE("model zoo: distinct weights pass the relation") {
  Rng rng(52);
  for (int t = 0; t < 30; ++t) {
    ModelSpec s;
    s.kind = ModelKind::weighted_shift;
    const int n = rng.integer(2, 9);
    for (int i = 0; i < n - 1; ++i) s.weights.push_back(0.3 + i * 0.4 + rng.uniform(0, 0.3));
    CHECK(verify_I1(build(s)).holds);
  }
}

TEST_CASE("model zoo: q-oscillator polar part") {
  for (double q : {1.0, 0.5})
    for (int n : {4, 8, 16}) {
      const ComplexMatrix a = build(q_spec(q, n));
      const ComplexMatrix u = polar_decompose(a).U;
      CHECK(max_abs(u - unit_shift(n).adjoint()) <= 1e-10);
    }
}

TEST_CASE("hamiltonian examples") {
  auto h = hamiltonian(q_spec(1.0, 4), {});
  CHECK(max_abs(h.H - h.H.adjoint()) == 0.0);
  // Jacobi symmetry: S H S = -H with S alternating signs, so the spectrum is symmetric.
  for (std::size_t i = 0; i < h.spectrum.size(); ++i)
    CHECK(h.spectrum[i] == doctest::Approx(-h.spectrum[h.spectrum.size() - 1 - i]));

  ModelSpec j;
  j.kind = ModelKind::jordan_block;
  j.dim = 4;
  h = hamiltonian(j, {});
  const double pi = std::acos(-1.0);
  const std::vector<double> expect{-2 * std::cos(pi / 5), -2 * std::cos(2 * pi / 5), 2 * std::cos(2 * pi / 5),
                                   2 * std::cos(pi / 5)};
  for (std::size_t i = 0; i < 4; ++i) CHECK(h.spectrum[i] == doctest::Approx(expect[i]).epsilon(1e-12));

  ModelSpec zero;
  zero.kind = ModelKind::custom;
  zero.matrix = ComplexMatrix::Zero(3, 3);
  h = hamiltonian(zero, {2.5, 1.0});
  for (double e : h.spectrum) CHECK(e == doctest::Approx(2.5));

  h = hamiltonian(q_spec(0.5, 6), {0.0, 1.0, -0.25});
  CHECK(max_abs(h.H - h.H.adjoint()) == 0.0);
}

TEST_CASE("validate_model examples") {
  auto v = validate_model(q_spec(0.5, 16));
  CHECK(v.relation.holds);
  CHECK(v.interior_residual <= 1e-12);
  const auto lambda = q_eigenvalues(0.5, 1.0, 16);
  CHECK(v.boundary_defect == doctest::Approx(0.5 * lambda.back() + 1.0));

  v = validate_model(q_spec(1.0, 5));
  CHECK(v.boundary_defect == doctest::Approx(q_eigenvalues(1.0, 1.0, 5).back() + 1.0));

  ModelSpec s;
  s.kind = ModelKind::normal;
  s.diag = {1.0, 2.0};
  v = validate_model(s);
  CHECK(v.relation.holds);
  CHECK_FALSE(v.affine_applicable);
  CHECK(v.checks().back().skipped);

  ModelSpec c;
  c.kind = ModelKind::custom;
  c.matrix = unit_shift(3);
  v = validate_model(c);
  CHECK_FALSE(v.relation.holds);
  CHECK(v.relation.offending_eigenvalue == doctest::Approx(1.0));
}

#include <doctest.h>

#include "polarkit/graded.hpp"
#include "polarkit/rng.hpp"
#include "support.hpp"

#include <cmath>

using namespace polarkit;
using testsupport::diag;
using testsupport::max_abs;
using testsupport::shift;
using testsupport::unit_shift;

namespace {

ModelPtr shift_model(Eigen::Index n) { return GradedModel::make("shift" + std::to_string(n), unit_shift(n), diagonal_algebra(n)); }

// Band with offset k (row - col = k) of a dense matrix.
ComplexMatrix band(const ComplexMatrix& m, Eigen::Index k) {
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (j + k >= 0 && j + k < m.rows()) out(j + k, j) = m(j + k, j);
  return out;
}

GradedElement random_element(const ModelPtr& model, Rng& rng, int width) {
  std::map<int, ComplexMatrix> beta;
  for (int d = -width; d <= width; ++d) {
    ComplexMatrix c = ComplexMatrix::Zero(model->ambient_dim(), model->ambient_dim());
    for (const auto& b : model->A().basis()) c += rng.complex_normal() * b;
    beta.emplace(d, c);
  }
  return GradedElement::normalized(model, beta);
}

GradedElement u_plus_u_star(const ModelPtr& m) {
  const ComplexMatrix p = m->final_projection(1);
  return GradedElement::from_beta(m, {{1, p}, {-1, p}});
}

}  // namespace

TEST_CASE("realize examples") {
  const auto m = shift_model(4);
  const ComplexMatrix d = diag({1, -2, 3, 0.5});
  CHECK(max_abs(realize(GradedElement::from_beta(m, {{0, d}})) - d) == 0.0);
  const ComplexMatrix u = unit_shift(4);
  CHECK(max_abs(realize(GradedElement::from_beta(m, {{1, u * u.adjoint()}})) - u) < 1e-15);
  const auto g = u_plus_u_star(m);
  CHECK(max_abs(realize(g) - (u + u.adjoint())) < 1e-15);
  CHECK(std::abs(operator_norm(realize(g)) - 2 * std::cos(std::acos(-1.0) / 5)) < 1e-12);

  CHECK_THROWS_AS(GradedElement::from_beta(m, {{1, identity(4)}}), SupportViolation);
  CHECK_THROWS_AS(GradedElement::from_beta(m, {{0, u}}), InvalidSpec);
}

TEST_CASE("graded_mul examples") {
  const auto m = shift_model(4);
  const auto one = GradedElement::from_beta(m, {{0, identity(4)}});
  const auto sq = graded_mul(one, one);
  CHECK(sq.coefficients().size() == 1);
  CHECK(max_abs(extract_N(sq, 0) - identity(4)) == 0.0);

  const ComplexMatrix u = unit_shift(4);
  const ComplexMatrix p = u * u.adjoint();
  const auto up = GradedElement::from_beta(m, {{1, p}});
  const auto down = GradedElement::from_beta(m, {{-1, p}});
  const auto prod = graded_mul(up, down);
  CHECK(prod.coefficients().size() == 1);
  CHECK(max_abs(extract_N(prod, 0) - p) < 1e-15);

  const auto g = u_plus_u_star(m);
  const auto g2 = graded_mul(g, g);
  const ComplexMatrix dense = realize(g) * realize(g);
  // Band-extraction oracle: degree d of the raising shift sits at offset d.
  CHECK(max_abs(extract_N(g2, 0) - band(dense, 0)) < 1e-15);
  CHECK(max_abs(extract_N(g2, 0) - diag({1, 2, 2, 1})) < 1e-15);
  CHECK(max_abs(extract_N(g2, 2) * matrix_power(u, 2) - band(dense, 2)) < 1e-15);
  CHECK(max_abs(matrix_power(u, 2).adjoint() * extract_N(g2, -2) - band(dense, -2)) < 1e-15);
  CHECK(max_abs(extract_N(g2, 1)) < 1e-15);
  CHECK(max_abs(extract_N(g2, 5)) == 0.0);

  const auto other = shift_model(4);
  auto renamed = GradedModel::make("other", unit_shift(4), diagonal_algebra(4));
  CHECK_THROWS_AS(graded_mul(g, GradedElement::from_beta(renamed, {{0, identity(4)}})), ModelMismatch);
  CHECK_NOTHROW(graded_mul(g, GradedElement::from_beta(other, {{0, identity(4)}})));
}

TEST_CASE("graded ring homomorphism on random pairs") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = rng.integer(2, 16);
    std::vector<double> w(static_cast<std::size_t>(n - 1));
    for (auto& x : w) x = rng.uniform(0.5, 2.0);
    ComplexMatrix u = polar_decompose(shift(w)).U;
    if (t % 4 == 1) u = u.adjoint().eval();
    if (t % 4 == 2) {
      std::vector<Complex> phases;
      for (Eigen::Index i = 0; i < n; ++i) phases.push_back(std::polar(1.0, rng.uniform(0, 6.28)));
      u = diagonal(phases);
    }
    const auto model = GradedModel::make("m", u, diagonal_algebra(n));
    const int width = std::min<int>(3, static_cast<int>(n) - 1);
    const auto g1 = random_element(model, rng, rng.integer(0, width));
    const auto g2 = random_element(model, rng, rng.integer(0, width));
    const ComplexMatrix r1 = realize(g1);
    const ComplexMatrix r2 = realize(g2);
    const double err = operator_norm(realize(graded_mul(g1, g2)) - r1 * r2);
    CHECK(err <= 1e-9 * (1 + operator_norm(r1) * operator_norm(r2)));
    const auto adj = graded_adjoint(g1);
    CHECK(operator_norm(realize(adj) - r1.adjoint()) <= 1e-12 * (1 + operator_norm(r1)));
    for (const auto& kv : adj.coefficients()) CHECK(g1.coefficients().count(-kv.first) == 1);
  }
}

TEST_CASE("alpha orientation round trip") {
  Rng rng(42);
  const auto m = GradedModel::make("s", polar_decompose(shift({1, 2, 3, 4})).U, diagonal_algebra(5));
  for (int t = 0; t < 10; ++t) {
    const auto g = random_element(m, rng, 3);
    const auto back = GradedElement::from_alpha(m, g.alpha());
    CHECK(operator_norm(realize(back) - realize(g)) < 1e-12);
    // U^n alpha_n = beta_n U^n for n > 0.
    for (const auto& [d, a] : g.alpha())
      if (d > 0) CHECK(operator_norm(m->power(d) * a - extract_N(g, d) * m->power(d)) < 1e-12);
  }
}

TEST_CASE("extract_N examples") {
  const auto m = shift_model(4);
  const ComplexMatrix d = diag({1, 2, 3, 4});
  const auto g = GradedElement::from_beta(m, {{0, d}});
  CHECK(max_abs(extract_N(g, 0) - d) == 0.0);
  CHECK(max_abs(extract_N(g, 2)) == 0.0);
}

TEST_CASE("gauge_average_N0") {
  const auto m = shift_model(4);
  const ComplexMatrix d = diag({1, 2, 3, 4});
  CHECK(max_abs(gauge_average_N0(d, 1, *m) - d) < 1e-14);
  CHECK(max_abs(gauge_average_N0(unit_shift(4), 1, *m)) < 1e-14);
  const ComplexMatrix h = unit_shift(4) + unit_shift(4).adjoint();
  CHECK(max_abs(gauge_average_N0(h * h, 2, *m) - diag({1, 2, 2, 1})) < 1e-14);

  const auto normal = GradedModel::make("normal", diagonal(std::vector<Complex>{1.0, Complex(0, 1)}), diagonal_algebra(2));
  CHECK_THROWS_AS(gauge_average_N0(identity(2), 1, *normal), ModelNotGraded);
  CHECK_THROWS_AS(regrade(identity(2), normal), ModelNotGraded);

  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = rng.integer(2, 8);
    const auto model = shift_model(n);
    const ComplexMatrix x = rng.gaussian_matrix(n);
    const ComplexMatrix avg = gauge_average_N0(x, static_cast<int>(n) - 1, *model);
    CHECK(operator_norm(avg) <= operator_norm(x) + 1e-12);
    CHECK(operator_norm(avg - extract_N(regrade(x, model), 0)) <= 1e-9);
  }
}

TEST_CASE("property (*)") {
  const auto m = shift_model(4);
  Rng rng(44);
  for (int t = 0; t < 5; ++t) {
    ComplexMatrix c = ComplexMatrix::Zero(4, 4);
    for (const auto& b : m->A().basis()) c += rng.complex_normal() * b;
    const auto g = GradedElement::from_beta(m, {{0, c}});
    CHECK(std::abs(operator_norm(realize(g)) - operator_norm(c)) < 1e-12);
  }
  const auto g = u_plus_u_star(m);
  CHECK(operator_norm(realize(g)) >= operator_norm(extract_N(g, 1)));

  const auto r = check_property_star(shift_model(8), 100);
  CHECK(r.holds());
  CHECK(r.worst_margin >= -1e-9);
  CHECK(r.worst_max_margin >= -1e-9);
}

TEST_CASE("property (*) fails for a diagonal unitary") {
  // U = diag(1, i, -1): 1 - U^2 vanishes on e_0 and e_2 and the degree 0 part
  // is supported there, so b = e - e U^2 with e = diag(1,0,1) is zero.
  const auto m = GradedModel::make("rot", diagonal(std::vector<Complex>{1.0, Complex(0, 1), -1.0}), diagonal_algebra(3));
  const ComplexMatrix e = diag({1, 0, 1});
  const auto g = GradedElement::from_beta(m, {{0, e}, {2, -e}});
  CHECK(operator_norm(realize(g)) < 1e-15);
  CHECK(operator_norm(extract_N(g, 0)) == doctest::Approx(1.0));
  CHECK_FALSE(check_property_star(m, 50).holds());
}

TEST_CASE("sandwich inequality") {
  Rng rng(45);
  for (Eigen::Index n : {3, 5, 8}) {
    const auto m = shift_model(n);
    for (int t = 0; t < 20; ++t) {
      const int width = rng.integer(1, 2);
      const auto b = random_element(m, rng, width);
      const double norm2 = std::pow(operator_norm(realize(b)), 2);
      const double n0 = operator_norm(extract_N(graded_mul(b, graded_adjoint(b)), 0));
      CHECK(n0 <= norm2 * (1 + 1e-9));
      CHECK(norm2 <= (2 * b.bandwidth() + 1) * n0 * (1 + 1e-9));
    }
  }
}

TEST_CASE("sum_norm_inequalities") {
  Rng rng(46);
  const ComplexMatrix d = rng.gaussian_matrix(4);
  auto r = sum_norm_inequalities({d});
  CHECK(r.all());
  CHECK(std::abs(r.margins[0]) < 1e-9 * (1 + operator_norm(d * d.adjoint())));
  CHECK(std::abs(r.margins[1]) < 1e-9 * (1 + operator_norm(d * d.adjoint())));

  r = sum_norm_inequalities({diag({1, 0}), diag({0, 1})});
  CHECK(r.all());
  for (int t = 0; t < 20; ++t) {
    std::vector<ComplexMatrix> ds;
    for (int i = 0; i < 3; ++i) ds.push_back(rng.gaussian_matrix(5));
    CHECK(sum_norm_inequalities(ds).all());
  }
  CHECK_THROWS_AS(sum_norm_inequalities({}), DimensionMismatch);
}

TEST_CASE("norm_estimate examples") {
  const auto m = shift_model(4);
  const ComplexMatrix c = diag({0.5, -2, 1, 1.5});
  auto est = norm_estimate(GradedElement::from_beta(m, {{0, c}}), {8});
  for (double s : est.estimates) CHECK(s == doctest::Approx(2.0).epsilon(1e-12));

  const auto g = u_plus_u_star(m);
  est = norm_estimate(g);
  const double exact = 2 * std::cos(std::acos(-1.0) / 5);
  CHECK(std::abs(est.final - exact) / exact <= 0.05);
  CHECK(est.ks.back() == 64);
  for (std::size_t i = 0; i < est.ks.size(); ++i) {
    CHECK(est.estimates[i] <= exact * (1 + 1e-12));
    CHECK(est.upper_bounds[i] >= exact * (1 - 1e-12));
  }

  const auto m6 = shift_model(6);
  est = norm_estimate(GradedElement::from_beta(m6, {{1, m6->final_projection(1)}}), {16});
  for (double s : est.estimates) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  est = norm_estimate(g, {12});
  CHECK(est.ks.back() == 12);
  CHECK(est.ks == std::vector<int>{1, 2, 4, 8, 12});

  CHECK_THROWS_AS(norm_estimate(GradedElement::from_beta(m, {})), ZeroElement);
  CHECK_THROWS_AS(norm_estimate(g, {64, 100}), BandwidthOverflow);
}

TEST_CASE("norm_estimate brackets the dense norm") {
  Rng rng(47);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = rng.integer(3, 10);
    const auto m = shift_model(n);
    const auto g = random_element(m, rng, rng.integer(1, 2));
    const double exact = operator_norm(realize(g));
    const double floor = std::sqrt(operator_norm(extract_N(graded_mul(g, graded_adjoint(g)), 0)));
    const auto est = norm_estimate(g, {32});
    for (std::size_t i = 0; i < est.ks.size(); ++i) {
      CHECK(est.estimates[i] <= exact * (1 + 1e-9));
      CHECK(est.estimates[i] >= floor * (1 - 1e-9));
      CHECK(est.upper_bounds[i] >= exact * (1 - 1e-9));
    }
  }
}

TEST_CASE("transport_compare") {
  const auto m = shift_model(4);
  const auto g = u_plus_u_star(m);
  auto r = transport_compare(g, m, m, {0, 1, 2, 3});
  CHECK(r.norm1 == r.norm2);
  CHECK(r.agree());

  const std::vector<int> rev{3, 2, 1, 0};
  const ComplexMatrix p = permutation_matrix(rev);
  const auto m2 = GradedModel::make("reversed", p * m->U() * p.adjoint(), diagonal_algebra(4));
  r = transport_compare(g, m, m2, rev);
  CHECK(r.agree());
  CHECK(std::abs(r.norm1 - r.norm2) < 1e-12);

  const auto d = GradedElement::from_beta(m, {{0, diag({1, 2, 3, 4})}});
  CHECK(transport_compare(d, m, m2, rev).agree());
  CHECK_THROWS_AS(transport_compare(g, m, m, rev), ModelMismatch);
}

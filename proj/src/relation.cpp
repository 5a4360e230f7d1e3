#include "polarkit/relation.hpp"

#include "polarkit/isometry.hpp"

#include <algorithm>
#include <sstream>

namespace polarkit {

namespace {

double max_residual(const MatrixAlgebra& alg, const std::vector<ComplexMatrix>& xs) {
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, alg.residual(x));
  return worst;
}

void require_relation(const ComplexMatrix& a, double tol, const char* where) {
  const auto cert = verify_I1(a, tol);
  if (!cert.holds) {
    std::ostringstream os;
    os << where << ": aa* is not a function of a*a (residual " << cert.membership_residual
       << ", eigenvalue " << cert.offending_eigenvalue << ")";
    throw RelationViolated(os.str());
  }
}

}  // namespace

RelationCertificate verify_I1(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw DimensionMismatch("verify_I1: matrix is not square");
  const auto n = a.rows();
  const ComplexMatrix ata = a.adjoint() * a;
  const ComplexMatrix aat = a * a.adjoint();
  const auto polar = polar_decompose(a, tol);

  RelationCertificate cert;
  const auto match = spectral_function_match(aat, ata, tol);
  cert.holds = match.holds;
  cert.membership_residual = generate({ata}, true, n).residual(aat);
  if (match.holds) {
    for (const auto& [lambda, value] : match.table) cert.gamma_table.emplace_back(lambda, value.real());
  } else if (match.offending_group >= 0) {
    cert.offending_eigenvalue = match.table[static_cast<std::size_t>(match.offending_group)].first;
  }

  const ComplexMatrix conj = polar.U * polar.absA * polar.U.adjoint();
  const auto polar_match = spectral_function_match(conj, polar.absA, tol);
  cert.holds_polar_form = polar_match.holds;
  cert.polar_form_residual = generate({polar.absA}, true, n).residual(conj);
  cert.forms_agree = cert.holds == cert.holds_polar_form;
  return cert;
}

std::vector<Check> theorem22_report(const ComplexMatrix& a, double tol) {
  require_relation(a, tol, "theorem22_report");
  const auto n = a.rows();
  const int kmax = static_cast<int>(n);
  const auto polar = polar_decompose(a, tol);
  const ComplexMatrix& u = polar.U;
  const ComplexMatrix ua = u.adjoint();
  const EndoPair p(u, tol);

  std::vector<ComplexMatrix> pw{identity(n)};
  for (int k = 1; k <= kmax; ++k) pw.push_back(pw.back() * u);
  auto fin = [&](int k) -> ComplexMatrix { return pw[k] * pw[k].adjoint(); };
  auto init = [&](int k) -> ComplexMatrix { return pw[k].adjoint() * pw[k]; };

  const auto a0 = generate({polar.absA}, true, n);
  const auto abs_alg = generate({polar.absA}, false, n);
  const auto abs_basis = abs_alg.basis();
  const auto bicomm = bicommutant(a0, tol);
  std::vector<Check> out;

  out.push_back(make_check("structure.initial_in_bicommutant", "initial projection lies in the bicommutant of |a|",
                           bicomm.residual(ua * u), tol));
  {
    double worst = 0.0;
    for (int k = 1; k <= kmax; ++k) worst = std::max(worst, bicomm.residual(fin(k)));
    out.push_back(make_check("structure.final_powers_in_bicommutant",
                             "final projections of powers lie in the bicommutant of |a|", worst, tol));
  }
  {
    double worst = 0.0;
    for (int l = 1; l <= kmax; ++l)
      for (int k = 1; k <= kmax; ++k) worst = std::max(worst, operator_norm(commutator(init(l), fin(k))));
    out.push_back(make_check("structure.projections_commute", "initial and final power projections commute", worst, tol));
  }
  {
    double worst = 0.0;
    for (int l = 1; l <= kmax; ++l)
      for (int k = 1; k <= l; ++k)
        worst = std::max(worst, operator_norm(ua * pw[k] * pw[l].adjoint() - pw[k - 1] * pw[l].adjoint()));
    out.push_back(make_check("structure.reduction_identity", "U* U^k U^{*l} = U^{k-1} U^{*l}", worst, tol));
  }
  {
    double worst = 0.0;
    for (int k = 1; k <= kmax; ++k) worst = std::max(worst, projection_defect(fin(k)));
    out.push_back(make_check("structure.final_projections_idempotent", "U^k U^{*k} is a projection", worst, tol));
  }
  {
    double worst = 0.0;
    for (int k = 1; k <= kmax; ++k)
      for (int l = 1; l <= k; ++l) {
        worst = std::max(worst, operator_norm(init(k) * init(l) - init(k)));
        worst = std::max(worst, operator_norm(init(l) * init(k) - init(k)));
        worst = std::max(worst, operator_norm(fin(k) * fin(l) - fin(k)));
        worst = std::max(worst, operator_norm(fin(l) * fin(k) - fin(k)));
      }
    out.push_back(make_check("structure.ordered_products", "power projections decrease", worst, tol));
  }
  {
    double into = 0.0;
    double mult = 0.0;
    double inter = 0.0;
    for (const auto& b : abs_basis) {
      const ComplexMatrix db = p.delta(b);
      into = std::max(into, a0.residual(db));
      inter = std::max(inter, operator_norm(u * b - db * u));
      inter = std::max(inter, operator_norm(ua * db - b * ua));
      for (const auto& c : abs_basis) mult = std::max(mult, operator_norm(p.delta(b * c) - db * p.delta(c)));
    }
    out.push_back(make_check("structure.delta_into_a0", "delta maps C*(|a|) into C*(1, |a|)", into, tol));
    out.push_back(make_check("structure.delta_morphism", "delta is multiplicative on C*(|a|)", mult, tol));
    out.push_back(make_check("structure.intertwining", "U b = delta(b) U and U* delta(b) = b U*", inter, tol));
  }
  {
    double worst = 0.0;
    std::vector<ComplexMatrix> gens{polar.absA};
    std::vector<ComplexMatrix> images = abs_basis;
    for (int k = 1; k <= kmax; ++k) {
      images = [&] {
        std::vector<ComplexMatrix> next;
        for (const auto& x : images) next.push_back(p.delta(x));
        return next;
      }();
      if (k >= 2) gens.push_back(fin(k - 1));
      const auto target = generate(gens, true, n);
      worst = std::max(worst, max_residual(target, images));
    }
    out.push_back(make_check("structure.delta_powers_range", "delta^k(C*(|a|)) lies in C*(1, |a|, P_1, ..., P_{k-1})",
                             worst, tol));
  }
  {
    double worst = 0.0;
    for (int k = 1; k <= kmax; ++k)
      for (const auto& b : abs_basis) {
        const ComplexMatrix img = pw[k] * b * pw[k].adjoint();
        worst = std::max(worst, operator_norm(fin(k) * img - img));
        worst = std::max(worst, operator_norm(img * fin(k) - img));
      }
    out.push_back(make_check("structure.range_absorbs_images", "P_k absorbs delta^k images", worst, tol));
  }
  {
    double worst = 0.0;
    const ComplexMatrix q = ua * u;
    for (const auto& b : abs_basis) {
      worst = std::max(worst, operator_norm(p.delta_star(p.delta(b)) - b));
      worst = std::max(worst, operator_norm(q * b - b));
      worst = std::max(worst, operator_norm(b * q - b));
    }
    out.push_back(make_check("structure.delta_star_delta", "delta_* delta is the identity on C*(|a|)", worst, tol));
  }
  return out;
}

TowerReport coefficient_algebra(const ComplexMatrix& a, double tol) {
  require_relation(a, tol, "coefficient_algebra");
  const auto n = a.rows();
  const auto polar = polar_decompose(a, tol);
  const EndoPair p(polar.U, tol);
  const auto a0 = generate({polar.absA}, true, n);
  TowerReport t = build_tower(a0, p, tol);
  const auto checks = verify_tower_theorems(t, p, tol);
  t.checks.insert(t.checks.end(), checks.begin(), checks.end());

  std::vector<ComplexMatrix> gens{polar.absA};
  ComplexMatrix pk = identity(n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    pk = polar.U * pk * polar.U.adjoint();
    gens.push_back(pk);
  }
  const auto expected = generate(gens, true, n);
  t.checks.push_back(make_check("coefficient.a_inf_generators", "A_inf is generated by 1, |a| and the final projections",
                                mutual_membership_residual(expected, t.a_inf), tol));
  const auto bicomm = bicommutant(a0, tol);
  t.checks.push_back(make_check("coefficient.a_inf_in_bicommutant", "A_inf lies in the bicommutant of |a|",
                                max_residual(bicomm, t.a_inf.basis()), tol));
  {
    double worst = 0.0;
    const ComplexMatrix q = polar.U.adjoint() * polar.U;
    for (const auto& x : t.a_inf.basis()) worst = std::max(worst, operator_norm(commutator(q, x)));
    const auto comm0 = commutant(a0, tol);
    worst = std::max(worst, max_residual(comm0, t.a_inf.basis()));
    t.checks.push_back(make_check("coefficient.a_inf_commutes", "A_inf and U*U lie in the commutant of A0", worst, tol));
  }
  return t;
}

ModelPtr graded_model_for(const ComplexMatrix& a, std::string id, double tol) {
  const auto n = a.rows();
  const auto polar = polar_decompose(a, tol);
  const EndoPair p(polar.U, tol);
  const auto t = build_tower(generate({polar.absA}, true, n), p, tol);
  return GradedModel::make(std::move(id), polar.U, t.inf_a_inf, tol);
}

CalB build_calB(const ComplexMatrix& a, double tol) {
  require_relation(a, tol, "build_calB");
  const auto n = a.rows();
  const auto polar = polar_decompose(a, tol);
  CalB out;
  out.B = generate({polar.absA, polar.U}, true, n);
  out.model = graded_model_for(a, "calB", tol);

  const auto basis = out.model->A().basis();
  std::vector<ComplexMatrix> realized;
  const int top = static_cast<int>(n);
  for (int d = -top; d <= top; ++d) {
    if (out.model->vanishes_at(std::abs(d))) continue;
    const ComplexMatrix proj = out.model->final_projection(std::abs(d));
    MatrixSubspace seen(n);
    for (const auto& alpha : basis) {
      const ComplexMatrix c = proj * alpha * proj;
      if (!seen.add_direction(c, kDropTol)) continue;
      auto g = GradedElement::from_beta(out.model, {{d, c}}, std::max(tol, 1e-9));
      realized.push_back(realize(g));
      out.bandwidth = std::max(out.bandwidth, std::abs(d));
      out.graded_basis.push_back(std::move(g));
    }
  }
  const auto span = MatrixSubspace::span(realized, n);
  out.span_residual = mutual_membership_residual(span, out.B.space());
  for (const auto& b : out.B.basis()) out.round_trip_residual = std::max(out.round_trip_residual, span.residual(b));
  return out;
}

}  // namespace polarkit

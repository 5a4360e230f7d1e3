#include "polarkit/isometry.hpp"

#include "polarkit/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace polarkit {

namespace {

// Isometric on the range of the projection-like part of u^*u, zero elsewhere.
// The split uses the eigenvalues of u^*u at 1/2; both defects are quadratic in
// u, matching the scale of the projection checks.
double isometry_defect(const ComplexMatrix& u) {
  const Eigen::Index n = u.cols();
  if (n == 0) return 0.0;
  const ComplexMatrix gram = u.adjoint() * u;
  const auto eig = hermitian_eig((gram + gram.adjoint()) / 2.0, 1.0);
  std::vector<Eigen::Index> initial;
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < n; ++i) (eig.eigenvalues(i) > 0.5 ? initial : kernel).push_back(i);

  double defect = 0.0;
  if (!initial.empty()) {
    ComplexMatrix q(n, static_cast<Eigen::Index>(initial.size()));
    for (std::size_t i = 0; i < initial.size(); ++i) q.col(static_cast<Eigen::Index>(i)) = eig.eigenvectors.col(initial[i]);
    const ComplexMatrix image = u * q;
    defect = std::max(defect, operator_norm(image.adjoint() * image - identity(q.cols())));
  }
  if (!kernel.empty()) {
    ComplexMatrix q(n, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t i = 0; i < kernel.size(); ++i) q.col(static_cast<Eigen::Index>(i)) = eig.eigenvectors.col(kernel[i]);
    const ComplexMatrix image = u * q;
    defect = std::max(defect, operator_norm(image.adjoint() * image));
  }
  return defect;
}

double partial_isometry_defect(const ComplexMatrix& u) {
  const ComplexMatrix ua = u.adjoint();
  return std::max(operator_norm(u * ua * u - u), operator_norm(ua * u * ua - ua));
}

}  // namespace

double projection_defect(const ComplexMatrix& p) {
  return std::max(operator_norm(p * p - p), operator_norm(p - p.adjoint()));
}

PartialIsometryReport partial_isometry_report(const ComplexMatrix& u, double tol) {
  PartialIsometryReport r;
  const ComplexMatrix ua = u.adjoint();
  r.residuals[0] = isometry_defect(u);
  r.residuals[1] = isometry_defect(ua);
  r.residuals[2] = projection_defect(ua * u);
  r.residuals[3] = projection_defect(u * ua);
  r.residuals[4] = partial_isometry_defect(u);
  for (std::size_t i = 0; i < 5; ++i) r.conditions[i] = r.residuals[i] <= tol;
  r.consistent = r.all() || r.none();
  return r;
}

PowerIsometryReport power_isometry_check(const ComplexMatrix& v, int kmax, double tol) {
  if (kmax < 1) throw InvalidSpec("power_isometry_check: kmax must be >= 1");
  PowerIsometryReport r;
  r.kmax = kmax;
  std::vector<ComplexMatrix> proj;
  ComplexMatrix power = identity(v.rows());
  for (int k = 1; k <= kmax; ++k) {
    power = power * v;
    r.powers_residual = std::max(r.powers_residual, partial_isometry_defect(power));
    proj.push_back(power.adjoint() * power);
  }
  for (std::size_t k = 0; k < proj.size(); ++k) {
    r.projections_residual = std::max(r.projections_residual, projection_defect(proj[k]));
    for (std::size_t l = 0; l < k; ++l) {
      r.projections_residual = std::max(r.projections_residual, operator_norm(proj[k] * proj[l] - proj[k]));
      r.projections_residual = std::max(r.projections_residual, operator_norm(proj[l] * proj[k] - proj[k]));
    }
  }
  r.powers_partial_isometries = r.powers_residual <= tol;
  r.decreasing_projections = r.projections_residual <= tol;
  r.equivalent = r.powers_partial_isometries == r.decreasing_projections;
  return r;
}

CommutingProjectionReport commuting_projection_properties(const ComplexMatrix& v, int kmax, double tol) {
  if (kmax < 1) throw InvalidSpec("commuting_projection_properties: kmax must be >= 1");
  const double pi_defect = partial_isometry_defect(v);
  if (pi_defect > tol) {
    std::ostringstream os;
    os << "commuting_projection_properties: V is not a partial isometry (defect " << pi_defect << ")";
    throw HypothesisViolated(os.str());
  }

  std::vector<ComplexMatrix> pow(static_cast<std::size_t>(kmax) + 1);
  pow[0] = identity(v.rows());
  for (int k = 1; k <= kmax; ++k) pow[k] = pow[k - 1] * v;
  auto adj = [&](int k) -> ComplexMatrix { return pow[k].adjoint(); };

  CommutingProjectionReport r;
  r.kmax = kmax;
  const ComplexMatrix initial = v.adjoint() * v;
  for (int k = 1; k <= kmax; ++k) {
    const double c = operator_norm(commutator(initial, pow[k] * adj(k)));
    r.hypothesis_residual = std::max(r.hypothesis_residual, c);
    if (c > tol) {
      std::ostringstream os;
      os << "commuting_projection_properties: [V*V, V^k V^*k] != 0 at k = " << k << " (norm " << c << ")";
      throw HypothesisViolated(os.str());
    }
  }

  for (int l = 1; l <= kmax; ++l)
    for (int k = 1; k <= kmax; ++k)
      r.commutant_residual =
          std::max(r.commutant_residual, operator_norm(commutator(adj(l) * pow[l], pow[k] * adj(k))));

  for (int l = 1; l <= kmax; ++l)
    for (int k = 1; k <= l; ++k)
      r.reduction_residual =
          std::max(r.reduction_residual, operator_norm(v.adjoint() * pow[k] * adj(l) - pow[k - 1] * adj(l)));

  for (int k = 1; k <= kmax; ++k) {
    const ComplexMatrix qk = pow[k] * adj(k);
    r.final_projections_residual = std::max(r.final_projections_residual, partial_isometry_defect(pow[k]));
    r.final_projections_residual = std::max(r.final_projections_residual, projection_defect(qk));
    for (int l = 1; l < k; ++l) {
      const ComplexMatrix ql = pow[l] * adj(l);
      r.final_projections_residual = std::max(r.final_projections_residual, operator_norm(qk * ql - qk));
      r.final_projections_residual = std::max(r.final_projections_residual, operator_norm(ql * qk - qk));
    }
  }
  r.commutant_membership = r.commutant_residual <= tol;
  r.reduction_identity = r.reduction_residual <= tol;
  r.final_projections_decreasing = r.final_projections_residual <= tol;
  return r;
}

MorphismReport morphism_check(const ComplexMatrix& v, const MatrixAlgebra& algebra, double tol) {
  if (v.rows() != algebra.ambient_dim()) throw DimensionMismatch("morphism_check: dims differ");
  const ComplexMatrix va = v.adjoint();
  const ComplexMatrix initial = va * v;
  const ComplexMatrix final_proj = v * va;
  const auto basis = algebra.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double c = operator_norm(commutator(initial, basis[i]));
    if (c > tol) {
      std::ostringstream os;
      os << "morphism_check: V*V does not commute with basis element " << i << " (norm " << c << ")";
      throw CommutantViolation(os.str());
    }
  }

  const double scale = std::max(1.0, operator_norm(v) * operator_norm(v));
  const double t = tol * scale * scale;
  auto delta = [&](const ComplexMatrix& x) -> ComplexMatrix { return v * x * va; };
  auto delta_star = [&](const ComplexMatrix& x) -> ComplexMatrix { return va * x * v; };

  MorphismReport r;
  double star_mult = 0.0;
  for (const auto& x : basis) {
    const ComplexMatrix dx = delta(x);
    r.intertwining_residual = std::max(r.intertwining_residual, operator_norm(v * x - dx * v));
    r.intertwining_residual = std::max(r.intertwining_residual, operator_norm(x * va - va * dx));
    for (const auto& y : basis) {
      r.multiplicative_residual = std::max(r.multiplicative_residual, operator_norm(delta(x * y) - dx * delta(y)));
      star_mult = std::max(star_mult, operator_norm(delta_star(x * y) - delta_star(x) * delta_star(y)));
    }
  }
  r.multiplicative = r.multiplicative_residual <= t;
  r.intertwining = r.intertwining_residual <= t;

  if (algebra.unital()) {
    bool final_commutes = true;
    for (const auto& x : basis) final_commutes = final_commutes && operator_norm(commutator(final_proj, x)) <= tol;
    r.part_two_applicable = final_commutes;
  }
  if (r.part_two_applicable) {
    r.part_two[0] = projection_defect(initial) <= t;
    r.part_two[1] = projection_defect(final_proj) <= t;
    r.part_two[2] = r.multiplicative;
    r.part_two[3] = star_mult <= t;
    const bool first = r.part_two[0];
    r.part_two_consistent = std::all_of(r.part_two.begin(), r.part_two.end(), [&](bool b) { return b == first; });
  }
  return r;
}

}  // namespace polarkit

#pragma once

#include "polarkit/algebra.hpp"
#include "polarkit/check.hpp"
#include "polarkit/graded.hpp"
#include "polarkit/tower.hpp"

#include <string>
#include <utility>
#include <vector>

namespace polarkit {

/// Outcome of testing aa* in C*(1, a*a).
struct RelationCertificate {
  bool holds = false;
  /// ||aa* - proj(aa*)|| onto C*(1, a*a).
  double membership_residual = 0.0;
  /// (eigenvalue of a*a, value of aa* on that eigenspace); filled when holds.
  std::vector<std::pair<double, double>> gamma_table;
  /// Same test in the form U|a|U* in C*(1, |a|).
  bool holds_polar_form = false;
  double polar_form_residual = 0.0;
  bool forms_agree = false;
  /// Eigenvalue of a*a whose eigenspace carries non-constant aa*, when it fails.
  double offending_eigenvalue = 0.0;
};

RelationCertificate verify_I1(const ComplexMatrix& a, double tol = kDefaultTol);

/// The ten structure properties of {1, |a|, U}. Throws RelationViolated when
/// verify_I1 fails. Powers run over k, l = 1..N.
std::vector<Check> theorem22_report(const ComplexMatrix& a, double tol = kDefaultTol);

/// A = _inf(A_inf) for A0 = C*(1, |a|) and the polar part U, with the tower
/// checks and the coefficient-algebra statements appended to the report's
/// checks. Throws RelationViolated or HypothesisViolated.
TowerReport coefficient_algebra(const ComplexMatrix& a, double tol = kDefaultTol);

/// Graded model (U, A) for the polar part of a, with A built by the tower
/// construction from C*(1, |a|). Needs only the tower hypotheses, not the
/// relation itself.
ModelPtr graded_model_for(const ComplexMatrix& a, std::string id, double tol = kDefaultTol);

struct CalB {
  MatrixAlgebra B;
  ModelPtr model;
  /// One element per (degree, basis element of A) that survives compression.
  std::vector<GradedElement> graded_basis;
  int bandwidth = 0;
  /// Mutual membership residual between span(realize(graded_basis)) and B.
  double span_residual = 0.0;
  /// Worst ||realize(regraded b) - b|| over the basis of B, where regrading
  /// projects b onto the graded span.
  double round_trip_residual = 0.0;
};

/// B = C*(1, |a|, U) and its graded spanning set. Throws RelationViolated.
CalB build_calB(const ComplexMatrix& a, double tol = kDefaultTol);

}  // namespace polarkit

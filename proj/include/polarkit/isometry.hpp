#pragma once

#include "polarkit/core.hpp"

#include <array>
#include <string>
#include <vector>

namespace polarkit {

class MatrixAlgebra;

/// The five equivalent characterizations of a partial isometry:
///   c1  U is isometric on the range of U*U and vanishes on its complement
///   c2  the same for U*
///   c3  U*U is a projection
///   c4  UU* is a projection
///   c5  UU*U = U and U*UU* = U*
/// The conditions are equivalent, so `consistent` is false only when the
/// tolerance straddles a numerical boundary.
struct PartialIsometryReport {
  std::array<bool, 5> conditions{};
  std::array<double, 5> residuals{};
  bool consistent = true;

  bool all() const { return conditions[0] && conditions[1] && conditions[2] && conditions[3] && conditions[4]; }
  bool none() const { return !(conditions[0] || conditions[1] || conditions[2] || conditions[3] || conditions[4]); }
};

PartialIsometryReport partial_isometry_report(const ComplexMatrix& u, double tol = kDefaultTol);

/// Equivalent conditions on the powers of V, checked up to kmax:
///   (ii)  every V^k is a partial isometry
///   (iii) P_k = V^{*k} V^k are projections with P_k P_l = P_l P_k = P_k, k >= l
struct PowerIsometryReport {
  int kmax = 0;
  bool powers_partial_isometries = false;  // (ii)
  bool decreasing_projections = false;     // (iii)
  bool equivalent = true;
  double powers_residual = 0.0;
  double projections_residual = 0.0;
};

PowerIsometryReport power_isometry_check(const ComplexMatrix& v, int kmax, double tol = kDefaultTol);

/// Consequences of [V*V, V^k V^{*k}] = 0 for a partial isometry V.
struct CommutingProjectionReport {
  int kmax = 0;
  double hypothesis_residual = 0.0;
  /// V^{*l}V^l commutes with every V^k V^{*k}.
  bool commutant_membership = false;
  double commutant_residual = 0.0;
  /// V* V^k V^{*l} = V^{k-1} V^{*l} for 1 <= k <= l.
  bool reduction_identity = false;
  double reduction_residual = 0.0;
  /// V^k partial isometries, V^k V^{*k} commuting and decreasing.
  bool final_projections_decreasing = false;
  double final_projections_residual = 0.0;

  bool all() const { return commutant_membership && reduction_identity && final_projections_decreasing; }
};

/// Throws HypothesisViolated naming the offending k when V is not a partial
/// isometry or V*V fails to commute with some V^k V^{*k}.
CommutingProjectionReport commuting_projection_properties(const ComplexMatrix& v, int kmax,
                                                          double tol = kDefaultTol);

/// delta_V on a subalgebra A whose commutant contains V*V.
struct MorphismReport {
  bool multiplicative = false;
  double multiplicative_residual = 0.0;
  bool intertwining = false;  // V a = delta(a) V and a V* = V* delta(a)
  double intertwining_residual = 0.0;

  /// Four-way equivalence, evaluated when A is unital and both V*V and VV*
  /// lie in A'. Entries: V*V projection, VV* projection, V(.)V* morphism,
  /// V*(.)V morphism.
  bool part_two_applicable = false;
  std::array<bool, 4> part_two{};
  bool part_two_consistent = true;

  bool morphism() const { return multiplicative && intertwining; }
};

/// Throws CommutantViolation naming the first basis element that fails to
/// commute with V*V.
MorphismReport morphism_check(const ComplexMatrix& v, const MatrixAlgebra& algebra, double tol = kDefaultTol);

/// max ||P^2 - P|| together with ||P - P*||.
double projection_defect(const ComplexMatrix& p);

}  // namespace polarkit

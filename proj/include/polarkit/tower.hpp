#pragma once

#include "polarkit/algebra.hpp"
#include "polarkit/check.hpp"
#include "polarkit/core.hpp"

#include <vector>

namespace polarkit {

enum class Direction { forward, star };

/// A partial isometry U together with the maps delta(b) = U b U* and
/// delta_*(b) = U* b U.
class EndoPair {
 public:
  /// Throws HypothesisViolated unless U passes all five partial-isometry
  /// conditions at tol.
  explicit EndoPair(ComplexMatrix u, double tol = kDefaultTol);

  const ComplexMatrix& U() const { return u_; }
  Eigen::Index ambient_dim() const { return u_.rows(); }

  ComplexMatrix apply(const ComplexMatrix& m, Direction dir) const;
  ComplexMatrix apply(const ComplexMatrix& m, Direction dir, int times) const;
  ComplexMatrix delta(const ComplexMatrix& m) const { return apply(m, Direction::forward); }
  ComplexMatrix delta_star(const ComplexMatrix& m) const { return apply(m, Direction::star); }

  /// The pair built from U*, which exchanges the roles of delta and delta_*.
  EndoPair reversed() const;

 private:
  struct Unchecked {};
  EndoPair(ComplexMatrix u, Unchecked) : u_(std::move(u)) {}
  ComplexMatrix u_;
};

ComplexMatrix delta_apply(const EndoPair& p, const ComplexMatrix& m, Direction dir);

/// Hypotheses under which the two-sided commutative extension exists, checked
/// for k = 0..kmax, with per-condition residuals.
struct HypothesesReport {
  int kmax = 0;
  double star_units_projection = 0.0;      // delta_*^k(1) are projections
  double star_units_in_commutant = 0.0;     // delta_*^k(1) in A0'
  double images_in_commutant = 0.0;         // delta^k(A0) inside A0'
  double initial_commutes_with_images = 0.0;// delta_*(1) in [delta^k(A0)]'
  /// Stronger alternative hypothesis: delta(A0) inside A0 and delta_*(1) in A0'.
  double delta_preserves_a0 = 0.0;
  double tol = kDefaultTol;

  bool general_holds() const {
    return star_units_projection <= tol && star_units_in_commutant <= tol && images_in_commutant <= tol &&
           initial_commutes_with_images <= tol;
  }
  bool preserving_holds() const {
    return star_units_projection <= tol && delta_preserves_a0 <= tol && star_units_in_commutant <= tol;
  }
  std::vector<Check> checks() const;
};

/// Pre: A0 unital and commutative (throws HypothesisViolated otherwise).
HypothesesReport hypotheses_check(const MatrixAlgebra& a0, const EndoPair& p, int kmax, double tol = kDefaultTol);

/// The extension towers of A0 under delta and delta_*.
struct TowerReport {
  MatrixAlgebra a0;
  std::vector<MatrixAlgebra> forward;          // A_n = {A0, ..., delta^n(A0)}
  std::vector<MatrixAlgebra> backward;         // _nA = {A0, ..., delta_*^n(A0)}
  std::vector<MatrixAlgebra> forward_backward; // _n(A_inf)
  std::vector<MatrixAlgebra> backward_forward; // (_inf A)_n
  MatrixAlgebra a_inf;
  MatrixAlgebra inf_a;
  MatrixAlgebra inf_a_inf;        // _inf(A_inf)
  MatrixAlgebra inf_a_closure;    // (_inf A)_inf
  int forward_index = 0;
  int backward_index = 0;
  int forward_backward_index = 0;
  int backward_forward_index = 0;
  bool exchanged_roles = false;
  std::vector<Check> checks;
};

/// Builds every tower by repeated generation until the dimension holds still
/// for two consecutive steps. Throws HypothesisViolated when the hypotheses
/// fail for kmax = ambient dimension; DimensionOverflow if a tower never
/// settles. With exchange_roles the construction runs on U* instead of U.
TowerReport build_tower(const MatrixAlgebra& a0, const EndoPair& p, double tol = kDefaultTol,
                        bool exchange_roles = false);

/// Report-only verification of the structure statements for a built tower.
std::vector<Check> verify_tower_theorems(const TowerReport& t, const EndoPair& p, double tol = kDefaultTol);

}  // namespace polarkit

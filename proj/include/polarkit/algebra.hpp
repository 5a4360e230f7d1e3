#pragma once

#include "polarkit/core.hpp"

#include <optional>
#include <vector>

namespace polarkit {

inline constexpr double kDropTol = 1e-10;

/// Linear subspace of N x N matrices with a basis orthonormal under the trace
/// inner product <X, Y> = tr(X* Y). Matrices are handled as column-major
/// vectors of length N^2 internally.
class MatrixSubspace {
 public:
  explicit MatrixSubspace(Eigen::Index ambient_dim = 0);

  /// Span of the given matrices; directions whose Gram-Schmidt residual falls
  /// below drop_tol (relative to the candidate's Frobenius norm) are dropped.
  static MatrixSubspace span(const std::vector<ComplexMatrix>& mats, Eigen::Index ambient_dim,
                             double drop_tol = kDropTol);

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  Eigen::Index dim() const { return frame_.cols(); }
  ComplexMatrix basis(Eigen::Index i) const;
  std::vector<ComplexMatrix> basis() const;

  /// Trace-orthogonal projection.
  ComplexMatrix project(const ComplexMatrix& m) const;
  /// ||m - project(m)|| in operator norm.
  double residual(const ComplexMatrix& m) const;

  /// Adds the component of m orthogonal to the subspace when its Frobenius
  /// norm exceeds threshold; returns whether a direction was added.
  bool add_direction(const ComplexMatrix& m, double threshold);

  /// Orthonormal frame, one vectorized matrix per column.
  const ComplexMatrix& frame() const { return frame_; }

 private:
  Eigen::Index ambient_dim_;
  ComplexMatrix frame_;
};

/// A *-closed, product-closed subspace of matrices. In finite dimension such a
/// subspace is already norm closed, so it is a C*-algebra.
class MatrixAlgebra {
 public:
  MatrixAlgebra() = default;
  MatrixAlgebra(MatrixSubspace space, bool unital) : space_(std::move(space)), unital_(unital) {}

  Eigen::Index ambient_dim() const { return space_.ambient_dim(); }
  Eigen::Index dim() const { return space_.dim(); }
  bool unital() const { return unital_; }
  ComplexMatrix basis(Eigen::Index i) const { return space_.basis(i); }
  std::vector<ComplexMatrix> basis() const { return space_.basis(); }
  const MatrixSubspace& space() const { return space_; }

  ComplexMatrix project(const ComplexMatrix& m) const { return space_.project(m); }
  double residual(const ComplexMatrix& m) const { return space_.residual(m); }

  /// Largest membership residual of X*, XY over basis pairs.
  double closure_defect() const;

 private:
  MatrixSubspace space_;
  bool unital_ = false;
};

struct Membership {
  bool member = false;
  double residual = 0.0;
  explicit operator bool() const { return member; }
};

/// Smallest algebra containing the generators (and 1 when unital). The span is
/// closed under products and adjoints until the dimension stops growing.
/// Throws DimensionOverflow if the dimension passes maxdim (default N^2).
MatrixAlgebra generate(const std::vector<ComplexMatrix>& generators, bool unital, Eigen::Index ambient_dim,
                       double tol = kDropTol, Eigen::Index maxdim = -1);

/// Convenience overload; generators must be nonempty.
MatrixAlgebra generate(const std::vector<ComplexMatrix>& generators, bool unital = true);

/// residual = ||m - proj_A(m)||; member iff residual <= tol * (1 + ||m||).
Membership contains(const MatrixSubspace& space, const ComplexMatrix& m, double tol = kDefaultTol);
Membership contains(const MatrixAlgebra& algebra, const ComplexMatrix& m, double tol = kDefaultTol);

/// Max residual of mutual membership of the two bases.
double mutual_membership_residual(const MatrixSubspace& x, const MatrixSubspace& y);
inline double mutual_membership_residual(const MatrixAlgebra& x, const MatrixAlgebra& y) {
  return mutual_membership_residual(x.space(), y.space());
}
bool same_algebra(const MatrixAlgebra& x, const MatrixAlgebra& y, double tol = kDefaultTol);

/// {X : ||XG - GX|| <= tol for every basis element G}, computed as the null
/// space of the stacked commutator maps.
MatrixAlgebra commutant(const MatrixAlgebra& algebra, double tol = kDefaultTol);

/// commutant(commutant(A)).
MatrixAlgebra bicommutant(const MatrixAlgebra& algebra, double tol = kDefaultTol);

/// Largest commutator norm over basis pairs.
double commutativity_defect(const MatrixAlgebra& algebra);
bool is_commutative(const MatrixAlgebra& algebra, double tol = kDefaultTol);

/// Whether J A and A J land in J. Throws NotSubalgebra unless J is inside A.
bool is_ideal_in(const MatrixAlgebra& ideal, const MatrixAlgebra& algebra, double tol = kDefaultTol);

/// Outcome of matching B against the eigenspaces of a Hermitian A.
struct SpectralMatch {
  bool holds = false;
  double residual = 0.0;
  /// (eigenvalue of A, value of B on that eigenspace), eigenvalues ascending.
  std::vector<std::pair<double, Complex>> table;
  /// Eigenspace multiplicity per table row.
  std::vector<int> multiplicities;
  /// Index into table of the worst eigenspace when holds is false.
  int offending_group = -1;
};

/// B is a function of A iff B is block diagonal in A's eigenbasis and
/// constant on every eigenspace. Eigenvalues closer than tol * (1 + ||A||)
/// are grouped. Throws NotHermitian when A is not Hermitian within that scale.
SpectralMatch spectral_function_match(const ComplexMatrix& b, const ComplexMatrix& a, double tol = kDefaultTol);

inline bool is_function_of(const ComplexMatrix& b, const ComplexMatrix& a, double tol = kDefaultTol) {
  return spectral_function_match(b, a, tol).holds;
}

// Reference algebras.
MatrixAlgebra scalar_algebra(Eigen::Index n);
MatrixAlgebra diagonal_algebra(Eigen::Index n);
MatrixAlgebra full_algebra(Eigen::Index n);

}  // namespace polarkit

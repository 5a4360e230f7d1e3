#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

// Error hierarchy. Every failure the toolkit reports by throwing derives from
// polarkit::Error so callers (the CLI in particular) can map them uniformly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define POLARKIT_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

POLARKIT_DEFINE_ERROR(NotHermitian);
POLARKIT_DEFINE_ERROR(DimensionMismatch);
POLARKIT_DEFINE_ERROR(HypothesisViolated);
POLARKIT_DEFINE_ERROR(CommutantViolation);
POLARKIT_DEFINE_ERROR(DimensionOverflow);
POLARKIT_DEFINE_ERROR(NotSubalgebra);
POLARKIT_DEFINE_ERROR(SupportViolation);
POLARKIT_DEFINE_ERROR(ModelMismatch);
POLARKIT_DEFINE_ERROR(ModelNotGraded);
POLARKIT_DEFINE_ERROR(ZeroElement);
POLARKIT_DEFINE_ERROR(BandwidthOverflow);
POLARKIT_DEFINE_ERROR(RelationViolated);
POLARKIT_DEFINE_ERROR(UnsupportedPhi);
POLARKIT_DEFINE_ERROR(DimensionTooSmall);
POLARKIT_DEFINE_ERROR(InvalidSpec);
POLARKIT_DEFINE_ERROR(ParseError);
POLARKIT_DEFINE_ERROR(ConfigError);

#undef POLARKIT_DEFINE_ERROR

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// an orthonormal frame of eigenvectors (columns).
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

/// Result of a polar decomposition a = U |a|.
struct PolarDecomposition {
  ComplexMatrix U;
  ComplexMatrix absA;
  int rank = 0;
};

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// Throws NotHermitian when ||m - m*|| > tol.
SpectralDecomposition hermitian_eig(const ComplexMatrix& m, double tol = kDefaultTol);

/// Polar decomposition with the rank cutoff sigma <= tol * ||a||. U vanishes
/// exactly on the orthogonal complement of the retained right singular vectors.
PolarDecomposition polar_decompose(const ComplexMatrix& a, double tol = kDefaultTol);

// Small helpers shared across modules.

ComplexMatrix identity(Eigen::Index n);
ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix matrix_power(const ComplexMatrix& m, int k);
bool is_hermitian(const ComplexMatrix& m, double tol);

/// (m*m)^{1/2} computed from the singular value decomposition.
ComplexMatrix abs_of(const ComplexMatrix& m);

/// Orthogonal projection onto the span of the columns of m whose singular
/// values exceed tol * ||m||.
ComplexMatrix range_projection(const ComplexMatrix& m, double tol = kDefaultTol);

/// ||x - y|| in operator norm.
inline double distance(const ComplexMatrix& x, const ComplexMatrix& y) {
  return operator_norm(x - y);
}

/// Diagonal matrix from a list of complex values.
ComplexMatrix diagonal(const std::vector<Complex>& values);
ComplexMatrix diagonal(const std::vector<double>& values);

}  // namespace polarkit

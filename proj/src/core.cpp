#include "polarkit/core.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polarkit {

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermitian_eig: matrix is not square");
  const double defect = operator_norm(m - m.adjoint());
  if (defect > tol) {
    std::ostringstream os;
    os << "hermitian_eig: ||m - m*|| = " << defect << " exceeds tol " << tol;
    throw NotHermitian(os.str());
  }
  const ComplexMatrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PolarDecomposition polar_decompose(const ComplexMatrix& a, double tol) {
  const auto n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("polar_decompose: matrix is not square");
  PolarDecomposition out{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n), 0};
  if (n == 0) return out;

  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const ComplexMatrix& left = svd.matrixU();
  const ComplexMatrix& right = svd.matrixV();

  const double cutoff = tol * sigma(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      out.U += left.col(i) * right.col(i).adjoint();
      ++out.rank;
    }
  }
  out.absA = right * sigma.cast<Complex>().asDiagonal() * right.adjoint();
  out.absA = (out.absA + out.absA.adjoint()) / 2.0;
  return out;
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) { return x * y - y * x; }

ComplexMatrix matrix_power(const ComplexMatrix& m, int k) {
  ComplexMatrix result = identity(m.rows());
  ComplexMatrix base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && operator_norm(m - m.adjoint()) <= tol;
}

ComplexMatrix abs_of(const ComplexMatrix& m) {
  if (m.size() == 0) return m;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const ComplexMatrix& right = svd.matrixV();
  ComplexMatrix out = right * svd.singularValues().cast<Complex>().asDiagonal() * right.adjoint();
  return (out + out.adjoint()) / 2.0;
}

ComplexMatrix range_projection(const ComplexMatrix& m, double tol) {
  const auto n = m.rows();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  if (m.size() == 0) return p;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  const RealVector& sigma = svd.singularValues();
  const double cutoff = tol * sigma(0);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) p += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
  }
  return p;
}

ComplexMatrix diagonal(const std::vector<Complex>& values) {
  ComplexMatrix d = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) d(i, i) = values[i];
  return d;
}

ComplexMatrix diagonal(const std::vector<double>& values) {
  return diagonal(std::vector<Complex>(values.begin(), values.end()));
}

}  // namespace polarkit

#include "polarkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace polarkit {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

ComplexMatrix Rng::gaussian_matrix(Eigen::Index n) {
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = complex_normal();
  return m;
}

ComplexMatrix Rng::unitary(Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian_matrix(n));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  // Fix column phases against the diagonal of R so the distribution does not
  // depend on the QR sign convention.
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

ComplexMatrix Rng::partial_isometry(Eigen::Index n, Eigen::Index rank) {
  const ComplexMatrix w = unitary(n);
  const ComplexMatrix v = unitary(n);
  return w.leftCols(rank) * v.leftCols(rank).adjoint();
}

}  // namespace polarkit

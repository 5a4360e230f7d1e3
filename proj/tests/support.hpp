#pragma once

#include "polarkit/core.hpp"

#include <cmath>
#include <vector>

namespace testsupport {

using polarkit::Complex;
using polarkit::ComplexMatrix;

// Raising weighted shift e_n -> w_n e_{n+1}, built entry by entry.
inline ComplexMatrix shift(const std::vector<double>& w) {
  const auto n = static_cast<Eigen::Index>(w.size()) + 1;
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) s(i + 1, i) = w[static_cast<std::size_t>(i)];
  return s;
}

inline ComplexMatrix unit_shift(Eigen::Index n) { return shift(std::vector<double>(static_cast<std::size_t>(n - 1), 1.0)); }

inline ComplexMatrix diag(std::vector<double> d) { return polarkit::diagonal(d); }

// Largest entrywise modulus, independent of the library's norm routines.
inline double max_abs(const ComplexMatrix& m) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

inline ComplexMatrix rotation(double theta) {
  ComplexMatrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace testsupport

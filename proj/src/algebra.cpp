#include "polarkit/algebra.hpp"

#include "polarkit/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polarkit {

namespace {

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

void check_dims(Eigen::Index expected, const ComplexMatrix& m, const char* where) {
  if (m.rows() != expected || m.cols() != expected) {
    std::ostringstream os;
    os << where << ": expected " << expected << "x" << expected << " matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

MatrixSubspace::MatrixSubspace(Eigen::Index ambient_dim)
    : ambient_dim_(ambient_dim), frame_(ambient_dim * ambient_dim, 0) {}

MatrixSubspace MatrixSubspace::span(const std::vector<ComplexMatrix>& mats, Eigen::Index ambient_dim,
                                    double drop_tol) {
  MatrixSubspace s(ambient_dim);
  for (const auto& m : mats) {
    check_dims(ambient_dim, m, "MatrixSubspace::span");
    const double norm = m.norm();
    if (norm == 0.0) continue;
    s.add_direction(m / norm, drop_tol);
  }
  return s;
}

ComplexMatrix MatrixSubspace::basis(Eigen::Index i) const { return unvec(frame_.col(i), ambient_dim_); }

std::vector<ComplexMatrix> MatrixSubspace::basis() const {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (Eigen::Index i = 0; i < dim(); ++i) out.push_back(basis(i));
  return out;
}

ComplexMatrix MatrixSubspace::project(const ComplexMatrix& m) const {
  check_dims(ambient_dim_, m, "MatrixSubspace::project");
  if (dim() == 0) return ComplexMatrix::Zero(ambient_dim_, ambient_dim_);
  const ComplexVector v = vec(m);
  const ComplexVector p = frame_ * (frame_.adjoint() * v);
  return unvec(p, ambient_dim_);
}

double MatrixSubspace::residual(const ComplexMatrix& m) const { return operator_norm(m - project(m)); }

bool MatrixSubspace::add_direction(const ComplexMatrix& m, double threshold) {
  check_dims(ambient_dim_, m, "MatrixSubspace::add_direction");
  ComplexVector v = vec(m);
  // Two passes of classical Gram-Schmidt: re-orthogonalization keeps the frame
  // orthonormal to working precision.
  for (int pass = 0; pass < 2 && dim() > 0; ++pass) v -= frame_ * (frame_.adjoint() * v);
  const double norm = v.norm();
  if (!(norm > threshold)) return false;
  frame_.conservativeResize(Eigen::NoChange, dim() + 1);
  frame_.col(dim() - 1) = v / norm;
  return true;
}

double MatrixAlgebra::closure_defect() const {
  double worst = 0.0;
  const auto b = basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    worst = std::max(worst, residual(b[i].adjoint()));
    for (std::size_t j = 0; j < b.size(); ++j) worst = std::max(worst, residual(b[i] * b[j]));
  }
  return worst;
}

MatrixAlgebra generate(const std::vector<ComplexMatrix>& generators, bool unital, Eigen::Index ambient_dim,
                       double tol, Eigen::Index maxdim) {
  const Eigen::Index full = ambient_dim * ambient_dim;
  if (maxdim < 0) maxdim = full;
  MatrixSubspace space(ambient_dim);
  auto guard = [&] {
    if (space.dim() > maxdim) {
      std::ostringstream os;
      os << "generate: dimension " << space.dim() << " exceeds maxdim " << maxdim << " (tolerance too small?)";
      throw DimensionOverflow(os.str());
    }
  };

  if (unital && ambient_dim > 0) space.add_direction(identity(ambient_dim) / std::sqrt(double(ambient_dim)), tol);
  for (const auto& g : generators) {
    check_dims(ambient_dim, g, "generate");
    const double norm = g.norm();
    if (norm == 0.0) continue;
    space.add_direction(g / norm, tol);
    guard();
  }

  // Every basis element is processed once: its adjoint plus its products with
  // all earlier elements in both orders. Elements added later pair with it when
  // they are processed, so all products are eventually covered.
  Eigen::Index processed = 0;
  while (processed < space.dim() && space.dim() < full) {
    const ComplexMatrix x = space.basis(processed);
    space.add_direction(x.adjoint(), tol);
    for (Eigen::Index j = 0; j <= processed && space.dim() < full; ++j) {
      const ComplexMatrix y = space.basis(j);
      space.add_direction(x * y, tol);
      if (j != processed) space.add_direction(y * x, tol);
      guard();
    }
    ++processed;
  }
  return MatrixAlgebra(std::move(space), unital);
}

MatrixAlgebra generate(const std::vector<ComplexMatrix>& generators, bool unital) {
  if (generators.empty()) throw DimensionMismatch("generate: ambient dimension unknown without generators");
  return generate(generators, unital, generators.front().rows());
}

Membership contains(const MatrixSubspace& space, const ComplexMatrix& m, double tol) {
  const double r = space.residual(m);
  return {r <= tol * (1.0 + operator_norm(m)), r};
}

Membership contains(const MatrixAlgebra& algebra, const ComplexMatrix& m, double tol) {
  return contains(algebra.space(), m, tol);
}

double mutual_membership_residual(const MatrixSubspace& x, const MatrixSubspace& y) {
  if (x.ambient_dim() != y.ambient_dim()) throw DimensionMismatch("mutual_membership_residual: ambient dims differ");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.dim(); ++i) worst = std::max(worst, y.residual(x.basis(i)));
  for (Eigen::Index i = 0; i < y.dim(); ++i) worst = std::max(worst, x.residual(y.basis(i)));
  return worst;
}

bool same_algebra(const MatrixAlgebra& x, const MatrixAlgebra& y, double tol) {
  return x.dim() == y.dim() && mutual_membership_residual(x, y) <= tol;
}

MatrixAlgebra commutant(const MatrixAlgebra& algebra, double tol) {
  const Eigen::Index n = algebra.ambient_dim();
  const Eigen::Index n2 = n * n;
  ComplexMatrix candidates = ComplexMatrix::Identity(n2, n2);

  // Restricts the candidate frame to the null space of X -> XG - GX.
  auto restrict_to = [&](const ComplexMatrix& g) {
    if (candidates.cols() == 0) return;
    ComplexMatrix images(n2, candidates.cols());
    for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
      const ComplexMatrix x = unvec(candidates.col(c), n);
      images.col(c) = vec(x * g - g * x);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(images, Eigen::ComputeFullV);
    const RealVector& sigma = svd.singularValues();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < candidates.cols(); ++i) {
      const double s = i < sigma.size() ? sigma(i) : 0.0;
      if (s <= tol) keep.push_back(i);
    }
    ComplexMatrix next(n2, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      next.col(static_cast<Eigen::Index>(k)) = candidates * svd.matrixV().col(keep[k]);
    candidates = std::move(next);
  };

  const auto basis = algebra.basis();
  if (basis.size() > 1) {
    // A fixed generic combination first: its commutant contains A' and is
    // usually small, which makes the exact per-element passes cheap.
    Rng rng(0x5eed);
    ComplexMatrix mix = ComplexMatrix::Zero(n, n);
    for (const auto& g : basis) mix += rng.complex_normal() * g;
    restrict_to(mix);
  }
  for (const auto& g : basis) restrict_to(g);

  MatrixSubspace space(n);
  for (Eigen::Index c = 0; c < candidates.cols(); ++c) space.add_direction(unvec(candidates.col(c), n), kDropTol);
  return MatrixAlgebra(std::move(space), true);
}

MatrixAlgebra bicommutant(const MatrixAlgebra& algebra, double tol) { return commutant(commutant(algebra, tol), tol); }

double commutativity_defect(const MatrixAlgebra& algebra) {
  const auto b = algebra.basis();
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) worst = std::max(worst, operator_norm(commutator(b[i], b[j])));
  return worst;
}

bool is_commutative(const MatrixAlgebra& algebra, double tol) { return commutativity_defect(algebra) <= tol; }

bool is_ideal_in(const MatrixAlgebra& ideal, const MatrixAlgebra& algebra, double tol) {
  const auto jb = ideal.basis();
  for (std::size_t i = 0; i < jb.size(); ++i) {
    const auto m = contains(algebra, jb[i], tol);
    if (!m) {
      std::ostringstream os;
      os << "is_ideal_in: basis element " << i << " of J is not in A (residual " << m.residual << ")";
      throw NotSubalgebra(os.str());
    }
  }
  const auto ab = algebra.basis();
  for (const auto& j : jb) {
    for (const auto& x : ab) {
      if (!contains(ideal, j * x, tol) || !contains(ideal, x * j, tol)) return false;
    }
  }
  return true;
}

SpectralMatch spectral_function_match(const ComplexMatrix& b, const ComplexMatrix& a, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("spectral_function_match: dims differ");
  const double scale_a = 1.0 + operator_norm(a);
  const auto eig = hermitian_eig(a, tol * scale_a);
  const Eigen::Index n = a.rows();
  const ComplexMatrix rotated = eig.eigenvectors.adjoint() * b * eig.eigenvectors;

  // Group ascending eigenvalues separated by at most the grouping tolerance.
  std::vector<Eigen::Index> starts{0};
  for (Eigen::Index i = 1; i < n; ++i)
    if (eig.eigenvalues(i) - eig.eigenvalues(i - 1) > tol * scale_a) starts.push_back(i);
  starts.push_back(n);

  SpectralMatch out;
  ComplexMatrix off = rotated;
  double worst_group = -1.0;
  for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
    const Eigen::Index lo = starts[g];
    const Eigen::Index len = starts[g + 1] - lo;
    const ComplexMatrix block = rotated.block(lo, lo, len, len);
    const Complex value = block.trace() / double(len);
    const double variation = operator_norm(block - value * identity(len));
    double mean_eig = eig.eigenvalues.segment(lo, len).mean();
    out.table.emplace_back(mean_eig, value);
    out.multiplicities.push_back(static_cast<int>(len));
    off.block(lo, lo, len, len).setZero();
    if (variation > worst_group) {
      worst_group = variation;
      out.offending_group = static_cast<int>(g);
    }
  }
  const double off_block = n > 0 ? operator_norm(off) : 0.0;
  out.residual = std::max(off_block, std::max(worst_group, 0.0));
  out.holds = out.residual <= tol * (1.0 + operator_norm(b));
  if (out.holds) {
    out.offending_group = -1;
  } else if (off_block > worst_group) {
    // Off-block coupling: report the group carrying the largest coupling.
    double best = -1.0;
    for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
      const Eigen::Index lo = starts[g];
      const Eigen::Index len = starts[g + 1] - lo;
      const double c = off.middleRows(lo, len).norm();
      if (c > best) {
        best = c;
        out.offending_group = static_cast<int>(g);
      }
    }
  }
  return out;
}

MatrixAlgebra scalar_algebra(Eigen::Index n) { return generate({}, true, n); }

MatrixAlgebra diagonal_algebra(Eigen::Index n) {
  MatrixSubspace s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i, i) = 1.0;
    s.add_direction(e, kDropTol);
  }
  return MatrixAlgebra(std::move(s), true);
}

MatrixAlgebra full_algebra(Eigen::Index n) {
  MatrixSubspace s(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = 1.0;
      s.add_direction(e, kDropTol);
    }
  return MatrixAlgebra(std::move(s), true);
}

}  // namespace polarkit

#pragma once

#include "polarkit/core.hpp"

#include <cstdint>
#include <random>

namespace polarkit {

/// Reproducible random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The library's distributions are implementation-defined, so the
/// transforms are done here instead:
///   uniform()  = (engine() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller on two uniforms, cosine branch only
/// so a given seed yields the same stream on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi] inclusive.
  int integer(int lo, int hi);
  double normal();
  Complex complex_normal();

  /// Entries i.i.d. complex normal.
  ComplexMatrix gaussian_matrix(Eigen::Index n);
  /// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
  ComplexMatrix unitary(Eigen::Index n);
  /// Partial isometry of the given rank: W_r V_r^* with random unitaries.
  ComplexMatrix partial_isometry(Eigen::Index n, Eigen::Index rank);

 private:
  std::mt19937_64 engine_;
};

}  // namespace polarkit

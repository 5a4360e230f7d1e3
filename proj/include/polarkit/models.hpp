#pragma once

#include "polarkit/check.hpp"
#include "polarkit/core.hpp"
#include "polarkit/relation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polarkit {

enum class ModelKind { weighted_shift, q_oscillator, normal, jordan_block, custom };

std::string kind_name(ModelKind kind);
/// Throws InvalidSpec for an unknown name.
ModelKind parse_kind(const std::string& name);

/// Declarative operator model.
///   weighted_shift: a e_n = w_n e_{n+1}, weights w_0..w_{N-2} > 0
///   q_oscillator:   a e_{n+1} = sqrt(lambda_{n+1}) e_n with
///                   lambda_n = h (1 + q + ... + q^{n-1}), so that
///                   aa* = q a*a + h off the top basis vector
///   normal:         diag(d_0, ..., d_{N-1})
///   jordan_block:   unit-weight raising shift
///   custom:         the given matrix
struct ModelSpec {
  ModelKind kind = ModelKind::weighted_shift;
  int dim = 0;
  std::vector<double> weights;
  double q = 1.0;
  double h = 1.0;
  std::vector<Complex> diag;
  ComplexMatrix matrix;
  std::optional<std::string> id;

  /// The explicit id, or a name derived from kind and parameters.
  std::string name() const;
};

/// lambda_1..lambda_{N-1} for a q-oscillator spec.
std::vector<double> q_eigenvalues(double q, double h, int dim);

/// Throws InvalidSpec on inconsistent or degenerate specs.
ComplexMatrix build(const ModelSpec& spec);

struct Hamiltonian {
  ComplexMatrix H;
  std::vector<double> spectrum;
};

/// H = a + a* + D(a*a) with D given by ascending real coefficients; the result
/// is symmetrized so that H = H* exactly.
Hamiltonian hamiltonian(const ModelSpec& spec, const std::vector<double>& d);

struct ModelValidation {
  RelationCertificate relation;
  bool affine_applicable = false;
  /// ||aa* - q a*a - h|| with the top basis vector removed.
  double interior_residual = 0.0;
  /// |(aa* - q a*a - h)_{N-1,N-1}|.
  double boundary_defect = 0.0;
  double tol = kDefaultTol;
  std::vector<Check> checks() const;
};

ModelValidation validate_model(const ModelSpec& spec, double tol = kDefaultTol);

/// The fixed model list used by suites and acceptance tests.
std::vector<ModelSpec> zoo();

}  // namespace polarkit

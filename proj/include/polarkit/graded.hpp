#pragma once

#include "polarkit/algebra.hpp"
#include "polarkit/core.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace polarkit {

/// A partial isometry U with a commutative coefficient algebra A. Powers of U
/// are cached up to the ambient dimension.
class GradedModel {
 public:
  /// Throws HypothesisViolated unless U is a partial isometry and A is a unital
  /// commutative algebra on the same space.
  static std::shared_ptr<const GradedModel> make(std::string id, ComplexMatrix u, MatrixAlgebra a,
                                                 double tol = kDefaultTol);

  const std::string& id() const { return id_; }
  const ComplexMatrix& U() const { return u_; }
  const MatrixAlgebra& A() const { return a_; }
  Eigen::Index ambient_dim() const { return u_.rows(); }

  ComplexMatrix power(int k) const;
  /// P_k = U^k U^{*k}.
  ComplexMatrix final_projection(int k) const;
  /// U^k x U^{*k}.
  ComplexMatrix delta(const ComplexMatrix& x, int k) const;
  /// U^{*k} x U^k.
  ComplexMatrix delta_star(const ComplexMatrix& x, int k) const;
  /// True when U^k = 0; degrees of modulus >= k then carry nothing.
  bool vanishes_at(int k) const;

  /// +1 when U has a single nonzero band strictly below the diagonal, -1 when
  /// strictly above; 0 otherwise.
  int band_sign() const { return band_; }

 private:
  GradedModel() = default;
  std::string id_;
  ComplexMatrix u_;
  MatrixAlgebra a_;
  std::vector<ComplexMatrix> powers_;
  int nilpotency_ = -1;
  int band_ = 0;
};

using ModelPtr = std::shared_ptr<const GradedModel>;

/// sum_{n<0} U^{*|n|} beta_n + beta_0 + sum_{n>0} beta_n U^n with every beta in
/// A and beta_{+-k} = P_k beta_{+-k} P_k.
class GradedElement {
 public:
  /// Validates membership in A (throws InvalidSpec) and the support condition
  /// (throws SupportViolation), both at tol * (1 + ||beta||).
  static GradedElement from_beta(ModelPtr model, std::map<int, ComplexMatrix> beta, double tol = kDefaultTol);
  /// Coefficients in the alternate orientation, alpha_n written to the right of
  /// U^n for n > 0 and to the left of U^{*|n|} for n < 0.
  static GradedElement from_alpha(ModelPtr model, const std::map<int, ComplexMatrix>& alpha,
                                  double tol = kDefaultTol);
  /// Projects coefficients onto A and compresses them by P_k; no checks.
  static GradedElement normalized(ModelPtr model, std::map<int, ComplexMatrix> beta);

  const ModelPtr& model() const { return model_; }
  const std::map<int, ComplexMatrix>& coefficients() const { return beta_; }
  int bandwidth() const;
  bool is_zero() const { return beta_.empty(); }

  std::map<int, ComplexMatrix> alpha() const;

  GradedElement operator+(const GradedElement& other) const;
  GradedElement operator*(Complex s) const;

 private:
  GradedElement(ModelPtr model, std::map<int, ComplexMatrix> beta) : model_(std::move(model)), beta_(std::move(beta)) {}
  friend GradedElement graded_mul(const GradedElement&, const GradedElement&);
  friend GradedElement graded_adjoint(const GradedElement&);
  friend GradedElement pruned(const GradedElement&, double);
  ModelPtr model_;
  std::map<int, ComplexMatrix> beta_;
};

ComplexMatrix realize(const GradedElement& g);
/// Throws ModelMismatch when the models differ.
GradedElement graded_mul(const GradedElement& g1, const GradedElement& g2);
GradedElement graded_adjoint(const GradedElement& g);
/// beta_n, or zero.
ComplexMatrix extract_N(const GradedElement& g, int n);
/// Drops coefficients whose Frobenius norm is at most rel times the largest.
GradedElement pruned(const GradedElement& g, double rel);

/// Average of V_j m V_j* over V_j = diag(w^{j n}), w = exp(2 pi i / M),
/// M = 2 bandwidth + 2. Throws ModelNotGraded unless U is a single-band shift.
ComplexMatrix gauge_average_N0(const ComplexMatrix& m, int bandwidth, const GradedModel& model);

/// Dense matrix to graded form on a single-band shift model, reading degree d
/// off the band at offset d in U's direction. Throws ModelNotGraded for other
/// models and SupportViolation if m is not representable.
GradedElement regrade(const ComplexMatrix& m, const ModelPtr& model, double tol = kDefaultTol);

class Rng;

/// Coefficients beta_d, |d| <= width, drawn as complex-normal combinations of
/// the basis of A and compressed by P_|d|.
GradedElement random_graded_element(const ModelPtr& model, Rng& rng, int width);

struct SandwichReport {
  double n0 = 0.0;      // ||N_0(b b*)||
  double norm2 = 0.0;   // ||b||^2
  int bandwidth = 0;
  bool lower = false;   // n0 <= norm2
  bool upper = false;   // norm2 <= (2 n + 1) n0
  bool holds() const { return lower && upper; }
};

SandwichReport sandwich_check(const GradedElement& b, double tol = kDefaultTol);

struct PropertyStarReport {
  int samples = 0;
  int violations = 0;
  /// min over samples of ||b|| - ||beta_0||.
  double worst_margin = 0.0;
  /// min over samples of ||b|| - max_n ||beta_n||.
  double worst_max_margin = 0.0;
  bool holds() const { return violations == 0; }
};

/// Random elements of bandwidth <= min(2, N - 1) with coefficients drawn from A.
PropertyStarReport check_property_star(const ModelPtr& model, int samples, double tol = kDefaultTol,
                                       std::uint64_t seed = 0);

struct SumNormReport {
  /// Margins: m ||sum d d*|| - ||sum d||^2, m ||sum d* d|| - ||sum d||^2,
  /// ||sum |d|||^2 - ||sum d* d|| / m, ||sum |d*|||^2 - ||sum d d*|| / m.
  std::array<double, 4> margins{};
  std::array<bool, 4> holds{};
  bool all() const { return holds[0] && holds[1] && holds[2] && holds[3]; }
};

/// Throws DimensionMismatch for an empty list or unequal dims.
SumNormReport sum_norm_inequalities(const std::vector<ComplexMatrix>& ds, double tol = kDefaultTol);

struct NormEstimateOptions {
  int kmax = 64;
  int bandwidth_cap = 4096;
  double prune = 1e-17;
};

struct NormEstimate {
  std::vector<int> ks;
  /// s_k = scale * ||N_0((h h*)^{2k})||^{1/4k}, h = g / scale.
  std::vector<double> estimates;
  /// (4 k n + 1)^{1/4k} s_k.
  std::vector<double> upper_bounds;
  /// ||N_0((h h*)^{2k})|| for the scaled element.
  std::vector<double> raw;
  double scale = 0.0;
  double final = 0.0;
  int bandwidth = 0;
};

/// Throws ZeroElement for a zero element, BandwidthOverflow when
/// 4 kmax bandwidth exceeds the cap.
NormEstimate norm_estimate(const GradedElement& g, const NormEstimateOptions& opts = {});

/// Power-iteration estimate of ||m|| from a fixed start vector.
double power_iteration_norm(const ComplexMatrix& m, int iterations = 60);

struct TransportReport {
  double norm1 = 0.0;
  double norm2 = 0.0;
  double estimate1 = 0.0;
  double estimate2 = 0.0;
  bool dense_agree = false;
  bool estimates_agree = false;
  bool agree() const { return dense_agree && estimates_agree; }
};

/// perm maps basis index i to perm[i]. Throws ModelMismatch unless model2 is
/// model1 conjugated by that permutation and g lives on model1.
TransportReport transport_compare(const GradedElement& g, const ModelPtr& model1, const ModelPtr& model2,
                                  const std::vector<int>& perm, const NormEstimateOptions& opts = {},
                                  double tol = kDefaultTol);

ComplexMatrix permutation_matrix(const std::vector<int>& perm);

}  // namespace polarkit

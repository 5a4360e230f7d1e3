#pragma once

#include "polarkit/core.hpp"
#include "polarkit/graded.hpp"
#include "polarkit/models.hpp"
#include "polarkit/polynomial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace polarkit {

using Rational = boost::multiprecision::cpp_rational;

enum class Letter { gen, gen_star };

struct Word {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  /// Space separated "a" / "a*"; the empty word prints as "".
  std::string str() const;
  /// Throws ParseError naming the offending token.
  static Word parse(const std::string& text);

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
};

/// #a - #a*
int deg(const Word& w);
Word adjoint(const Word& w);

/// a^{*l} p(a*a) a^m
template <class T>
struct BasicNormalForm {
  int l = 0;
  int m = 0;
  Polynomial<T> p = Polynomial<T>::constant(T(1));

  int degree() const { return m - l; }
  friend bool operator==(const BasicNormalForm& a, const BasicNormalForm& b) {
    return a.l == b.l && a.m == b.m && a.p == b.p;
  }
};

using NormalForm = BasicNormalForm<Complex>;
using ExactNormalForm = BasicNormalForm<Rational>;

NormalForm to_double(const ExactNormalForm& nf);

/// phi(f)(a*a) = f(aa*). The affine kind has aa* = q a*a + h; the spectral kind
/// only records the eigenvalue correspondence and has no symbolic rewriting.
struct PhiMap {
  enum class Kind { affine, spectral };
  Kind kind = Kind::affine;
  double q = 1.0;
  double h = 1.0;
  /// (eigenvalue of a*a, value of aa* there), sorted by eigenvalue.
  std::vector<std::pair<double, double>> table;

  static PhiMap affine(double q, double h);
  /// Throws InvalidSpec when the table assigns two values to one eigenvalue.
  static PhiMap spectral(std::vector<std::pair<double, double>> table, double tol = kDefaultTol);
  /// Image of a scalar eigenvalue. Throws InvalidSpec if it is not tabulated.
  double gamma(double x, double tol = kDefaultTol) const;
};

/// Affine phi for q-oscillators, spectral phi from verify_I1 otherwise.
/// Throws RelationViolated when the model fails the relation.
PhiMap phi_for(const ModelSpec& spec, double tol = kDefaultTol);

/// Rewrites with a x = (qx + h) a, a a* = qx + h and a* a = x, then absorbs
/// a* p a = x phi^{-1}(p) while both l and m are positive (for q = 0 only
/// constant p is absorbed). Throws UnsupportedPhi for a spectral phi.
NormalForm normal_order(const Word& w, const PhiMap& phi);
NormalForm nf_mul(const NormalForm& n1, const NormalForm& n2, const PhiMap& phi);
ExactNormalForm normal_order(const Word& w, const Rational& q, const Rational& h);
ExactNormalForm nf_mul(const ExactNormalForm& n1, const ExactNormalForm& n2, const Rational& q, const Rational& h);

/// Throw DimensionTooSmall when dim < length + 1 (length l + m for normal forms).
ComplexMatrix evaluate(const Word& w, const ComplexMatrix& a);
ComplexMatrix evaluate(const NormalForm& nf, const ComplexMatrix& a);
ComplexMatrix evaluate(const Word& w, const ModelSpec& spec);
ComplexMatrix evaluate(const NormalForm& nf, const ModelSpec& spec);

/// Projection onto span(e_0, ..., e_{dim-1-length}); zero when length >= dim.
ComplexMatrix interior_projection(Eigen::Index dim, int length);

struct WordTerm {
  Complex coeff = 1.0;
  Word word;
};
using WordSum = std::vector<WordTerm>;

ComplexMatrix evaluate(const WordSum& b, const ComplexMatrix& a);
ComplexMatrix evaluate(const std::vector<NormalForm>& b, const ComplexMatrix& a);
int max_length(const WordSum& b);

/// Degree buckets of b; forms with equal (l, m) are merged and vanishing ones
/// dropped, so a degree appears only when its bucket is nonzero.
std::map<int, std::vector<NormalForm>> b_graded_decompose(const WordSum& b, const PhiMap& phi);

struct DoubleStarReport {
  double norm_b = 0.0;
  /// Norm of the degree-0 words of b.
  double norm_b0 = 0.0;
  bool holds = false;
  /// Interior distance between the normal-ordered degree-0 bucket and the
  /// degree-0 words; zero when phi is not affine.
  double bucket_residual = 0.0;
};

/// ||b_0|| <= ||b|| in the model, up to tol (1 + ||b||).
DoubleStarReport check_property_double_star(const WordSum& b, const ModelSpec& spec, double tol = kDefaultTol);

/// Norm estimate of the evaluated element in the graded model of the polar
/// part of a. Throws SupportViolation if the matrix is not in the graded span.
NormEstimate word_norm_estimate(const WordSum& b, const ModelSpec& spec, const NormEstimateOptions& opts = {},
                                double tol = kDefaultTol);

}  // namespace polarkit

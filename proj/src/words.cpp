#include "polarkit/words.hpp"

#include "polarkit/relation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polarkit {

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    out += letters[i] == Letter::gen ? "a" : "a*";
  }
  return out;
}

Word Word::parse(const std::string& text) {
  Word w;
  std::istringstream is(text);
  std::string tok;
  int index = 0;
  while (is >> tok) {
    if (tok == "a")
      w.letters.push_back(Letter::gen);
    else if (tok == "a*")
      w.letters.push_back(Letter::gen_star);
    else
      throw ParseError("word: token " + std::to_string(index) + " '" + tok + "' is neither 'a' nor 'a*'");
    ++index;
  }
  return w;
}

Word operator*(const Word& a, const Word& b) {
  Word out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

int deg(const Word& w) {
  int d = 0;
  for (auto l : w.letters) d += l == Letter::gen ? 1 : -1;
  return d;
}

Word adjoint(const Word& w) {
  Word out;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(*it == Letter::gen ? Letter::gen_star : Letter::gen);
  return out;
}

NormalForm to_double(const ExactNormalForm& nf) {
  std::vector<Complex> c;
  for (const auto& r : nf.p.coeffs()) c.emplace_back(static_cast<double>(r), 0.0);
  return {nf.l, nf.m, Polynomial<Complex>(std::move(c))};
}

PhiMap PhiMap::affine(double q, double h) {
  PhiMap p;
  p.kind = Kind::affine;
  p.q = q;
  p.h = h;
  return p;
}

PhiMap PhiMap::spectral(std::vector<std::pair<double, double>> table, double tol) {
  std::sort(table.begin(), table.end());
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table[i].first - table[i - 1].first <= tol && std::abs(table[i].second - table[i - 1].second) > tol)
      throw InvalidSpec("phi: eigenvalue " + std::to_string(table[i].first) + " has two images");
  PhiMap p;
  p.kind = Kind::spectral;
  p.table = std::move(table);
  return p;
}

double PhiMap::gamma(double x, double tol) const {
  if (kind == Kind::affine) return q * x + h;
  for (const auto& [lambda, v] : table)
    if (std::abs(lambda - x) <= tol) return v;
  throw InvalidSpec("phi: eigenvalue " + std::to_string(x) + " is not tabulated");
}

PhiMap phi_for(const ModelSpec& spec, double tol) {
  if (spec.kind == ModelKind::q_oscillator) return PhiMap::affine(spec.q, spec.h);
  const auto cert = verify_I1(build(spec), tol);
  if (!cert.holds) throw RelationViolated("phi_for: model " + spec.name() + " fails the relation");
  return PhiMap::spectral(cert.gamma_table, tol);
}

namespace {

template <class T>
class Rewriter {
 public:
  using Poly = Polynomial<T>;
  using NF = BasicNormalForm<T>;

  Rewriter(T q, T h) : q_(std::move(q)), h_(std::move(h)), shift_(Poly::linear(h_, q_)) {}

  Poly phi(const Poly& p, int times = 1) const {
    Poly out = p;
    for (int i = 0; i < times; ++i) out = out.compose(shift_);
    return out;
  }

  NF mul(const NF& n1, const NF& n2) const {
    NF out;
    // a^{m1} a^{*l2} = a^{m1-k} T^k(1) a^{*(l2-k)}, with T(r) = phi(r) (qx + h).
    const int k = std::min(n1.m, n2.l);
    Poly t = Poly::constant(T(1));
    for (int i = 0; i < k; ++i) t = phi(t) * shift_;
    if (n1.m >= n2.l) {
      const int j = n1.m - n2.l;
      out.l = n1.l;
      out.m = j + n2.m;
      out.p = n1.p * phi(t * n2.p, j);
    } else {
      const int j = n2.l - n1.m;
      out.l = n1.l + j;
      out.m = n2.m;
      out.p = phi(n1.p * t, j) * n2.p;
    }
    canonicalize(out);
    return out;
  }

  NF order(const Word& w) const {
    NF out;
    for (auto letter : w.letters) {
      NF f;
      if (letter == Letter::gen)
        f.m = 1;
      else
        f.l = 1;
      out = mul(out, f);
    }
    return out;
  }

 private:
  void canonicalize(NF& nf) const {
    const Poly x = Poly::linear(T(0), T(1));
    while (nf.l > 0 && nf.m > 0) {
      if (q_ != T(0)) {
        nf.p = x * nf.p.compose(Poly::linear(-h_ / q_, T(1) / q_));
      } else if (nf.p.degree() <= 0) {
        nf.p = x * nf.p;
      } else {
        break;
      }
      --nf.l;
      --nf.m;
    }
  }

  T q_;
  T h_;
  Poly shift_;
};

Rewriter<Complex> rewriter_for(const PhiMap& phi) {
  if (phi.kind != PhiMap::Kind::affine) throw UnsupportedPhi("symbolic rewriting needs an affine phi");
  return Rewriter<Complex>(Complex(phi.q), Complex(phi.h));
}

void require_dim(Eigen::Index dim, std::size_t length) {
  if (dim < static_cast<Eigen::Index>(length) + 1) {
    std::ostringstream os;
    os << "evaluate: dimension " << dim << " is below length + 1 = " << length + 1;
    throw DimensionTooSmall(os.str());
  }
}

}  // namespace

NormalForm normal_order(const Word& w, const PhiMap& phi) { return rewriter_for(phi).order(w); }

NormalForm nf_mul(const NormalForm& n1, const NormalForm& n2, const PhiMap& phi) {
  return rewriter_for(phi).mul(n1, n2);
}

ExactNormalForm normal_order(const Word& w, const Rational& q, const Rational& h) {
  return Rewriter<Rational>(q, h).order(w);
}

ExactNormalForm nf_mul(const ExactNormalForm& n1, const ExactNormalForm& n2, const Rational& q, const Rational& h) {
  return Rewriter<Rational>(q, h).mul(n1, n2);
}

ComplexMatrix evaluate(const Word& w, const ComplexMatrix& a) {
  require_dim(a.rows(), w.size());
  const ComplexMatrix as = a.adjoint();
  ComplexMatrix out = identity(a.rows());
  for (auto l : w.letters) out = out * (l == Letter::gen ? a : as);
  return out;
}

ComplexMatrix evaluate(const NormalForm& nf, const ComplexMatrix& a) {
  require_dim(a.rows(), static_cast<std::size_t>(nf.l + nf.m));
  const auto n = a.rows();
  const ComplexMatrix x = a.adjoint() * a;
  ComplexMatrix px = ComplexMatrix::Zero(n, n);
  const auto& c = nf.p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) px = px * x + *it * identity(n);
  return matrix_power(a.adjoint(), nf.l) * px * matrix_power(a, nf.m);
}

ComplexMatrix evaluate(const Word& w, const ModelSpec& spec) { return evaluate(w, build(spec)); }
ComplexMatrix evaluate(const NormalForm& nf, const ModelSpec& spec) { return evaluate(nf, build(spec)); }

ComplexMatrix interior_projection(Eigen::Index dim, int length) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i + length < dim; ++i) p(i, i) = 1.0;
  return p;
}

ComplexMatrix evaluate(const WordSum& b, const ComplexMatrix& a) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& t : b) out += t.coeff * evaluate(t.word, a);
  return out;
}

ComplexMatrix evaluate(const std::vector<NormalForm>& b, const ComplexMatrix& a) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& nf : b) out += evaluate(nf, a);
  return out;
}

int max_length(const WordSum& b) {
  std::size_t len = 0;
  for (const auto& t : b) len = std::max(len, t.word.size());
  return static_cast<int>(len);
}

std::map<int, std::vector<NormalForm>> b_graded_decompose(const WordSum& b, const PhiMap& phi) {
  const auto rw = rewriter_for(phi);
  std::map<std::pair<int, int>, Polynomial<Complex>> merged;
  for (const auto& t : b) {
    const auto nf = rw.order(t.word);
    merged[{nf.l, nf.m}] += t.coeff * nf.p;
  }
  std::map<int, std::vector<NormalForm>> out;
  for (const auto& [lm, p] : merged) {
    if (p.is_zero()) continue;
    out[lm.second - lm.first].push_back({lm.first, lm.second, p});
  }
  return out;
}

DoubleStarReport check_property_double_star(const WordSum& b, const ModelSpec& spec, double tol) {
  const ComplexMatrix a = build(spec);
  WordSum b0;
  for (const auto& t : b)
    if (deg(t.word) == 0) b0.push_back(t);
  DoubleStarReport r;
  r.norm_b = operator_norm(evaluate(b, a));
  const ComplexMatrix m0 = evaluate(b0, a);
  r.norm_b0 = operator_norm(m0);
  r.holds = r.norm_b0 <= r.norm_b + tol * (1.0 + r.norm_b);
  if (spec.kind == ModelKind::q_oscillator) {
    const auto buckets = b_graded_decompose(b, phi_for(spec, tol));
    const auto it = buckets.find(0);
    const ComplexMatrix sym = it == buckets.end() ? ComplexMatrix::Zero(a.rows(), a.cols()) : evaluate(it->second, a);
    r.bucket_residual = operator_norm((sym - m0) * interior_projection(a.rows(), max_length(b)));
  }
  return r;
}

NormEstimate word_norm_estimate(const WordSum& b, const ModelSpec& spec, const NormEstimateOptions& opts, double tol) {
  const ComplexMatrix a = build(spec);
  const auto model = graded_model_for(a, spec.name(), tol);
  return norm_estimate(regrade(evaluate(b, a), model, tol), opts);
}

}  // namespace polarkit

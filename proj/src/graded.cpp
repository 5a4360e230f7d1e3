#include "polarkit/graded.hpp"

#include "polarkit/isometry.hpp"
#include "polarkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace polarkit {

namespace {

constexpr double kZero = 1e-14;

bool same_model(const ModelPtr& x, const ModelPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  return x->id() == y->id() && x->U().rows() == y->U().rows() && x->U() == y->U();
}

void add_into(std::map<int, ComplexMatrix>& acc, int degree, const ComplexMatrix& c) {
  auto it = acc.find(degree);
  if (it == acc.end())
    acc.emplace(degree, c);
  else
    it->second += c;
}

}  // namespace

std::shared_ptr<const GradedModel> GradedModel::make(std::string id, ComplexMatrix u, MatrixAlgebra a, double tol) {
  if (u.rows() != u.cols()) throw DimensionMismatch("GradedModel: U must be square");
  if (a.ambient_dim() != u.rows()) throw DimensionMismatch("GradedModel: coefficient algebra dimension differs from U");
  if (!partial_isometry_report(u, tol).all()) throw HypothesisViolated("GradedModel: U is not a partial isometry");
  if (!a.unital()) throw HypothesisViolated("GradedModel: coefficient algebra must be unital");
  if (!is_commutative(a, tol)) throw HypothesisViolated("GradedModel: coefficient algebra must be commutative");

  std::shared_ptr<GradedModel> m(new GradedModel());
  m->id_ = std::move(id);
  m->u_ = std::move(u);
  m->a_ = std::move(a);
  const auto n = static_cast<int>(m->u_.rows());
  m->powers_.push_back(identity(n));
  for (int k = 1; k <= n; ++k) {
    m->powers_.push_back(m->powers_.back() * m->u_);
    if (m->nilpotency_ < 0 && m->powers_.back().cwiseAbs().maxCoeff() <= kZero) m->nilpotency_ = k;
  }

  std::set<Eigen::Index> offsets;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(m->u_(i, j)) > kZero) offsets.insert(i - j);
  if (offsets.size() == 1 && std::abs(*offsets.begin()) == 1) m->band_ = static_cast<int>(*offsets.begin());
  return m;
}

ComplexMatrix GradedModel::power(int k) const {
  if (k < 0) throw InvalidSpec("GradedModel::power: negative exponent");
  const int cached = static_cast<int>(powers_.size()) - 1;
  if (k <= cached) return powers_[static_cast<std::size_t>(k)];
  if (vanishes_at(k)) return ComplexMatrix::Zero(u_.rows(), u_.cols());
  return powers_.back() * power(k - cached);
}

ComplexMatrix GradedModel::final_projection(int k) const {
  const ComplexMatrix p = power(k);
  return p * p.adjoint();
}

ComplexMatrix GradedModel::delta(const ComplexMatrix& x, int k) const {
  const ComplexMatrix p = power(k);
  return p * x * p.adjoint();
}

ComplexMatrix GradedModel::delta_star(const ComplexMatrix& x, int k) const {
  const ComplexMatrix p = power(k);
  return p.adjoint() * x * p;
}

bool GradedModel::vanishes_at(int k) const { return nilpotency_ >= 0 && k >= nilpotency_; }

GradedElement GradedElement::from_beta(ModelPtr model, std::map<int, ComplexMatrix> beta, double tol) {
  if (!model) throw ModelMismatch("GradedElement: missing model");
  const auto n = model->ambient_dim();
  std::map<int, ComplexMatrix> kept;
  for (auto& [d, c] : beta) {
    if (c.rows() != n || c.cols() != n) throw DimensionMismatch("GradedElement: coefficient dims differ from model");
    const double scale = tol * (1.0 + operator_norm(c));
    const double member = model->A().residual(c);
    if (member > scale) {
      std::ostringstream os;
      os << "GradedElement: coefficient of degree " << d << " is not in the coefficient algebra (residual " << member
         << ")";
      throw InvalidSpec(os.str());
    }
    const ComplexMatrix p = model->final_projection(std::abs(d));
    const double support = std::max(operator_norm(p * c - c), operator_norm(c * p - c));
    if (support > scale) {
      std::ostringstream os;
      os << "GradedElement: coefficient of degree " << d << " violates the support condition (residual " << support
         << ")";
      throw SupportViolation(os.str());
    }
    if (c.cwiseAbs().maxCoeff() > 0.0) kept.emplace(d, std::move(c));
  }
  return GradedElement(std::move(model), std::move(kept));
}

GradedElement GradedElement::from_alpha(ModelPtr model, const std::map<int, ComplexMatrix>& alpha, double tol) {
  if (!model) throw ModelMismatch("GradedElement: missing model");
  std::map<int, ComplexMatrix> beta;
  for (const auto& [d, a] : alpha) beta.emplace(d, model->delta(a, std::abs(d)));
  return from_beta(std::move(model), std::move(beta), tol);
}

GradedElement GradedElement::normalized(ModelPtr model, std::map<int, ComplexMatrix> beta) {
  if (!model) throw ModelMismatch("GradedElement: missing model");
  std::map<int, ComplexMatrix> out;
  for (auto& [d, c] : beta) {
    if (model->vanishes_at(std::abs(d))) continue;
    const ComplexMatrix p = model->final_projection(std::abs(d));
    out.emplace(d, p * model->A().project(c) * p);
  }
  return GradedElement(std::move(model), std::move(out));
}

int GradedElement::bandwidth() const {
  int w = 0;
  for (const auto& kv : beta_) w = std::max(w, std::abs(kv.first));
  return w;
}

std::map<int, ComplexMatrix> GradedElement::alpha() const {
  std::map<int, ComplexMatrix> out;
  for (const auto& [d, c] : beta_) out.emplace(d, model_->delta_star(c, std::abs(d)));
  return out;
}

GradedElement GradedElement::operator+(const GradedElement& other) const {
  if (!same_model(model_, other.model_)) throw ModelMismatch("GradedElement: sum of elements on different models");
  auto acc = beta_;
  for (const auto& [d, c] : other.beta_) add_into(acc, d, c);
  return GradedElement(model_, std::move(acc));
}

GradedElement GradedElement::operator*(Complex s) const {
  auto acc = beta_;
  for (auto& kv : acc) kv.second *= s;
  return GradedElement(model_, std::move(acc));
}

ComplexMatrix realize(const GradedElement& g) {
  const auto& model = *g.model();
  ComplexMatrix out = ComplexMatrix::Zero(model.ambient_dim(), model.ambient_dim());
  for (const auto& [d, c] : g.coefficients()) {
    if (d > 0)
      out += c * model.power(d);
    else if (d < 0)
      out += model.power(-d).adjoint() * c;
    else
      out += c;
  }
  return out;
}

GradedElement graded_mul(const GradedElement& g1, const GradedElement& g2) {
  if (!same_model(g1.model_, g2.model_)) throw ModelMismatch("graded_mul: elements live on different models");
  const GradedModel& model = *g1.model_;
  std::map<int, ComplexMatrix> acc;
  for (const auto& [d1, c1] : g1.beta_) {
    for (const auto& [d2, c2] : g2.beta_) {
      const int deg = d1 + d2;
      if (model.vanishes_at(std::abs(deg))) continue;
      ComplexMatrix c;
      if (d1 >= 0 && d2 >= 0) {
        c = c1 * model.delta(c2, d1);
      } else if (d1 < 0 && d2 < 0) {
        c = model.delta(c1, -d2) * c2;
      } else if (d1 >= 0) {
        const int m = d1;
        const int n = -d2;
        if (m >= n)
          c = c1 * model.delta(model.final_projection(n) * c2, m - n);
        else
          c = model.delta(c1 * model.final_projection(m), n - m) * c2;
      } else {
        const int m = -d1;
        const int n = d2;
        c = model.delta_star(c1 * c2, std::min(m, n));
      }
      add_into(acc, deg, c);
    }
  }
  return GradedElement(g1.model_, std::move(acc));
}

GradedElement graded_adjoint(const GradedElement& g) {
  std::map<int, ComplexMatrix> out;
  for (const auto& [d, c] : g.beta_) out.emplace(-d, c.adjoint());
  return GradedElement(g.model_, std::move(out));
}

ComplexMatrix extract_N(const GradedElement& g, int n) {
  const auto it = g.coefficients().find(n);
  if (it != g.coefficients().end()) return it->second;
  const auto dim = g.model()->ambient_dim();
  return ComplexMatrix::Zero(dim, dim);
}

GradedElement pruned(const GradedElement& g, double rel) {
  double largest = 0.0;
  for (const auto& kv : g.beta_) largest = std::max(largest, kv.second.norm());
  std::map<int, ComplexMatrix> out;
  for (const auto& [d, c] : g.beta_)
    if (c.norm() > rel * largest) out.emplace(d, c);
  return GradedElement(g.model_, std::move(out));
}

ComplexMatrix gauge_average_N0(const ComplexMatrix& m, int bandwidth, const GradedModel& model) {
  if (model.band_sign() == 0) throw ModelNotGraded("gauge_average_N0: U is not a single-band weighted shift");
  if (m.rows() != model.ambient_dim() || m.cols() != model.ambient_dim())
    throw DimensionMismatch("gauge_average_N0: dims differ from model");
  if (bandwidth < 0) throw InvalidSpec("gauge_average_N0: negative bandwidth");
  const int big_m = 2 * bandwidth + 2;
  const auto n = m.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < big_m; ++j) {
    ComplexVector phases(n);
    for (Eigen::Index k = 0; k < n; ++k)
      phases(k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((j * k) % big_m) / big_m);
    acc += phases.asDiagonal() * m * phases.conjugate().asDiagonal();
  }
  return acc / static_cast<double>(big_m);
}

GradedElement regrade(const ComplexMatrix& m, const ModelPtr& model, double tol) {
  if (!model) throw ModelMismatch("regrade: missing model");
  const int sign = model->band_sign();
  if (sign == 0) throw ModelNotGraded("regrade: U is not a single-band weighted shift");
  const auto n = model->ambient_dim();
  if (m.rows() != n || m.cols() != n) throw DimensionMismatch("regrade: dims differ from model");

  std::map<int, ComplexMatrix> beta;
  for (int d = -static_cast<int>(n) + 1; d < static_cast<int>(n); ++d) {
    ComplexMatrix band = ComplexMatrix::Zero(n, n);
    const Eigen::Index offset = static_cast<Eigen::Index>(sign) * d;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index i = j + offset;
      if (i >= 0 && i < n) band(i, j) = m(i, j);
    }
    if (band.cwiseAbs().maxCoeff() == 0.0) continue;
    if (d > 0)
      beta.emplace(d, band * model->power(d).adjoint());
    else if (d < 0)
      beta.emplace(d, model->power(-d) * band);
    else
      beta.emplace(0, band);
  }
  auto g = GradedElement::from_beta(model, std::move(beta), tol);
  const double defect = operator_norm(realize(g) - m);
  if (defect > tol * (1.0 + operator_norm(m))) {
    std::ostringstream os;
    os << "regrade: matrix is not in the graded span of the model (defect " << defect << ")";
    throw SupportViolation(os.str());
  }
  return g;
}

GradedElement random_graded_element(const ModelPtr& model, Rng& rng, int width) {
  const auto basis = model->A().basis();
  std::map<int, ComplexMatrix> beta;
  for (int d = -width; d <= width; ++d) {
    ComplexMatrix c = ComplexMatrix::Zero(model->ambient_dim(), model->ambient_dim());
    for (const auto& b : basis) c += rng.complex_normal() * b;
    beta.emplace(d, c);
  }
  return GradedElement::normalized(model, std::move(beta));
}

SandwichReport sandwich_check(const GradedElement& b, double tol) {
  SandwichReport r;
  r.norm2 = std::pow(operator_norm(realize(b)), 2);
  r.n0 = operator_norm(extract_N(graded_mul(b, graded_adjoint(b)), 0));
  r.bandwidth = b.bandwidth();
  r.lower = r.n0 <= r.norm2 + tol * (1.0 + r.norm2);
  r.upper = r.norm2 <= (2 * r.bandwidth + 1) * r.n0 + tol * (1.0 + r.norm2);
  return r;
}

PropertyStarReport check_property_star(const ModelPtr& model, int samples, double tol, std::uint64_t seed) {
  Rng rng(seed);
  const int width = std::min<int>(2, static_cast<int>(model->ambient_dim()) - 1);
  PropertyStarReport r;
  r.samples = samples;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.worst_max_margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const auto g = random_graded_element(model, rng, width);
    const double norm = operator_norm(realize(g));
    double top = 0.0;
    for (const auto& kv : g.coefficients()) top = std::max(top, operator_norm(kv.second));
    const double margin = norm - operator_norm(extract_N(g, 0));
    const double max_margin = norm - top;
    r.worst_margin = std::min(r.worst_margin, margin);
    r.worst_max_margin = std::min(r.worst_max_margin, max_margin);
    if (margin < -tol * (1.0 + norm) || max_margin < -tol * (1.0 + norm)) ++r.violations;
  }
  if (samples <= 0) r.worst_margin = r.worst_max_margin = 0.0;
  return r;
}

SumNormReport sum_norm_inequalities(const std::vector<ComplexMatrix>& ds, double tol) {
  if (ds.empty()) throw DimensionMismatch("sum_norm_inequalities: empty list");
  const auto n = ds.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  ComplexMatrix left = sum;   // sum d d*
  ComplexMatrix right = sum;  // sum d* d
  ComplexMatrix abs_sum = sum;
  ComplexMatrix abs_star_sum = sum;
  for (const auto& d : ds) {
    if (d.rows() != n || d.cols() != n) throw DimensionMismatch("sum_norm_inequalities: unequal dims");
    sum += d;
    left += d * d.adjoint();
    right += d.adjoint() * d;
    abs_sum += abs_of(d);
    abs_star_sum += abs_of(d.adjoint());
  }
  const double m = static_cast<double>(ds.size());
  const double s2 = std::pow(operator_norm(sum), 2);
  const double l = operator_norm(left);
  const double r = operator_norm(right);
  SumNormReport out;
  out.margins = {m * l - s2, m * r - s2, std::pow(operator_norm(abs_sum), 2) - r / m,
                 std::pow(operator_norm(abs_star_sum), 2) - l / m};
  const double scale = tol * (1.0 + m * std::max(l, r) + s2);
  for (std::size_t i = 0; i < 4; ++i) out.holds[i] = out.margins[i] >= -scale;
  return out;
}

double power_iteration_norm(const ComplexMatrix& m, int iterations) {
  if (m.size() == 0) return 0.0;
  Rng rng(0);
  ComplexVector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const ComplexVector w = m.adjoint() * (m * v);
    const double len = w.norm();
    if (len == 0.0) return (m * v).norm();
    v = w / len;
    estimate = (m * v).norm();
  }
  return estimate;
}

NormEstimate norm_estimate(const GradedElement& g, const NormEstimateOptions& opts) {
  if (opts.kmax < 1) throw InvalidSpec("norm_estimate: kmax must be >= 1");
  if (g.is_zero()) throw ZeroElement("norm_estimate: element is zero");
  const int n = g.bandwidth();
  if (static_cast<long long>(4) * opts.kmax * n > opts.bandwidth_cap) {
    std::ostringstream os;
    os << "norm_estimate: 4 * kmax * bandwidth = " << 4LL * opts.kmax * n << " exceeds cap " << opts.bandwidth_cap;
    throw BandwidthOverflow(os.str());
  }
  const double scale = power_iteration_norm(realize(g));
  if (!(scale > 0.0)) throw ZeroElement("norm_estimate: element realizes to zero");

  NormEstimate out;
  out.scale = scale;
  out.bandwidth = n;
  const GradedElement h = g * Complex(1.0 / scale, 0.0);
  const GradedElement x = pruned(graded_mul(h, graded_adjoint(h)), opts.prune);

  auto record = [&](int k, const GradedElement& y) {
    const double raw = operator_norm(extract_N(y, 0));
    const double s = scale * std::pow(raw, 1.0 / (4.0 * k));
    out.ks.push_back(k);
    out.raw.push_back(raw);
    out.estimates.push_back(s);
    out.upper_bounds.push_back(std::pow(4.0 * k * n + 1.0, 1.0 / (4.0 * k)) * s);
  };

  // y_k = x^{2k}; squaring doubles k.
  GradedElement y = pruned(graded_mul(x, x), opts.prune);
  std::vector<GradedElement> squares{y};
  int k = 1;
  record(k, y);
  while (2 * k <= opts.kmax) {
    y = pruned(graded_mul(y, y), opts.prune);
    k *= 2;
    squares.push_back(y);
    record(k, y);
  }
  if (k != opts.kmax) {
    // x^{2 kmax} as the product of the stored squares over the bits of kmax.
    std::optional<GradedElement> acc;
    for (std::size_t bit = 0; bit < squares.size(); ++bit) {
      if (((opts.kmax >> bit) & 1) == 0) continue;
      acc = acc ? pruned(graded_mul(*acc, squares[bit]), opts.prune) : squares[bit];
    }
    record(opts.kmax, *acc);
  }
  out.final = out.estimates.back();
  return out;
}

ComplexMatrix permutation_matrix(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  std::vector<bool> seen(perm.size(), false);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int j = perm[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)]) throw InvalidSpec("permutation_matrix: not a permutation");
    seen[static_cast<std::size_t>(j)] = true;
    p(j, i) = 1.0;
  }
  return p;
}

TransportReport transport_compare(const GradedElement& g, const ModelPtr& model1, const ModelPtr& model2,
                                  const std::vector<int>& perm, const NormEstimateOptions& opts, double tol) {
  if (!same_model(g.model(), model1)) throw ModelMismatch("transport_compare: element does not live on model1");
  if (static_cast<Eigen::Index>(perm.size()) != model1->ambient_dim() ||
      model2->ambient_dim() != model1->ambient_dim())
    throw ModelMismatch("transport_compare: dimensions differ");
  const ComplexMatrix p = permutation_matrix(perm);
  if (operator_norm(p * model1->U() * p.adjoint() - model2->U()) > tol)
    throw ModelMismatch("transport_compare: model2 is not the permuted model1");
  for (const auto& b : model1->A().basis())
    if (model2->A().residual(p * b * p.adjoint()) > tol)
      throw ModelMismatch("transport_compare: coefficient algebras are not permuted copies");

  std::map<int, ComplexMatrix> beta;
  for (const auto& [d, c] : g.coefficients()) beta.emplace(d, p * c * p.adjoint());
  const auto g2 = GradedElement::from_beta(model2, std::move(beta), std::max(tol, 1e-9));

  TransportReport r;
  r.norm1 = operator_norm(realize(g));
  r.norm2 = operator_norm(realize(g2));
  r.estimate1 = norm_estimate(g, opts).final;
  r.estimate2 = norm_estimate(g2, opts).final;
  r.dense_agree = std::abs(r.norm1 - r.norm2) <= 1e-9 * (1.0 + r.norm1);
  r.estimates_agree = std::abs(r.estimate1 - r.estimate2) <= 1e-6 * (1.0 + r.estimate1);
  return r;
}

}  // namespace polarkit

#include "polarkit/tower.hpp"

#include "polarkit/isometry.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace polarkit {

EndoPair::EndoPair(ComplexMatrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() != u_.cols()) throw DimensionMismatch("EndoPair: U must be square");
  const auto r = partial_isometry_report(u_, tol);
  if (!r.all()) {
    std::ostringstream os;
    os << "EndoPair: U is not a partial isometry (residuals";
    for (double x : r.residuals) os << ' ' << x;
    os << ")";
    throw HypothesisViolated(os.str());
  }
}

ComplexMatrix EndoPair::apply(const ComplexMatrix& m, Direction dir) const {
  if (m.rows() != u_.rows() || m.cols() != u_.cols()) throw DimensionMismatch("delta_apply: dims differ");
  if (dir == Direction::forward) return u_ * m * u_.adjoint();
  return u_.adjoint() * m * u_;
}

ComplexMatrix EndoPair::apply(const ComplexMatrix& m, Direction dir, int times) const {
  ComplexMatrix out = m;
  for (int i = 0; i < times; ++i) out = apply(out, dir);
  return out;
}

EndoPair EndoPair::reversed() const { return EndoPair(u_.adjoint(), Unchecked{}); }

ComplexMatrix delta_apply(const EndoPair& p, const ComplexMatrix& m, Direction dir) { return p.apply(m, dir); }

namespace {

double max_commutator(const std::vector<ComplexMatrix>& xs, const std::vector<ComplexMatrix>& ys) {
  double worst = 0.0;
  for (const auto& x : xs)
    for (const auto& y : ys) worst = std::max(worst, operator_norm(commutator(x, y)));
  return worst;
}

std::vector<ComplexMatrix> map_all(const std::vector<ComplexMatrix>& xs, const EndoPair& p, Direction dir,
                                   int times = 1) {
  std::vector<ComplexMatrix> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(p.apply(x, dir, times));
  return out;
}

double max_residual(const MatrixSubspace& s, const std::vector<ComplexMatrix>& xs) {
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, s.residual(x));
  return worst;
}

struct Sequence {
  std::vector<MatrixAlgebra> algebras;
  int index = 0;
};

// L_0 = base, L_n = C*(L_{n-1}, f^n(base)). Stops once the dimension has held
// for two consecutive steps with mutually contained algebras.
Sequence grow(const MatrixAlgebra& base, const EndoPair& p, Direction dir, double tol) {
  const Eigen::Index n = base.ambient_dim();
  const int max_steps = static_cast<int>(n * n) + 3;
  Sequence s;
  s.algebras.push_back(base);
  std::vector<ComplexMatrix> images = base.basis();
  int plateau = 0;
  for (int step = 1; step <= max_steps; ++step) {
    images = map_all(images, p, dir);
    std::vector<ComplexMatrix> gens = s.algebras.back().basis();
    gens.insert(gens.end(), images.begin(), images.end());
    MatrixAlgebra next = generate(gens, base.unital(), n);
    const MatrixAlgebra& prev = s.algebras.back();
    const bool same = next.dim() == prev.dim() && mutual_membership_residual(next, prev) <= tol;
    s.algebras.push_back(std::move(next));
    plateau = same ? plateau + 1 : 0;
    if (plateau == 2) {
      s.index = step - 2;
      return s;
    }
  }
  throw DimensionOverflow("build_tower: tower did not stabilize");
}

}  // namespace

HypothesesReport hypotheses_check(const MatrixAlgebra& a0, const EndoPair& p, int kmax, double tol) {
  if (!a0.unital()) throw HypothesisViolated("hypotheses_check: A0 must be unital");
  if (!is_commutative(a0, tol)) throw HypothesisViolated("hypotheses_check: A0 must be commutative");
  if (a0.ambient_dim() != p.ambient_dim()) throw DimensionMismatch("hypotheses_check: dims differ");

  HypothesesReport r;
  r.kmax = kmax;
  r.tol = tol;
  const auto basis = a0.basis();
  const ComplexMatrix one = identity(a0.ambient_dim());
  const ComplexMatrix initial = p.delta_star(one);

  ComplexMatrix star_unit = one;
  std::vector<ComplexMatrix> images = basis;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      star_unit = p.delta_star(star_unit);
      images = map_all(images, p, Direction::forward);
    }
    r.star_units_projection = std::max(r.star_units_projection, projection_defect(star_unit));
    r.star_units_in_commutant = std::max(r.star_units_in_commutant, max_commutator({star_unit}, basis));
    r.images_in_commutant = std::max(r.images_in_commutant, max_commutator(images, basis));
    r.initial_commutes_with_images = std::max(r.initial_commutes_with_images, max_commutator({initial}, images));
  }
  r.delta_preserves_a0 = max_residual(a0.space(), map_all(basis, p, Direction::forward));
  return r;
}

std::vector<Check> HypothesesReport::checks() const {
  const char* alt = "delta leaves A0 invariant (alternative hypothesis)";
  auto alternative = delta_preserves_a0 <= tol || !general_holds()
                         ? make_check("hypotheses.delta_preserves_a0", alt, delta_preserves_a0, tol)
                         : skipped_check("hypotheses.delta_preserves_a0", alt, "general hypotheses hold");
  alternative.residual = delta_preserves_a0;
  return {
      make_check("hypotheses.star_units_projection", "star units are projections", star_units_projection, tol),
      make_check("hypotheses.star_units_in_commutant", "star units commute with A0", star_units_in_commutant, tol),
      make_check("hypotheses.images_in_commutant", "forward images commute with A0", images_in_commutant, tol),
      make_check("hypotheses.initial_commutes_with_images", "initial projection commutes with images",
                 initial_commutes_with_images, tol),
      alternative,
  };
}

TowerReport build_tower(const MatrixAlgebra& a0, const EndoPair& p_in, double tol, bool exchange_roles) {
  const EndoPair p = exchange_roles ? p_in.reversed() : p_in;
  const auto hyp = hypotheses_check(a0, p, static_cast<int>(a0.ambient_dim()), tol);
  if (!hyp.general_holds()) {
    std::ostringstream os;
    os << "build_tower: hypotheses fail (projection " << hyp.star_units_projection << ", star units "
       << hyp.star_units_in_commutant << ", images " << hyp.images_in_commutant << ", initial "
       << hyp.initial_commutes_with_images << ")";
    throw HypothesisViolated(os.str());
  }

  TowerReport t;
  t.a0 = a0;
  t.exchanged_roles = exchange_roles;
  auto fwd = grow(a0, p, Direction::forward, tol);
  auto bwd = grow(a0, p, Direction::star, tol);
  t.forward = std::move(fwd.algebras);
  t.forward_index = fwd.index;
  t.backward = std::move(bwd.algebras);
  t.backward_index = bwd.index;
  t.a_inf = t.forward.back();
  t.inf_a = t.backward.back();

  auto fb = grow(t.a_inf, p, Direction::star, tol);
  auto bf = grow(t.inf_a, p, Direction::forward, tol);
  t.forward_backward = std::move(fb.algebras);
  t.forward_backward_index = fb.index;
  t.backward_forward = std::move(bf.algebras);
  t.backward_forward_index = bf.index;
  t.inf_a_inf = t.forward_backward.back();
  t.inf_a_closure = t.backward_forward.back();
  t.checks = hyp.checks();
  return t;
}

namespace {

const MatrixAlgebra& at(const std::vector<MatrixAlgebra>& seq, int n) {
  return seq[static_cast<std::size_t>(std::clamp(n, 0, static_cast<int>(seq.size()) - 1))];
}

// Layers L_k = span f^k(base) for k = 0..count-1.
std::vector<MatrixSubspace> layers(const MatrixAlgebra& base, const EndoPair& p, Direction dir, int count) {
  std::vector<MatrixSubspace> out;
  std::vector<ComplexMatrix> images = base.basis();
  for (int k = 0; k < count; ++k) {
    if (k > 0) images = map_all(images, p, dir);
    out.push_back(MatrixSubspace::span(images, base.ambient_dim()));
  }
  return out;
}

// Products of layers k >= l land in layer k.
double layer_product_residual(const std::vector<MatrixSubspace>& ls) {
  double worst = 0.0;
  for (std::size_t k = 0; k < ls.size(); ++k) {
    const auto bk = ls[k].basis();
    for (std::size_t l = 0; l <= k; ++l)
      for (const auto& x : bk)
        for (const auto& y : ls[l].basis()) {
          worst = std::max(worst, ls[k].residual(x * y));
          worst = std::max(worst, ls[k].residual(y * x));
        }
  }
  return worst;
}

// The top layer L_n is a two-sided ideal in the n-th tower algebra.
double ideal_residual(const std::vector<MatrixSubspace>& ls, const std::vector<MatrixAlgebra>& seq) {
  double worst = 0.0;
  for (std::size_t n = 1; n < ls.size(); ++n) {
    const auto& alg = at(seq, static_cast<int>(n));
    for (const auto& j : ls[n].basis())
      for (const auto& x : alg.basis()) {
        worst = std::max(worst, ls[n].residual(j * x));
        worst = std::max(worst, ls[n].residual(x * j));
      }
  }
  return worst;
}

// The n-th tower algebra is the plain linear sum of layers 0..n.
double sum_residual(const std::vector<MatrixSubspace>& ls, const std::vector<MatrixAlgebra>& seq) {
  double worst = 0.0;
  std::vector<ComplexMatrix> acc;
  for (std::size_t n = 0; n < ls.size(); ++n) {
    const auto b = ls[n].basis();
    acc.insert(acc.end(), b.begin(), b.end());
    const auto sum = MatrixSubspace::span(acc, ls[n].ambient_dim());
    const auto& alg = at(seq, static_cast<int>(n));
    worst = std::max(worst, mutual_membership_residual(sum, alg.space()));
  }
  return worst;
}

// dir_down lowers the tower index by one, dir_up raises it.
double shift_residual(const std::vector<MatrixAlgebra>& seq, const EndoPair& p, Direction dir_down) {
  const Direction dir_up = dir_down == Direction::forward ? Direction::star : Direction::forward;
  double worst = 0.0;
  for (int n = 0; n < static_cast<int>(seq.size()); ++n) {
    const auto b = seq[static_cast<std::size_t>(n)].basis();
    if (n >= 1) worst = std::max(worst, max_residual(at(seq, n - 1).space(), map_all(b, p, dir_down)));
    worst = std::max(worst, max_residual(at(seq, n + 1).space(), map_all(b, p, dir_up)));
  }
  return worst;
}

double tower_commutativity(const TowerReport& t) {
  double worst = commutativity_defect(t.a0);
  for (const auto* seq : {&t.forward, &t.backward, &t.forward_backward, &t.backward_forward})
    for (const auto& a : *seq) worst = std::max(worst, commutativity_defect(a));
  return worst;
}

double monotone_residual(const std::vector<MatrixAlgebra>& seq) {
  double worst = 0.0;
  for (std::size_t n = 1; n < seq.size(); ++n)
    worst = std::max(worst, max_residual(seq[n].space(), seq[n - 1].basis()));
  return worst;
}

}  // namespace

std::vector<Check> verify_tower_theorems(const TowerReport& t, const EndoPair& p_in, double tol) {
  const EndoPair p = t.exchanged_roles ? p_in.reversed() : p_in;
  const Eigen::Index n = t.a0.ambient_dim();
  const ComplexMatrix one = identity(n);
  std::vector<Check> out;

  out.push_back(make_check("tower.commutative", "every tower algebra is commutative", tower_commutativity(t), tol));

  {
    const int count = static_cast<int>(n) + 1;
    const auto a0b = t.a0.basis();
    std::vector<std::vector<ComplexMatrix>> star_imgs{a0b}, fwd_imgs{a0b};
    for (int k = 1; k < count; ++k) {
      star_imgs.push_back(map_all(star_imgs.back(), p, Direction::star));
      fwd_imgs.push_back(map_all(fwd_imgs.back(), p, Direction::forward));
    }
    double star_res = 0.0;
    double fwd_res = 0.0;
    for (int k = 0; k < count; ++k)
      for (int l = 0; l < count; ++l) {
        star_res = std::max(star_res, max_commutator(star_imgs[k], star_imgs[l]));
        fwd_res = std::max(fwd_res, max_commutator(fwd_imgs[k], fwd_imgs[l]));
      }
    out.push_back(make_check("tower.star_images_commute", "star images of A0 commute pairwise", star_res, tol));
    out.push_back(make_check("tower.forward_images_commute", "forward images of A0 commute pairwise", fwd_res, tol));
  }

  {
    const int count = static_cast<int>(t.forward_backward.size());
    const auto ls = layers(t.a_inf, p, Direction::star, count);
    out.push_back(make_check("tower.layer_products", "layer products land in the higher layer",
                             layer_product_residual(ls), tol));
    out.push_back(make_check("tower.layer_ideal", "top layer is an ideal", ideal_residual(ls, t.forward_backward), tol));
    out.push_back(make_check("tower.layer_sum", "tower algebra is the linear sum of layers",
                             sum_residual(ls, t.forward_backward), tol));

    const int dual_count = static_cast<int>(t.backward_forward.size());
    const auto dual = layers(t.inf_a, p, Direction::forward, dual_count);
    out.push_back(make_check("tower.dual_layer_products", "dual layer products land in the higher layer",
                             layer_product_residual(dual), tol));
    out.push_back(make_check("tower.dual_layer_ideal", "dual top layer is an ideal",
                             ideal_residual(dual, t.backward_forward), tol));
    out.push_back(make_check("tower.dual_layer_sum", "dual tower algebra is the linear sum of layers",
                             sum_residual(dual, t.backward_forward), tol));
  }

  {
    const double preserve = max_residual(t.a0.space(), map_all(t.a0.basis(), p, Direction::forward));
    if (preserve <= tol) {
      const int count = static_cast<int>(t.backward.size());
      const auto ls = layers(t.a0, p, Direction::star, count);
      out.push_back(make_check("tower.a0_layer_products", "layer products over A0 (invariant case)",
                               layer_product_residual(ls), tol));
      out.push_back(make_check("tower.a0_layer_ideal", "top layer over A0 is an ideal (invariant case)",
                               ideal_residual(ls, t.backward), tol));
    } else {
      std::ostringstream os;
      os << "delta does not leave A0 invariant (residual " << preserve << ")";
      out.push_back(skipped_check("tower.a0_layer_products", "layer products over A0 (invariant case)", os.str()));
      out.push_back(skipped_check("tower.a0_layer_ideal", "top layer over A0 is an ideal (invariant case)", os.str()));
    }
  }

  out.push_back(make_check("tower.index_shift", "delta lowers and delta_* raises the tower index",
                           shift_residual(t.forward_backward, p, Direction::forward), tol));
  out.push_back(make_check("tower.dual_index_shift", "delta_* lowers and delta raises the dual tower index",
                           shift_residual(t.backward_forward, p, Direction::star), tol));

  const auto top = t.inf_a_inf.basis();
  {
    double worst = 0.0;
    for (Direction dir : {Direction::forward, Direction::star}) {
      const auto imgs = map_all(top, p, dir);
      worst = std::max(worst, max_residual(t.inf_a_inf.space(), imgs));
      for (std::size_t i = 0; i < top.size(); ++i)
        for (std::size_t j = 0; j < top.size(); ++j)
          worst = std::max(worst, operator_norm(p.apply(top[i] * top[j], dir) - imgs[i] * imgs[j]));
    }
    out.push_back(make_check("tower.endomorphism", "delta and delta_* are endomorphisms of the closure", worst, tol));
  }

  {
    const ComplexMatrix& u = p.U();
    const ComplexMatrix ua = u.adjoint();
    double worst = 0.0;
    for (const auto& a : top) {
      worst = std::max(worst, operator_norm(u * a - p.delta(a) * u));
      worst = std::max(worst, operator_norm(ua * a - p.delta_star(a) * ua));
    }
    out.push_back(make_check("tower.intertwining", "U and U* intertwine delta and delta_*", worst, tol));
  }

  {
    const double units = std::max(t.inf_a_inf.residual(p.delta(one)), t.inf_a_inf.residual(p.delta_star(one)));
    out.push_back(make_check("tower.units_in_closure", "final and initial projections lie in the closure", units, tol));
    double mono = 0.0;
    for (const auto* seq : {&t.forward, &t.backward, &t.forward_backward, &t.backward_forward})
      mono = std::max(mono, monotone_residual(*seq));
    out.push_back(make_check("tower.monotone", "towers increase", mono, tol));
  }

  out.push_back(make_check("tower.double_closure_equality", "both double closures coincide",
                           mutual_membership_residual(t.inf_a_inf, t.inf_a_closure), tol));

  {
    // All words delta_*^k delta^j applied to A0.
    std::vector<ComplexMatrix> gens;
    std::vector<ComplexMatrix> fwd = t.a0.basis();
    const int jmax = static_cast<int>(t.forward.size());
    const int kmax = static_cast<int>(t.forward_backward.size());
    for (int j = 0; j <= jmax; ++j) {
      if (j > 0) fwd = map_all(fwd, p, Direction::forward);
      std::vector<ComplexMatrix> cur = fwd;
      for (int k = 0; k <= kmax; ++k) {
        if (k > 0) cur = map_all(cur, p, Direction::star);
        gens.insert(gens.end(), cur.begin(), cur.end());
      }
    }
    const auto minimal = generate(gens, true, n);
    out.push_back(make_check("tower.minimality", "closure is generated by the mixed images of A0",
                             mutual_membership_residual(minimal, t.inf_a_inf), tol));
  }
  return out;
}

}  // namespace polarkit

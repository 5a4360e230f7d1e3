#include "polarkit/models.hpp"

#include <cmath>
#include <sstream>

namespace polarkit {

std::string kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::weighted_shift: return "weighted_shift";
    case ModelKind::q_oscillator: return "q_oscillator";
    case ModelKind::normal: return "normal";
    case ModelKind::jordan_block: return "jordan_block";
    case ModelKind::custom: return "custom";
  }
  return "custom";
}

ModelKind parse_kind(const std::string& name) {
  for (auto k : {ModelKind::weighted_shift, ModelKind::q_oscillator, ModelKind::normal, ModelKind::jordan_block,
                 ModelKind::custom})
    if (kind_name(k) == name) return k;
  throw InvalidSpec("unknown model kind '" + name + "'");
}

std::string ModelSpec::name() const {
  if (id) return *id;
  std::ostringstream os;
  os << kind_name(kind);
  switch (kind) {
    case ModelKind::weighted_shift: os << "_n" << (dim > 0 ? dim : static_cast<int>(weights.size()) + 1); break;
    case ModelKind::q_oscillator: os << "_q" << q << "_h" << h << "_n" << dim; break;
    case ModelKind::normal: os << "_n" << diag.size(); break;
    case ModelKind::jordan_block: os << "_n" << dim; break;
    case ModelKind::custom: os << "_n" << matrix.rows(); break;
  }
  return os.str();
}

std::vector<double> q_eigenvalues(double q, double h, int dim) {
  std::vector<double> out;
  double lambda = 0.0;
  for (int n = 1; n < dim; ++n) {
    lambda = q * lambda + h;
    out.push_back(lambda);
  }
  return out;
}

namespace {

ComplexMatrix raising_shift(const std::vector<double>& w) {
  const auto n = static_cast<Eigen::Index>(w.size()) + 1;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i + 1, i) = w[static_cast<std::size_t>(i)];
  return a;
}

}  // namespace

ComplexMatrix build(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::weighted_shift: {
      if (spec.weights.empty()) throw InvalidSpec("weighted_shift: weights required");
      if (spec.dim != 0 && spec.dim != static_cast<int>(spec.weights.size()) + 1)
        throw InvalidSpec("weighted_shift: dim must equal len(weights) + 1");
      for (double w : spec.weights)
        if (!(w > 0.0)) throw InvalidSpec("weighted_shift: weights must be positive");
      return raising_shift(spec.weights);
    }
    case ModelKind::q_oscillator: {
      if (spec.dim < 2) throw InvalidSpec("q_oscillator: dim must be >= 2");
      if (!(spec.h > 0.0)) throw InvalidSpec("q_oscillator: h must be positive");
      const auto lambda = q_eigenvalues(spec.q, spec.h, spec.dim);
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] > 0.0)) throw InvalidSpec("q_oscillator: lambda_n must be positive");
        if (i > 0 && std::abs(lambda[i] - lambda[i - 1]) <= 1e-12) throw InvalidSpec("q_oscillator: repeated lambda_n");
      }
      std::vector<double> w;
      for (double l : lambda) w.push_back(std::sqrt(l));
      return raising_shift(w).adjoint();
    }
    case ModelKind::normal: {
      if (spec.diag.empty()) throw InvalidSpec("normal: diag required");
      if (spec.dim != 0 && spec.dim != static_cast<int>(spec.diag.size()))
        throw InvalidSpec("normal: dim must equal len(diag)");
      return diagonal(spec.diag);
    }
    case ModelKind::jordan_block: {
      if (spec.dim < 1) throw InvalidSpec("jordan_block: dim must be >= 1");
      return raising_shift(std::vector<double>(static_cast<std::size_t>(spec.dim - 1), 1.0));
    }
    case ModelKind::custom: {
      if (spec.matrix.size() == 0 || spec.matrix.rows() != spec.matrix.cols())
        throw InvalidSpec("custom: square matrix required");
      return spec.matrix;
    }
  }
  throw InvalidSpec("unknown model kind");
}

Hamiltonian hamiltonian(const ModelSpec& spec, const std::vector<double>& d) {
  const ComplexMatrix a = build(spec);
  const auto n = a.rows();
  const ComplexMatrix x = a.adjoint() * a;
  ComplexMatrix poly = ComplexMatrix::Zero(n, n);
  for (auto it = d.rbegin(); it != d.rend(); ++it) poly = poly * x + *it * identity(n);
  ComplexMatrix h = a + a.adjoint() + poly;
  h = ((h + h.adjoint()) / 2.0).eval();
  Hamiltonian out{h, {}};
  const auto eig = hermitian_eig(h, kDefaultTol * (1.0 + operator_norm(h)));
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) out.spectrum.push_back(eig.eigenvalues(i));
  return out;
}

ModelValidation validate_model(const ModelSpec& spec, double tol) {
  const ComplexMatrix a = build(spec);
  ModelValidation v;
  v.tol = tol;
  v.relation = verify_I1(a, tol);
  if (spec.kind == ModelKind::q_oscillator) {
    v.affine_applicable = true;
    const auto n = a.rows();
    ComplexMatrix r = a * a.adjoint() - spec.q * a.adjoint() * a - spec.h * identity(n);
    v.boundary_defect = std::abs(r(n - 1, n - 1));
    v.interior_residual = operator_norm(r.topLeftCorner(n - 1, n - 1));
  }
  return v;
}

std::vector<Check> ModelValidation::checks() const {
  std::vector<Check> out;
  auto rel = make_check("model.relation", "aa* is a function of a*a", relation.membership_residual, tol);
  rel.pass = relation.holds;
  out.push_back(rel);
  auto forms = make_check("model.relation_forms_agree", "both forms of the relation agree", relation.polar_form_residual,
                          tol);
  forms.pass = relation.forms_agree;
  out.push_back(forms);
  if (affine_applicable) {
    std::ostringstream os;
    os << "boundary defect " << boundary_defect;
    out.push_back(make_check("model.affine_interior", "aa* = q a*a + h off the top basis vector", interior_residual,
                             tol, os.str()));
  } else {
    out.push_back(skipped_check("model.affine_interior", "aa* = q a*a + h off the top basis vector",
                                "not a q-oscillator model"));
  }
  return out;
}

std::vector<ModelSpec> zoo() {
  std::vector<ModelSpec> out;
  auto add = [&](ModelSpec s) { out.push_back(std::move(s)); };
  {
    ModelSpec s;
    s.kind = ModelKind::weighted_shift;
    s.weights = {1.0, std::sqrt(2.0), std::sqrt(3.0)};
    s.dim = 4;
    s.id = "shift_sqrt_n4";
    add(s);
  }
  {
    ModelSpec s;
    s.kind = ModelKind::weighted_shift;
    s.weights = {0.5, 1.0, 1.5, 2.0, 2.5};
    s.dim = 6;
    s.id = "shift_linear_n6";
    add(s);
  }
  for (double q : {1.0, 0.5})
    for (int n : {4, 8, 16}) {
      ModelSpec s;
      s.kind = ModelKind::q_oscillator;
      s.q = q;
      s.h = 1.0;
      s.dim = n;
      add(s);
    }
  {
    ModelSpec s;
    s.kind = ModelKind::normal;
    s.diag = {1.0, Complex(0, 2), -1.0};
    s.id = "normal_n3";
    add(s);
  }
  {
    ModelSpec s;
    s.kind = ModelKind::normal;
    s.diag = {1.0, Complex(0, 1)};
    s.id = "normal_n2";
    add(s);
  }
  {
    ModelSpec s;
    s.kind = ModelKind::jordan_block;
    s.dim = 3;
    s.id = "jordan_n3";
    add(s);
  }
  return out;
}

}  // namespace polarkit

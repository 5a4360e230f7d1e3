#include "polarkit/io.hpp"

#include <fstream>
#include <sstream>

namespace polarkit {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ParseError(field + ": " + what); }

const Json& member(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(field, std::string("missing key '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

Complex complex_from(const Json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(field, "expected [re, im]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

Json complex_to(Complex c) { return Json::array({c.real(), c.imag()}); }

const Json& array(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  return j;
}

std::string indexed(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

}  // namespace

Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << where << ":" << line << ":" << col << ": " << e.what();
    throw ParseError(os.str());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot write file");
  out << j.dump(2) << '\n';
}

Json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix_to_json: matrix is not square");
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back(complex_to(m(i, k)));
  return Json{{"dim", m.rows()}, {"entries", entries}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) {
  const int n = integer(member(j, "dim", field), field + ".dim");
  if (n < 1) fail(field + ".dim", "must be positive");
  const auto& entries = array(member(j, "entries", field), field + ".entries");
  const auto expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (entries.size() != expected)
    fail(field + ".entries", "expected " + std::to_string(expected) + " entries, found " + std::to_string(entries.size()));
  ComplexMatrix m(n, n);
  for (std::size_t idx = 0; idx < expected; ++idx)
    m(static_cast<Eigen::Index>(idx / n), static_cast<Eigen::Index>(idx % n)) =
        complex_from(entries[idx], indexed(field + ".entries", idx));
  return m;
}

ComplexMatrix read_matrix(const std::string& path) { return matrix_from_json(read_json_file(path), path); }

void write_matrix(const std::string& path, const ComplexMatrix& m) { write_json_file(path, matrix_to_json(m)); }

Json algebra_to_json(const MatrixAlgebra& a) {
  Json elements = Json::array();
  for (const auto& b : a.basis()) elements.push_back(matrix_to_json(b));
  return Json{{"unital", a.unital()}, {"elements", elements}};
}

MatrixAlgebra algebra_from_json(const Json& j, const std::string& field) {
  const auto& u = member(j, "unital", field);
  if (!u.is_boolean()) fail(field + ".unital", "expected a boolean");
  const auto& elements = array(member(j, "elements", field), field + ".elements");
  std::vector<ComplexMatrix> gens;
  for (std::size_t i = 0; i < elements.size(); ++i)
    gens.push_back(matrix_from_json(elements[i], indexed(field + ".elements", i)));
  if (gens.empty()) fail(field + ".elements", "at least one element is required");
  for (const auto& g : gens)
    if (g.rows() != gens.front().rows()) fail(field + ".elements", "elements have different dimensions");
  return generate(gens, u.get<bool>(), gens.front().rows());
}

Json graded_to_json(const GradedElement& g) {
  Json degrees = Json::array();
  Json coeffs = Json::array();
  for (const auto& [d, c] : g.coefficients()) {
    degrees.push_back(d);
    coeffs.push_back(matrix_to_json(c));
  }
  return Json{{"degrees", degrees}, {"coefficients", coeffs}, {"model_id", g.model()->id()}};
}

GradedElement graded_from_json(const Json& j, const ModelPtr& model, const std::string& field) {
  const auto& id = member(j, "model_id", field);
  if (!id.is_string()) fail(field + ".model_id", "expected a string");
  if (id.get<std::string>() != model->id())
    throw ModelMismatch(field + ": element belongs to model '" + id.get<std::string>() + "', not '" + model->id() + "'");
  const auto& degrees = array(member(j, "degrees", field), field + ".degrees");
  const auto& coeffs = array(member(j, "coefficients", field), field + ".coefficients");
  if (degrees.size() != coeffs.size()) fail(field, "degrees and coefficients differ in length");
  std::map<int, ComplexMatrix> beta;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const int d = integer(degrees[i], indexed(field + ".degrees", i));
    if (beta.count(d)) fail(indexed(field + ".degrees", i), "repeated degree " + std::to_string(d));
    beta[d] = matrix_from_json(coeffs[i], indexed(field + ".coefficients", i));
  }
  return GradedElement::from_beta(model, std::move(beta));
}

Json normal_form_to_json(const NormalForm& nf) {
  bool real = true;
  for (const auto& c : nf.p.coeffs()) real = real && c.imag() == 0.0;
  Json p = Json::array();
  for (const auto& c : nf.p.coeffs()) p.push_back(real ? Json(c.real()) : complex_to(c));
  return Json{{"l", nf.l}, {"m", nf.m}, {"p", p}};
}

NormalForm normal_form_from_json(const Json& j, const std::string& field) {
  NormalForm nf;
  nf.l = integer(member(j, "l", field), field + ".l");
  nf.m = integer(member(j, "m", field), field + ".m");
  if (nf.l < 0 || nf.m < 0) fail(field, "l and m must be nonnegative");
  const auto& p = array(member(j, "p", field), field + ".p");
  std::vector<Complex> c;
  for (std::size_t i = 0; i < p.size(); ++i) c.push_back(complex_from(p[i], indexed(field + ".p", i)));
  nf.p = Polynomial<Complex>(std::move(c));
  return nf;
}

Json model_spec_to_json(const ModelSpec& s) {
  Json j{{"kind", kind_name(s.kind)}};
  switch (s.kind) {
    case ModelKind::weighted_shift:
      j["dim"] = s.dim > 0 ? s.dim : static_cast<int>(s.weights.size()) + 1;
      j["weights"] = s.weights;
      break;
    case ModelKind::q_oscillator:
      j["dim"] = s.dim;
      j["q"] = s.q;
      j["h"] = s.h;
      break;
    case ModelKind::normal: {
      j["dim"] = static_cast<int>(s.diag.size());
      Json d = Json::array();
      for (const auto& c : s.diag) d.push_back(complex_to(c));
      j["diag"] = d;
      break;
    }
    case ModelKind::jordan_block: j["dim"] = s.dim; break;
    case ModelKind::custom:
      j["dim"] = s.matrix.rows();
      j["matrix"] = matrix_to_json(s.matrix);
      break;
  }
  if (s.id) j["id"] = *s.id;
  return j;
}

ModelSpec model_spec_from_json(const Json& j, const std::string& field) {
  ModelSpec s;
  const auto& kind = member(j, "kind", field);
  if (!kind.is_string()) fail(field + ".kind", "expected a string");
  try {
    s.kind = parse_kind(kind.get<std::string>());
  } catch (const InvalidSpec& e) {
    fail(field + ".kind", e.what());
  }
  if (j.contains("dim")) s.dim = integer(j["dim"], field + ".dim");
  if (j.contains("weights")) {
    const auto& w = array(j["weights"], field + ".weights");
    for (std::size_t i = 0; i < w.size(); ++i) s.weights.push_back(number(w[i], indexed(field + ".weights", i)));
  }
  if (j.contains("q")) s.q = number(j["q"], field + ".q");
  if (j.contains("h")) s.h = number(j["h"], field + ".h");
  if (j.contains("diag")) {
    const auto& d = array(j["diag"], field + ".diag");
    for (std::size_t i = 0; i < d.size(); ++i) s.diag.push_back(complex_from(d[i], indexed(field + ".diag", i)));
  }
  if (j.contains("matrix")) s.matrix = matrix_from_json(j["matrix"], field + ".matrix");
  if (j.contains("id")) {
    if (!j["id"].is_string()) fail(field + ".id", "expected a string");
    s.id = j["id"].get<std::string>();
  }
  return s;
}

Json check_to_json(const Check& c) {
  Json j{{"name", c.name},        {"paper_anchor", c.anchor}, {"pass", c.pass},
         {"residual", c.residual}, {"elapsed_ms", c.elapsed_ms}};
  if (c.skipped) j["skipped"] = true;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json checks_to_json(const std::vector<Check>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(check_to_json(c));
  return out;
}

}  // namespace polarkit

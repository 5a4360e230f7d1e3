#include "polarkit/io.hpp"
#include "polarkit/isometry.hpp"
#include "polarkit/relation.hpp"
#include "polarkit/report.hpp"
#include "polarkit/tower.hpp"
#include "polarkit/words.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

using namespace polarkit;

namespace {

struct Common {
  double tol = kDefaultTol;
  int kmax = 64;
  std::uint64_t seed = 0;
  std::string report = "text";
  std::string out;
};

struct Operand {
  std::string matrix_path;
  std::string model_path;
  std::string zoo_name;

  void attach(CLI::App* sub) {
    auto* g = sub->add_option_group("operand");
    g->add_option("--matrix", matrix_path, "matrix JSON file");
    g->add_option("--model", model_path, "model spec JSON file");
    g->add_option("--zoo", zoo_name, "name of a built-in model");
    g->require_option(1);
  }

  std::pair<std::string, ComplexMatrix> load() const {
    if (!matrix_path.empty()) return {matrix_path, read_matrix(matrix_path)};
    if (!model_path.empty()) {
      const auto spec = model_spec_from_json(read_json_file(model_path), model_path);
      return {spec.name(), build(spec)};
    }
    for (const auto& s : zoo())
      if (s.name() == zoo_name) return {s.name(), build(s)};
    throw ConfigError("no built-in model named '" + zoo_name + "'");
  }
};

void emit(const Common& c, const Json& j, const std::string& text) {
  if (!c.out.empty()) write_json_file(c.out, j);
  if (c.report == "json")
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text;
}

std::string checks_text(const std::vector<Check>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.skipped ? "SKIP " : c.pass ? "PASS " : "FAIL ") << c.name << " residual " << c.residual;
    if (!c.note.empty()) os << " (" << c.note << ")";
    os << '\n';
  }
  return os.str();
}

std::string poly_text(const Json& p) { return p.dump(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polar decompositions, endomorphism towers and graded norm estimates for matrix models"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--tol", common.tol, "numerical tolerance")->envname("POLARKIT_TOL")->capture_default_str();
  app.add_option("--kmax", common.kmax, "largest k in norm estimates")->capture_default_str();
  app.add_option("--seed", common.seed, "random seed")->capture_default_str();
  app.add_option("--report", common.report, "stdout format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_option("--out", common.out, "write the JSON result here");

  auto* polar = app.add_subcommand("polar-decompose", "a = U|a|");
  Operand polar_in;
  polar_in.attach(polar);

  auto* relation = app.add_subcommand("verify-relation", "test aa* in C*(1, a*a)");
  Operand relation_in;
  relation_in.attach(relation);

  auto* theorems = app.add_subcommand("verify-theorems", "structure checks for {1, |a|, U} and the coefficient algebra");
  Operand theorems_in;
  theorems_in.attach(theorems);

  auto* tower = app.add_subcommand("tower", "extension towers of A0 under U");
  Operand tower_in;
  tower_in.attach(tower);
  std::string tower_algebra;
  bool exchange = false;
  tower->add_option("--algebra", tower_algebra, "A0 as algebra JSON (default C*(1, |a|))");
  tower->add_flag("--exchange-roles", exchange, "run the construction on U*");

  auto* norm = app.add_subcommand("norm-estimate", "norm of a graded element from N_0((bb*)^{2k})");
  Operand norm_in;
  norm_in.attach(norm);
  std::string element_path;
  norm->add_option("--element", element_path, "graded element JSON (default a + a*)");

  auto* order = app.add_subcommand("normal-order", "normal form of a word in a, a*");
  order->set_help_flag("--help", "Print this help message and exit");
  std::string word_text;
  std::string q_text = "1";
  std::string h_text = "1";
  bool exact = false;
  order->add_option("word", word_text, "letters 'a' and 'a*' separated by spaces")->required();
  order->add_option("--q", q_text, "q in aa* = q a*a + h")->capture_default_str();
  order->add_option("--h", h_text, "h in aa* = q a*a + h")->capture_default_str();
  order->add_flag("--exact", exact, "rational arithmetic; q and h may be fractions like 1/2");

  auto* info = app.add_subcommand("algebra-info", "dimension, commutativity and commutants");
  std::string info_algebra;
  std::string info_matrix;
  auto* info_group = info->add_option_group("input");
  info_group->add_option("--algebra", info_algebra, "algebra JSON");
  info_group->add_option("--matrix", info_matrix, "generate the unital algebra of this matrix");
  info_group->require_option(1);

  auto* suite = app.add_subcommand("run-suite", "run verification suites from a config file");
  std::string config_path;
  std::vector<std::string> suite_override;
  bool zoo_models = false;
  bool timings = false;
  suite->add_option("--config", config_path, "suite config JSON");
  suite->add_option("--suites", suite_override, "override the configured suites");
  suite->add_flag("--zoo", zoo_models, "use the built-in model list");
  suite->add_flag("--timings", timings, "record elapsed times (reports are then not reproducible)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (polar->parsed()) {
      const auto [name, a] = polar_in.load();
      const auto p = polar_decompose(a, common.tol);
      const double residual = operator_norm(a - p.U * p.absA);
      const Json j{{"model", name},
                   {"rank", p.rank},
                   {"residual", residual},
                   {"U", matrix_to_json(p.U)},
                   {"abs", matrix_to_json(p.absA)}};
      std::ostringstream os;
      os << name << ": rank " << p.rank << ", ||a - U|a||| = " << residual << '\n';
      emit(common, j, os.str());
      return 0;
    }
    if (relation->parsed()) {
      const auto [name, a] = relation_in.load();
      const auto cert = verify_I1(a, common.tol);
      Json table = Json::array();
      for (const auto& [x, y] : cert.gamma_table) table.push_back({x, y});
      Json j{{"model", name},
             {"holds", cert.holds},
             {"membership_residual", cert.membership_residual},
             {"holds_polar_form", cert.holds_polar_form},
             {"polar_form_residual", cert.polar_form_residual},
             {"forms_agree", cert.forms_agree},
             {"gamma", table}};
      if (!cert.holds) j["offending_eigenvalue"] = cert.offending_eigenvalue;
      std::ostringstream os;
      os << name << ": relation " << (cert.holds ? "holds" : "fails") << ", residual " << cert.membership_residual;
      if (cert.holds) {
        os << "\n  gamma:";
        for (const auto& [x, y] : cert.gamma_table) os << ' ' << x << "->" << y;
      } else {
        os << ", offending eigenvalue " << cert.offending_eigenvalue;
      }
      os << '\n';
      emit(common, j, os.str());
      return cert.holds && cert.forms_agree ? 0 : 1;
    }
    if (theorems->parsed()) {
      const auto [name, a] = theorems_in.load();
      auto checks = theorem22_report(a, common.tol);
      const auto coeff = coefficient_algebra(a, common.tol);
      checks.insert(checks.end(), coeff.checks.begin(), coeff.checks.end());
      const Json j{{"model", name}, {"pass", all_pass(checks)}, {"checks", checks_to_json(checks)}};
      emit(common, j, checks_text(checks));
      return all_pass(checks) ? 0 : 1;
    }
    if (tower->parsed()) {
      const auto [name, a] = tower_in.load();
      const auto p = polar_decompose(a, common.tol);
      const EndoPair pair(p.U, common.tol);
      const auto a0 = tower_algebra.empty() ? generate({p.absA}, true, a.rows())
                                            : algebra_from_json(read_json_file(tower_algebra), tower_algebra);
      auto t = build_tower(a0, pair, common.tol, exchange);
      const auto theorems_checks = verify_tower_theorems(t, pair, common.tol);
      t.checks.insert(t.checks.end(), theorems_checks.begin(), theorems_checks.end());
      auto dims = [](const std::vector<MatrixAlgebra>& xs) {
        std::vector<Eigen::Index> out;
        for (const auto& x : xs) out.push_back(x.dim());
        return out;
      };
      const Json j{{"model", name},
                   {"dims",
                    {{"a0", t.a0.dim()},
                     {"a_inf", t.a_inf.dim()},
                     {"inf_a", t.inf_a.dim()},
                     {"inf_a_inf", t.inf_a_inf.dim()},
                     {"inf_a_closure", t.inf_a_closure.dim()}}},
                   {"forward", dims(t.forward)},
                   {"backward", dims(t.backward)},
                   {"forward_backward", dims(t.forward_backward)},
                   {"backward_forward", dims(t.backward_forward)},
                   {"indices",
                    {{"forward", t.forward_index},
                     {"backward", t.backward_index},
                     {"forward_backward", t.forward_backward_index},
                     {"backward_forward", t.backward_forward_index}}},
                   {"exchanged_roles", t.exchanged_roles},
                   {"pass", all_pass(t.checks)},
                   {"checks", checks_to_json(t.checks)}};
      std::ostringstream os;
      os << name << ": dim A0 " << t.a0.dim() << ", A_inf " << t.a_inf.dim() << ", _inf A " << t.inf_a.dim()
         << ", _inf(A_inf) " << t.inf_a_inf.dim() << '\n'
         << checks_text(t.checks);
      emit(common, j, os.str());
      return all_pass(t.checks) ? 0 : 1;
    }
    if (norm->parsed()) {
      const auto [name, a] = norm_in.load();
      const auto model = graded_model_for(a, name, common.tol);
      const auto g = element_path.empty() ? regrade(a + a.adjoint(), model, common.tol)
                                          : graded_from_json(read_json_file(element_path), model, element_path);
      NormEstimateOptions opts;
      opts.kmax = common.kmax;
      const auto est = norm_estimate(g, opts);
      const double dense = operator_norm(realize(g));
      const Json j{{"model", name},          {"ks", est.ks},          {"estimates", est.estimates},
                   {"upper_bounds", est.upper_bounds}, {"final", est.final}, {"dense", dense},
                   {"bandwidth", est.bandwidth}};
      std::ostringstream os;
      os.precision(12);
      os << name << ": estimate " << est.final << ", dense " << dense << ", bandwidth " << est.bandwidth << '\n';
      for (std::size_t i = 0; i < est.ks.size(); ++i)
        os << "  k " << est.ks[i] << ": " << est.estimates[i] << " <= ||b|| <= " << est.upper_bounds[i] << '\n';
      emit(common, j, os.str());
      return 0;
    }
    if (order->parsed()) {
      const Word w = Word::parse(word_text);
      NormalForm nf;
      if (exact) {
        Rational q;
        Rational h;
        try {
          q = Rational(q_text);
          h = Rational(h_text);
        } catch (const std::exception&) {
          throw ParseError("--q/--h: expected rationals such as 1/2");
        }
        nf = to_double(normal_order(w, q, h));
      } else {
        double q = 0.0;
        double h = 0.0;
        try {
          q = std::stod(q_text);
          h = std::stod(h_text);
        } catch (const std::exception&) {
          throw ParseError("--q/--h: expected numbers");
        }
        nf = normal_order(w, PhiMap::affine(q, h));
      }
      Json j = normal_form_to_json(nf);
      j["deg"] = deg(w);
      std::ostringstream os;
      os << "l=" << nf.l << " m=" << nf.m << " p=" << poly_text(j["p"]) << " deg=" << deg(w) << '\n';
      emit(common, j, os.str());
      return 0;
    }
    if (info->parsed()) {
      const auto alg = info_algebra.empty() ? generate({read_matrix(info_matrix)}, true)
                                            : algebra_from_json(read_json_file(info_algebra), info_algebra);
      const auto comm = commutant(alg, common.tol);
      const auto bicomm = bicommutant(alg, common.tol);
      const Json j{{"ambient_dim", alg.ambient_dim()},
                   {"dim", alg.dim()},
                   {"unital", alg.unital()},
                   {"commutative", is_commutative(alg, common.tol)},
                   {"commutativity_defect", commutativity_defect(alg)},
                   {"closure_defect", alg.closure_defect()},
                   {"commutant_dim", comm.dim()},
                   {"bicommutant_dim", bicomm.dim()}};
      std::ostringstream os;
      os << "dim " << alg.dim() << " in M_" << alg.ambient_dim() << ", "
         << (is_commutative(alg, common.tol) ? "commutative" : "noncommutative") << ", commutant dim " << comm.dim()
         << ", bicommutant dim " << bicomm.dim() << '\n';
      emit(common, j, os.str());
      return 0;
    }
    if (suite->parsed()) {
      SuiteConfig config;
      if (!config_path.empty()) config = SuiteConfig::from_json(read_json_file(config_path));
      if (zoo_models) config.models = zoo();
      if (!suite_override.empty()) config.suites = suite_override;
      if (config.suites.empty() && config_path.empty()) config.suites = suite_names();
      if (app.get_option("--tol")->count() > 0 || (config_path.empty() && std::getenv("POLARKIT_TOL")))
        config.tol = common.tol;
      if (app.get_option("--kmax")->count() > 0) config.kmax = common.kmax;
      if (app.get_option("--seed")->count() > 0) config.seed = common.seed;
      if (!common.out.empty()) config.output = common.out;
      config.timings = timings;
      const auto report = run_suite(config);
      const Json j = report.to_json();
      if (!config.output.empty()) write_json_file(config.output, j);
      if (common.report == "json")
        std::cout << j.dump(2) << '\n';
      else
        std::cout << report.summary();
      return exit_code(report);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidSpec& e) {
    std::cerr << "invalid model: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 2;
}

#pragma once

#include "polarkit/algebra.hpp"
#include "polarkit/check.hpp"
#include "polarkit/core.hpp"
#include "polarkit/graded.hpp"
#include "polarkit/models.hpp"
#include "polarkit/words.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace polarkit {

using Json = nlohmann::json;

/// Parse text; ParseError carries "<where>:<line>:<column>".
Json parse_json(const std::string& text, const std::string& where = "<input>");
Json read_json_file(const std::string& path);
/// Two-space indented dump followed by a newline.
void write_json_file(const std::string& path, const Json& j);

/// {"dim": N, "entries": [[re, im], ...]} row-major.
Json matrix_to_json(const ComplexMatrix& m);
/// `field` prefixes error messages, e.g. "coefficients[2]".
ComplexMatrix matrix_from_json(const Json& j, const std::string& field = "matrix");
ComplexMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const ComplexMatrix& m);

/// {"unital": bool, "elements": [matrix, ...]}; elements are read as generators.
Json algebra_to_json(const MatrixAlgebra& a);
MatrixAlgebra algebra_from_json(const Json& j, const std::string& field = "algebra");

/// {"degrees": [...], "coefficients": [matrix, ...], "model_id": id}, with the
/// beta coefficients. Reading throws ModelMismatch when the ids differ.
Json graded_to_json(const GradedElement& g);
GradedElement graded_from_json(const Json& j, const ModelPtr& model, const std::string& field = "graded");

/// {"l": l, "m": m, "p": [...]}; coefficients are numbers when real and
/// [re, im] pairs otherwise.
Json normal_form_to_json(const NormalForm& nf);
NormalForm normal_form_from_json(const Json& j, const std::string& field = "normal_form");

/// {"kind", "dim", "weights", "q", "h", "diag", "matrix", "id"}; absent keys
/// take the ModelSpec defaults.
Json model_spec_to_json(const ModelSpec& s);
ModelSpec model_spec_from_json(const Json& j, const std::string& field = "model");

Json check_to_json(const Check& c);
Json checks_to_json(const std::vector<Check>& cs);

}  // namespace polarkit

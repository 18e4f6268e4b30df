#pragma once

#include <string>

#include "json.hpp"

#include "nogo/observable.hpp"

namespace nogo::io {

using nlohmann::json;

// Exact entries are quadruples [a,b,c,d] meaning (a+b sqrt2) + i(c+d sqrt2);
// each component is an integer or a "p/q" string. Float entries are
// {"re":..., "im":...} objects (bare numbers are accepted as purely real).

Rational parse_rational(const json& j);
ExactScalar parse_exact_scalar(const json& j);
Cplx parse_float_scalar(const json& j);

json to_json(const ExactScalar& s);
json to_json(Cplx z);

bool exact_mode(const json& file);  // "scalars": "exact" | "float" (default)

Ray parse_ray(const json& coords, bool exact);
json ray_to_json(const Ray& r);

Matrix parse_matrix(const json& entries, int dim);            // row-major
ExactMatrix parse_exact_matrix(const json& entries, int dim); // row-major
json matrix_to_json(const Matrix& m);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

}  // namespace nogo::io

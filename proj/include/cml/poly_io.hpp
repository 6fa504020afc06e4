#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cml/poly.hpp"

namespace cml {

using json = nlohmann::json;

// {"n": int, "terms": [{"c": "decimal", "e": [int, ...]}]}. "c" may also be a
// JSON integer on input; output always uses strings. Unknown keys rejected.
IntPolynomial poly_from_json(const json& j);
json poly_to_json(const IntPolynomial& p);

// {"n1": int, "n2": int, "R": int, "polys": [poly, ...]}
BihomSystem system_from_json(const json& j);
json system_to_json(const BihomSystem& sys);

json rational_to_json(const Rational& q);
Rational rational_from_json(const json& j);

json load_json_file(const std::filesystem::path& path);

// Parses an expression such as "x1^2*y1^2 - 3*x2*y2 + 7" over the given
// variable names. Supports + - * ^ (non-negative integer powers), integer
// literals and parentheses.
IntPolynomial parse_poly(std::string_view expr, const std::vector<std::string>& names);
// Names x1..xn1, y1..yn2.
std::vector<std::string> block_names(std::size_t n1, std::size_t n2);
// Names x1..xn.
std::vector<std::string> plain_names(std::size_t n);

}  // namespace cml

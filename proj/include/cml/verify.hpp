#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cml/poly.hpp"

namespace cml {

struct Check {
  std::string battery;
  std::string name;
  bool passed = false;
  bool advisory = false;  // rests on an estimated codimension
  nlohmann::json detail;
};

struct VerifyReport {
  std::string battery;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool all_passed() const;
};

// Seeded random systems with n1 + n2 <= 4: alternating bilinear (R = 1 or 2)
// and biquadratic (R = 1), small nonzero integer coefficients. Portable: only
// raw mt19937_64 output is used.
std::vector<BihomSystem> random_small_systems(std::size_t count, std::uint64_t seed);

// Diagonal forms sum a_i x_i^d with nonzero a_i in [-3, 3] \ {0}.
IntPolynomial random_diagonal_form(std::size_t n, int d, std::uint64_t seed);

// battery: "diagonal", "bilinear", "identities" or "all".
VerifyReport run_verify(const std::string& battery, std::uint64_t seed);

nlohmann::json to_json(const VerifyReport& r);

}  // namespace cml

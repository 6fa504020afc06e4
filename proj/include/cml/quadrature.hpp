#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cml/budget.hpp"
#include "cml/poly.hpp"

namespace cml {

// kind "grid": tensor rule with points_per_axis nodes per axis, rule
// "midpoint" (default) or "gauss" (composite 4-point Gauss-Legendre panels).
// kind "qmc": `samples` Halton points with a Cranley-Patterson shift drawn
// from `seed`.
struct QuadratureSpec {
  std::string kind = "grid";
  std::string rule = "midpoint";
  std::size_t points_per_axis = 128;
  std::size_t samples = std::size_t{1} << 20;
  std::uint64_t seed = 0;
};

QuadratureSpec quadrature_from_json(const nlohmann::json& j);
nlohmann::json quadrature_to_json(const QuadratureSpec& spec);

struct ComplexEstimate {
  std::complex<double> value;
  double error = 0.0;
  std::uint64_t evaluations = 0;
};

// I(tau) = integral over [0,1]^n of e(sum_r tau_r G_r(v)). A variable in
// which every G_r is at most linear is integrated exactly. The error bar
// compares the rule against the same rule at half resolution (half the
// samples for qmc).
ComplexEstimate singular_integral_I(const std::vector<IntPolynomial>& G,
                                    std::span<const double> tau, const QuadratureSpec& spec,
                                    const Budget& budget = Budget::quadrature());

struct JEstimate {
  double L = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::uint64_t evaluations = 0;
};

// J(L) = integral of I(tau) over [-L, L]^R, via the kernel
// prod_r sin(2 pi L G_r) / (pi G_r). R = 1 or 2.
JEstimate J_of_L(const std::vector<IntPolynomial>& G, double L, const QuadratureSpec& spec,
                 const Budget& budget = Budget::quadrature());

struct MuInfinity {
  std::vector<JEstimate> J;
  // a from the fit J(L) = a + b / L through the two largest L.
  double mu_infinity = 0.0;
};

MuInfinity J_and_mu_infinity(const std::vector<IntPolynomial>& G, std::span<const double> Ls,
                             const QuadratureSpec& spec,
                             const Budget& budget = Budget::quadrature());

}  // namespace cml

#include <doctest.h>

#include <cmath>

#include "cml/error.hpp"
#include "cml/quadrature.hpp"
#include "support.hpp"

using namespace cml;
using testing::S;

namespace {

// int_0^1 int_0^1 e(tau x y) dx dy by a 1000 x 1000 midpoint grid.
std::complex<double> midpoint_xy(double tau) {
  const int m = 1000;
  std::complex<double> s = 0;
  for (int i = 0; i < m; ++i) {
    const double x = (i + 0.5) / m;
    for (int j = 0; j < m; ++j) s += testing::e(tau * x * (j + 0.5) / m);
  }
  return s / double(m * m);
}

// int_0^1 (log u)^2 du with u = exp(-s): int_0^inf s^2 e^{-s} ds, Simpson on [0, 60].
double log_square_integral() {
  const int m = 60000;
  const double h = 60.0 / m;
  auto f = [](double s) { return s * s * std::exp(-s); };
  double acc = f(0) + f(60.0);
  for (int i = 1; i < m; ++i) acc += (i % 2 ? 4 : 2) * f(i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("I(0) = 1 exactly") {
    const auto G = S(2, 2, {"x1*y1 - x2*y2"});
    const std::vector<double> tau = {0.0};
    const auto r = singular_integral_I(G.top_parts(), tau, QuadratureSpec{});
    CHECK(r.value == std::complex<double>(1.0, 0.0));
  }

  TEST_CASE("I for x1 y1 against a refined midpoint oracle") {
    const auto G = S(1, 1, {"x1*y1"});
    for (double t : {1.0, -2.5}) {
      const std::vector<double> tau = {t};
      const auto r = singular_integral_I(G.top_parts(), tau, QuadratureSpec{});
      const auto want = midpoint_xy(t);
      CHECK(std::abs(r.value - want) < 1e-4);
    }
  }

  TEST_CASE("conjugation symmetry and rules agree") {
    const auto G = S(2, 1, {"x1^2*y1 - x2*y1 + x1*x2*y1"});
    const std::vector<double> tau = {0.7}, neg = {-0.7};
    QuadratureSpec spec;
    spec.points_per_axis = 64;
    const auto a = singular_integral_I(G.top_parts(), tau, spec);
    const auto b = singular_integral_I(G.top_parts(), neg, spec);
    CHECK(std::abs(a.value - std::conj(b.value)) < 1e-12);
    QuadratureSpec gauss = spec;
    gauss.rule = "gauss";
    QuadratureSpec qmc;
    qmc.kind = "qmc";
    qmc.samples = 1 << 16;
    qmc.seed = 4;
    const auto g = singular_integral_I(G.top_parts(), tau, gauss);
    const auto q = singular_integral_I(G.top_parts(), tau, qmc);
    CHECK(std::abs(a.value - g.value) < 1e-3);
    CHECK(std::abs(a.value - q.value) < 1e-2);
    const auto q2 = singular_integral_I(G.top_parts(), tau, qmc);
    CHECK(q.value == q2.value);
  }

  TEST_CASE("quadrature spec json") {
    const auto spec = quadrature_from_json(json::parse(R"({"kind": "qmc", "samples": 1000, "seed": 3})"));
    CHECK(spec.kind == "qmc");
    CHECK(spec.samples == 1000);
    CHECK(quadrature_from_json(quadrature_to_json(spec)).seed == 3);
    CHECK_THROWS_AS(quadrature_from_json(json::parse(R"({"kind": "grid", "bogus": 1})")), InputError);
    CHECK_THROWS_AS(quadrature_from_json(json::parse(R"({"kind": "sparse"})")), InputError);
  }

  TEST_CASE("J(L) for x1y1 - x2y2 approaches 2 at rate 1/L") {
    const double target = log_square_integral();
    CHECK(target == doctest::Approx(2.0).epsilon(1e-9));
    const auto G = S(2, 2, {"x1*y1 - x2*y2"});
    double prev = 1e9;
    for (double L : {4.0, 8.0, 16.0, 32.0}) {
      const auto j = J_of_L(G.top_parts(), L, QuadratureSpec{});
      const double dev = std::abs(j.value - target);
      CHECK(dev <= 3.0 / L);
      CHECK(dev < prev);
      prev = dev;
    }
    CHECK(J_of_L(G.top_parts(), 0.0, QuadratureSpec{}).value == 0.0);
    const std::vector<double> Ls = {16.0, 32.0};
    const auto mu = J_and_mu_infinity(G.top_parts(), Ls, QuadratureSpec{});
    CHECK(mu.J.size() == 2);
    CHECK(mu.mu_infinity == doctest::Approx(2.0).epsilon(0.02));
  }

  TEST_CASE("J(L) for a form vanishing to second order on the boundary") {
    // x1^2 y1^2 < eps on a set of measure ~ sqrt(eps) log(1/eps), so J(L)
    // grows like sqrt(L) log L rather than converging; it stays finite,
    // positive and sublinear, and the extrapolation is non-negative.
    const auto G = S(1, 1, {"x1^2*y1^2"});
    const std::vector<double> Ls = {4.0, 8.0, 16.0};
    const auto mu = J_and_mu_infinity(G.top_parts(), Ls, QuadratureSpec{});
    for (std::size_t i = 0; i < mu.J.size(); ++i) {
      CHECK(std::isfinite(mu.J[i].value));
      CHECK(mu.J[i].value > 0.0);
      if (i > 0) {
        CHECK(mu.J[i].value > mu.J[i - 1].value);
        CHECK(mu.J[i].value < 2.0 * mu.J[i - 1].value);
      }
    }
    CHECK(mu.mu_infinity >= 0.0);
  }

  TEST_CASE("J(L) with two forms") {
    const auto G = S(2, 2, {"x1*y1 - x2*y2", "x1*y2 - x2*y1"});
    QuadratureSpec spec;
    spec.points_per_axis = 32;
    const auto j = J_of_L(G.top_parts(), 2.0, spec);
    CHECK(std::isfinite(j.value));
    CHECK_THROWS_AS(J_of_L(S(2, 2, {"x1*y1", "x2*y2", "x1*y2"}).top_parts(), 2.0, spec), InputError);
  }

  TEST_CASE("quadrature budget") {
    const auto G = S(3, 3, {"x1*x2*y1*y2 + x3^2*y3^2"});
    QuadratureSpec spec;
    spec.points_per_axis = 1024;
    const std::vector<double> tau = {1.0};
    CHECK_THROWS_AS(singular_integral_I(G.top_parts(), tau, spec, Budget{1 << 20}), BudgetError);
  }
}

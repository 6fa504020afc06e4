#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "cml/arcs.hpp"
#include "cml/counting.hpp"
#include "cml/densities.hpp"
#include "cml/error.hpp"
#include "cml/geometry.hpp"
#include "cml/poly_io.hpp"
#include "cml/primes.hpp"
#include "cml/quadrature.hpp"
#include "cml/reports.hpp"
#include "cml/verify.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

py::object to_py(const cml::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::object fraction(const cml::Rational& value) {
  cml::Rational q = value;
  q.canonicalize();
  const auto fractions = py::module_::import("fractions");
  return fractions.attr("Fraction")(py::int_(py::str(q.get_num().get_str())),
                                    py::int_(py::str(q.get_den().get_str())));
}

cml::Rational rational(const py::object& value) {
  const auto f = py::module_::import("fractions").attr("Fraction")(value);
  cml::Rational q(cml::BigInt(py::str(f.attr("numerator")).cast<std::string>()),
                  cml::BigInt(py::str(f.attr("denominator")).cast<std::string>()));
  q.canonicalize();
  return q;
}

cml::BihomSystem make_system(std::size_t n1, std::size_t n2, const std::vector<std::string>& exprs) {
  std::vector<cml::IntPolynomial> polys;
  for (const auto& e : exprs) polys.push_back(cml::parse_poly(e, cml::block_names(n1, n2)));
  return cml::BihomSystem(n1, n2, std::move(polys));
}

cml::IntPolynomial make_poly(const std::string& expr, std::size_t n) {
  return cml::parse_poly(expr, cml::plain_names(n));
}

cml::PrimeTable primes_to(std::uint64_t limit) {
  return cml::PrimeTable::sieve(std::max<std::uint64_t>(limit, 2));
}

cml::Budget budget_or(std::uint64_t points, cml::Budget fallback) {
  return points ? cml::Budget{points} : fallback;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prime and semiprime solution counts, local densities, arcs and geometry checks";

  auto base = py::register_exception<cml::Error>(m, "CmlError", PyExc_RuntimeError);
  py::register_exception<cml::InputError>(m, "InputError", base.ptr());
  py::register_exception<cml::BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<cml::HypothesisError>(m, "HypothesisError", base.ptr());

  py::class_<cml::BihomSystem>(m, "System")
      .def(py::init(&make_system), "n1"_a, "n2"_a, "exprs"_a,
           "Forms over x1..x{n1}, y1..y{n2} given as expressions.")
      .def_static("from_json", [](const std::string& text) {
        return cml::system_from_json(cml::json::parse(text));
      })
      .def("to_json", [](const cml::BihomSystem& s) { return cml::system_to_json(s).dump(); })
      .def_property_readonly("n1", &cml::BihomSystem::n1)
      .def_property_readonly("n2", &cml::BihomSystem::n2)
      .def_property_readonly("R", &cml::BihomSystem::R)
      .def_property_readonly("d1", &cml::BihomSystem::d1)
      .def_property_readonly("d2", &cml::BihomSystem::d2)
      .def("__repr__", [](const cml::BihomSystem& s) {
        return "<System n1=" + std::to_string(s.n1()) + " n2=" + std::to_string(s.n2()) +
               " R=" + std::to_string(s.R()) + ">";
      });

  m.def("count_prime_solutions",
        [](const cml::BihomSystem& sys, std::uint64_t P1, std::uint64_t P2, std::size_t sample_cap,
           std::uint64_t budget) {
          const auto table = primes_to(std::max(P1, P2));
          return to_py(cml::to_json(cml::count_prime_solutions(
              sys, P1, P2, table, sample_cap, budget_or(budget, cml::Budget::count()))));
        },
        "system"_a, "P1"_a, "P2"_a, "sample_cap"_a = cml::kDefaultSampleCap, "budget"_a = 0);

  m.def("count_semiprime_solutions",
        [](const std::string& expr, std::size_t n, std::uint64_t N, std::uint64_t N1,
           std::uint64_t N2, std::size_t sample_cap, std::uint64_t budget) {
          const auto table = primes_to(std::max(N1, N2));
          return to_py(cml::to_json(cml::count_semiprime_solutions(
              make_poly(expr, n), N, N1, N2, table, sample_cap,
              budget_or(budget, cml::Budget::count()))));
        },
        "expr"_a, "n"_a, "N"_a, "N1"_a, "N2"_a, "sample_cap"_a = cml::kDefaultSampleCap,
        "budget"_a = 0);

  m.def("check_inequality",
        [](const std::string& expr, std::size_t n, std::uint64_t N, const py::object& delta,
           std::uint64_t budget) {
          const auto table = primes_to(N);
          return to_py(cml::to_json(cml::check_inequality_semiprime(
              make_poly(expr, n), N, rational(delta), table,
              budget_or(budget, cml::Budget::count()))));
        },
        "expr"_a, "n"_a, "N"_a, "delta"_a = py::str("1/2"), "budget"_a = 0);

  m.def("A", [](const cml::BihomSystem& sys, std::uint64_t q) { return fraction(cml::A_of_q(sys, q)); },
        "system"_a, "q"_a, "A(q) as an exact fraction.");

  m.def("nu", [](const cml::BihomSystem& sys, std::uint64_t p, unsigned t) {
    return py::int_(py::str(cml::nu_t(sys, p, t).get_str()));
  }, "system"_a, "p"_a, "t"_a);

  m.def("singular_series",
        [](const cml::BihomSystem& sys, const std::vector<std::uint64_t>& primes, unsigned level) {
          return to_py(cml::to_json(cml::singular_series(sys, primes, level)));
        },
        "system"_a, "primes"_a, "level"_a = 2);

  m.def("hensel_check",
        [](const cml::BihomSystem& sys, std::uint64_t p, unsigned t_max) {
          return to_py(cml::to_json(cml::hensel_check(sys, p, t_max)));
        },
        "system"_a, "p"_a, "t_max"_a = 3);

  m.def("J",
        [](const std::vector<std::string>& exprs, std::size_t n, const std::vector<double>& Ls,
           std::size_t points) {
          std::vector<cml::IntPolynomial> G;
          for (const auto& e : exprs) G.push_back(make_poly(e, n));
          cml::QuadratureSpec spec;
          spec.points_per_axis = points;
          return to_py(cml::to_json(cml::J_and_mu_infinity(G, Ls, spec)));
        },
        "exprs"_a, "n"_a, "L"_a, "points"_a = 128,
        "J(L) at each L and the extrapolated singular integral.");

  m.def("schedule",
        [](double min_codim, int d1, int d2, std::size_t R, double b, double delta0, double eps0,
           double C, double log_P) {
          cml::ScheduleParams p;
          p.min_codim = min_codim;
          p.d1 = d1;
          p.d2 = d2;
          p.R = R;
          p.b = b;
          p.delta0 = delta0;
          p.eps0 = eps0;
          p.C = C;
          p.log_P = log_P;
          return to_py(cml::to_json(cml::schedule(p)));
        },
        "min_codim"_a, "d1"_a = 2, "d2"_a = 2, "R"_a = 1, "b"_a = 1.0, "delta0"_a = 0.5,
        "eps0"_a = 1e-3, "C"_a = 10.0, "log_P"_a = 1000.0);

  m.def("locate",
        [](const std::vector<double>& alpha, double theta, double P1, double P2, int d1, int d2) {
          const cml::ArcGeometry geo{cml::log_P_of(P1, P2, d1, d2), d1, d2, alpha.size()};
          return to_py(cml::to_json(cml::major_arc_locate(alpha, theta, geo)));
        },
        "alpha"_a, "theta"_a, "P1"_a, "P2"_a, "d1"_a = 2, "d2"_a = 2);

  m.def("weyl_chain",
        [](const cml::BihomSystem& sys, const std::vector<double>& alpha, std::uint64_t P1,
           std::uint64_t P2) {
          const auto table = primes_to(std::max(P1, P2));
          return to_py(cml::to_json(cml::weyl_chain(sys, alpha, P1, P2, table)));
        },
        "system"_a, "alpha"_a, "P1"_a, "P2"_a);

  m.def("codim_halving",
        [](const std::string& expr, std::size_t n, const std::vector<std::uint64_t>& primes) {
          return to_py(cml::to_json(cml::verify_codim_halving(make_poly(expr, n), primes)));
        },
        "expr"_a, "n"_a, "primes"_a = std::vector<std::uint64_t>{5, 7});

  m.def("rank_locus_count",
        [](const cml::BihomSystem& sys, int block, std::uint64_t p) {
          return py::int_(
              py::str(cml::rank_locus_count(sys, cml::block_from_int(block), p).get_str()));
        },
        "system"_a, "block"_a, "p"_a);

  m.def("threshold_two_semiprimes",
        [](int d) { return py::int_(py::str(cml::threshold_two_semiprimes(d).get_str())); }, "d"_a);
  m.def("threshold_prime_comparison",
        [](std::uint64_t n, int d) { return to_py(cml::to_json(cml::threshold_prime_comparison(n, d))); },
        "n"_a, "d"_a);
  m.def("threshold_bihomogeneous",
        [](int d1, int d2, std::uint64_t R, const py::object& b) {
          return fraction(cml::threshold_bihomogeneous(d1, d2, R, rational(b)));
        },
        "d1"_a, "d2"_a, "R"_a, "b"_a = 1);
  m.def("threshold_semiprime_delta",
        [](int d, const py::object& delta) {
          return fraction(cml::threshold_semiprime_delta(d, rational(delta)));
        },
        "d"_a, "delta"_a);

  m.def("verify",
        [](const std::string& battery, std::uint64_t seed) {
          return to_py(cml::to_json(cml::run_verify(battery, seed)));
        },
        "battery"_a = "all", "seed"_a = 0);
}

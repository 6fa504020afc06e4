#include <doctest.h>

#include <random>

#include "cml/error.hpp"
#include "cml/poly.hpp"
#include "cml/poly_eval.hpp"
#include "cml/poly_io.hpp"
#include "support.hpp"

using namespace cml;
using testing::P;
using testing::S;

namespace {

IntPolynomial random_poly(std::mt19937_64& rng, std::size_t n, int max_deg, int terms,
                          bool homogeneous = false) {
  std::vector<Term> ts;
  for (int k = 0; k < terms; ++k) {
    Exponents e(n, 0);
    const int deg = homogeneous ? max_deg : static_cast<int>(rng() % (max_deg + 1));
    for (int d = 0; d < deg; ++d) ++e[rng() % n];
    ts.push_back({e, BigInt(static_cast<long>(rng() % 19) - 9)});
  }
  return IntPolynomial::from_terms(n, ts);
}

std::vector<long> random_point(std::mt19937_64& rng, std::size_t n, long lo = -20, long hi = 20) {
  std::vector<long> v(n);
  for (auto& x : v) x = lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  return v;
}

}  // namespace

TEST_SUITE("poly") {
  TEST_CASE("canonical form drops zeros and merges terms") {
    const auto p = IntPolynomial::from_terms(2, {{{1, 0}, BigInt(2)}, {{1, 0}, BigInt(-2)}, {{0, 1}, BigInt(3)}});
    CHECK(p.terms().size() == 1);
    CHECK(p.degree() == 1);
    CHECK(P("x1 - x1", 1).is_zero());
    CHECK(P("x1 - x1", 1).degree() == -1);
    CHECK(P("(x1 + x2)^2", 2) == P("x1^2 + 2*x1*x2 + x2^2", 2));
  }

  TEST_CASE("eval examples") {
    const auto f = P("x1*x2 - x3*x4", 4);
    CHECK(f.eval(testing::big({2, 3, 1, 6})) == 0);
    CHECK(P("x1^2 + x2^2", 2).eval_mod(testing::big({1, 1}), BigInt(3)) == 2);
    CHECK(P("x1 - 5", 1).eval_mod(testing::big({0}), BigInt(3)) == 1);
    CHECK_THROWS_AS(f.eval(testing::big({1, 2})), InputError);
    const std::vector<Rational> half = {Rational(1, 2), Rational(1, 3), Rational(1, 3), Rational(1, 2)};
    CHECK(f.eval(std::span<const Rational>(half)) == 0);
  }

  TEST_CASE("eval matches the term-by-term oracle, mod 97 too") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_poly(rng, 5, 3, 8);
      const auto pt = random_point(rng, 5);
      const BigInt want = testing::naive_eval(f, pt);
      CHECK(f.eval(testing::big(pt)) == want);
      BigInt r = want % 97;
      if (r < 0) r += 97;
      CHECK(f.eval_mod(testing::big(pt), BigInt(97)) == r);
      IntEvaluator ev(f);
      std::vector<std::int64_t> ip(pt.begin(), pt.end());
      CHECK(ev.eval(ip) == want);
    }
  }

  TEST_CASE("fast evaluator falls back on overflow") {
    const auto f = P("x1^5*x2^5", 2);
    IntEvaluator ev(f);
    const std::vector<std::int64_t> pt = {1'000'000, 1'000'000};
    CHECK_FALSE(ev.try_eval(pt).has_value());
    CHECK(ev.eval(pt) == testing::naive_eval(f, {1'000'000, 1'000'000}));
  }

  TEST_CASE("ring laws at evaluation level") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = random_poly(rng, 3, 4, 5);
      const auto b = random_poly(rng, 3, 4, 5);
      const auto pt = testing::big(random_point(rng, 3));
      CHECK((a + b).eval(pt) == a.eval(pt) + b.eval(pt));
      CHECK((a - b).eval(pt) == a.eval(pt) - b.eval(pt));
      CHECK((a * b).eval(pt) == a.eval(pt) * b.eval(pt));
      CHECK(a.pow(3).eval(pt) == a.eval(pt) * a.eval(pt) * a.eval(pt));
    }
  }

  TEST_CASE("partial derivatives") {
    const auto names = block_names(1, 1);
    const auto g = parse_poly("x1^2*y1^2", names);
    CHECK(g.derivative(0) == parse_poly("2*x1*y1^2", names));
    CHECK(P("x1*x2 - x3*x4", 4).derivative(2) == P("-x4", 4));
    CHECK_THROWS_AS(g.derivative(2), InputError);
  }

  TEST_CASE("Euler identity for homogeneous forms") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      const auto F = random_poly(rng, 4, 3, 6, true);
      if (F.is_zero()) continue;
      REQUIRE(F.is_homogeneous());
      for (int k = 0; k < 10; ++k) {
        const auto pt = testing::big(random_point(rng, 4));
        BigInt lhs = 0;
        for (std::size_t j = 0; j < 4; ++j) lhs += pt[j] * F.derivative(j).eval(pt);
        CHECK(lhs == F.degree() * F.eval(pt));
      }
    }
  }

  TEST_CASE("top homogeneous part") {
    CHECK(top_homogeneous_part(P("x1^2 + x1 + 3", 1), 2) == P("x1^2", 1));
    const auto F = P("x1*x2 - x3*x4", 4);
    CHECK(top_homogeneous_part(F, 2) == F);
    CHECK(top_homogeneous_part(P("x1*x2 - 6", 2), 2) == P("x1*x2", 2));
    CHECK(top_homogeneous_part(F, 5).is_zero());
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
      const auto a = random_poly(rng, 3, 4, 6);
      const auto b = random_poly(rng, 3, 4, 6);
      const auto t = top_homogeneous_part(a, 3);
      CHECK(top_homogeneous_part(t, 3) == t);
      CHECK(top_homogeneous_part(a + b, 3) == t + top_homogeneous_part(b, 3));
    }
  }

  TEST_CASE("system top parts and bidegree") {
    const auto sys = S(1, 1, {"x1*y1 - 6"});
    CHECK(sys.d1() == 1);
    CHECK(sys.d2() == 1);
    CHECK(sys.top_part(0) == parse_poly("x1*y1", block_names(1, 1)));
    CHECK_FALSE(sys.degrees_exceed_one());
    CHECK_THROWS_AS(S(1, 1, {"x1^2 + y1^2"}), InputError);
    CHECK_THROWS_AS(S(2, 2, {"x1*y1^2", "x1^2*y1"}), InputError);
    // Forms below the common top degree contribute a zero top part.
    const auto mixed = S(2, 2, {"x1*y1", "x1^2*y1^2"});
    CHECK(mixed.top_part(0).is_zero());
    CHECK(mixed.total_degree() == 4);
  }

  TEST_CASE("bihomogenize") {
    const auto G = bihomogenize(P("x1^2 + x2^2", 2));
    CHECK(G.n1() == 2);
    CHECK(G.n2() == 2);
    CHECK(G.poly(0) == parse_poly("x1^2*y1^2 + x2^2*y2^2", block_names(2, 2)));
    CHECK(G.d1() == 2);
    CHECK(G.d2() == 2);
    CHECK_THROWS_AS(bihomogenize(P("x1^2 + x2", 2)), InputError);

    const auto H = bihomogenize(P("x1*x2 - x3*x4", 4));
    std::mt19937_64 rng(9);
    for (long s = -3; s <= 3; ++s) {
      for (long t = -3; t <= 3; ++t) {
        const auto xy = random_point(rng, 8, -5, 5);
        auto scaled = xy;
        for (std::size_t i = 0; i < 4; ++i) scaled[i] *= s;
        for (std::size_t i = 4; i < 8; ++i) scaled[i] *= t;
        CHECK(H.top_part(0).eval(testing::big(scaled)) ==
              s * s * t * t * H.top_part(0).eval(testing::big(xy)));
      }
    }

    for (int k = 0; k < 10; ++k) {
      const auto F = random_poly(rng, 3, 3, 5, true);
      if (F.is_zero()) continue;
      const auto G3 = bihomogenize(F);
      auto x = random_point(rng, 3);
      auto xy = x;
      xy.insert(xy.end(), {1, 1, 1});
      CHECK(G3.poly(0).eval(testing::big(xy)) == F.eval(testing::big(x)));
    }
  }

  TEST_CASE("substitute products handles non-homogeneous f") {
    const auto g = substitute_products(P("x1 - x2 + 3", 2));
    CHECK(g == parse_poly("x1*y1 - x2*y2 + 3", block_names(2, 2)));
  }

  TEST_CASE("weyl difference") {
    const auto d = weyl_difference(S(1, 1, {"x1*y1"}));
    CHECK(d.n1() == 2);
    CHECK(d.n2() == 2);
    // variables (x1, x1', y1, y1')
    CHECK(d.poly(0) == P("x1*x3 - x1*x4 - x2*x3 + x2*x4", 4));

    const auto sys = S(2, 2, {"x1^2*y1^2 - 3*x1*x2*y2^2 + x2*y1 - 7"});
    const auto D = weyl_difference(sys);
    // D(x, x; y, y') vanishes identically: substitute x' -> x.
    std::vector<IntPolynomial> subs;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t target = (i == 2 || i == 3) ? i - 2 : i;
      subs.push_back(IntPolynomial::variable(8, target));
    }
    CHECK(D.top_part(0).compose(subs).is_zero());
    CHECK(D.poly(0).compose(subs).is_zero());
    CHECK(D.d1() == 2);
    CHECK(D.d2() == 2);

    std::mt19937_64 rng(21);
    const auto g = sys.poly(0);
    for (int k = 0; k < 20; ++k) {
      const auto u = random_point(rng, 8, -6, 6);
      auto at = [&](std::size_t xo, std::size_t yo) {
        return g.eval(testing::big({u[xo], u[xo + 1], u[yo], u[yo + 1]}));
      };
      const BigInt want = at(0, 4) - at(0, 6) - at(2, 4) + at(2, 6);
      CHECK(D.poly(0).eval(testing::big(u)) == want);
    }
  }

  TEST_CASE("restriction") {
    const auto G = bihomogenize(P("x1^2 + x2^2", 2));
    const std::vector<std::size_t> x0 = {0};
    const auto F = restrict_zero(G, x0, {});
    CHECK(F.n1() == 1);
    CHECK(F.n2() == 2);
    CHECK(F.poly(0) == parse_poly("x1^2*y2^2", block_names(1, 2)));
    CHECK(restrict_zero(G, {}, {}).poly(0) == G.poly(0));
    const std::vector<std::size_t> all_x = {0, 1}, all_y = {0, 1};
    CHECK_THROWS_AS(restrict_zero(G, all_x, all_y), InputError);

    const auto sys = S(2, 2, {"x1*y1*y2 + 2*x2*y2^2 - x1*y1^2 + 5*x2"});
    const std::vector<std::size_t> xz = {1}, yz = {0};
    const auto R = restrict_zero(sys, xz, yz);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 10; ++k) {
      const auto pt = random_point(rng, 2);
      CHECK(R.poly(0).eval(testing::big(pt)) == sys.poly(0).eval(testing::big({pt[0], 0, 0, pt[1]})));
    }
  }

  TEST_CASE("json round trip and unknown keys") {
    const auto sys = S(2, 1, {"x1*y1 - 12345678901234567890*x2*y1"});
    const auto j = system_to_json(sys);
    const auto back = system_from_json(j);
    CHECK(back.poly(0) == sys.poly(0));
    CHECK(j["polys"][0]["terms"][0]["c"].is_string());
    auto bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_AS(system_from_json(bad), InputError);
    const json pj = json::parse(R"({"n": 2, "terms": [{"c": 3, "e": [1, 1]}, {"c": "-2", "e": [0, 0]}]})");
    CHECK(poly_from_json(pj) == P("3*x1*x2 - 2", 2));
    CHECK_THROWS_AS(poly_from_json(json::parse(R"({"n": 2, "terms": [{"c": "1", "e": [1]}]})")), InputError);
  }

  TEST_CASE("parser errors") {
    CHECK_THROWS_AS(P("x1 +", 1), InputError);
    CHECK_THROWS_AS(P("x3", 2), InputError);
    CHECK_THROWS_AS(P("x1^-1", 1), InputError);
    CHECK(P("-(x1 - 2)*3", 1) == P("6 - 3*x1", 1));
  }
}

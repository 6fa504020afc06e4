#include <doctest.h>

#include <cmath>
#include <random>

#include "cml/arcs.hpp"
#include "cml/error.hpp"
#include "cml/primes.hpp"
#include "support.hpp"

using namespace cml;
using testing::S;

namespace {

// Exact phase alpha * v mod 1 for alpha = num/den.
double phase(long num, long den, const BigInt& v) {
  BigInt r = (v * num) % den;
  if (r < 0) r += den;
  return r.get_d() / static_cast<double>(den);
}

std::complex<double> S_oracle(const BihomSystem& sys, long num, long den, std::uint64_t P1,
                              std::uint64_t P2) {
  std::vector<long> px, py;
  for (long v = 2; v <= static_cast<long>(P1); ++v) {
    if (testing::is_prime_trial(v)) px.push_back(v);
  }
  for (long v = 2; v <= static_cast<long>(P2); ++v) {
    if (testing::is_prime_trial(v)) py.push_back(v);
  }
  std::complex<double> s = 0;
  const std::size_t n1 = sys.n1(), n2 = sys.n2();
  testing::each_tuple(n1 + n2, std::max(px.size(), py.size()), [&](const std::vector<long>& idx) {
    std::vector<long> pt(n1 + n2);
    double w = 1;
    for (std::size_t i = 0; i < n1 + n2; ++i) {
      const auto& list = i < n1 ? px : py;
      if (idx[i] >= static_cast<long>(list.size())) return;
      pt[i] = list[idx[i]];
      w *= std::log(static_cast<double>(pt[i]));
    }
    s += w * testing::e(phase(num, den, testing::naive_eval(sys.poly(0), pt)));
  });
  return s;
}

}  // namespace

TEST_SUITE("arcs") {
  TEST_CASE("S at alpha = 0 and periodicity") {
    const auto table = PrimeTable::sieve(100);
    const auto g = S(1, 1, {"x1*y1 - 6"});
    const std::vector<double> zero = {0.0}, one = {1.0};
    const auto s0 = exp_sum_S(g, zero, 10, 10, table);
    CHECK(s0.real() == doctest::Approx(std::pow(std::log(210.0), 2)).epsilon(1e-12));
    CHECK(s0.real() == doctest::Approx(28.5915).epsilon(1e-5));
    const auto s1 = exp_sum_S(g, one, 10, 10, table);
    CHECK(std::abs(s1 - s0) <= 1e-9 * std::abs(s0));
    const auto h = S(2, 1, {"x1^2*y1^2 - 3*x2^2*y1^2 + x1*y1"});
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
      const double a = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const std::vector<double> al = {a}, sh = {a + 1.0};
      const auto x = exp_sum_S(h, al, 13, 11, table);
      const auto y = exp_sum_S(h, sh, 13, 11, table);
      CHECK(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)));
    }
  }

  TEST_CASE("S matches the direct loop oracle") {
    const auto table = PrimeTable::sieve(100);
    const auto g = S(1, 1, {"x1*y1 - 6"});
    const std::vector<double> half = {0.5};
    const auto s = exp_sum_S(g, half, 10, 10, table);
    const auto want = S_oracle(g, 1, 2, 10, 10);
    CHECK(std::abs(s - want) <= 1e-9 * std::abs(want));
    const auto h = S(2, 2, {"x1^2*y1^2 - x2^2*y2^2 + 5*x1*x2*y1*y2"});
    const std::vector<double> a = {3.0 / 8.0};
    const auto s2 = exp_sum_S(h, a, 13, 11, table);
    const auto w2 = S_oracle(h, 3, 8, 13, 11);
    CHECK(std::abs(s2 - w2) <= 1e-9 * std::max(1.0, std::abs(w2)));
  }

  TEST_CASE("T: zero phase, brute force, realness") {
    const auto g = S(1, 1, {"x1*y1"});
    const std::vector<double> zero = {0.0};
    CHECK(exp_sum_T(g, zero, 3, 3).real() == doctest::Approx(256.0));
    const std::vector<double> half = {0.5};
    const auto t = exp_sum_T(g, half, 2, 2);
    std::complex<double> want = 0;
    testing::each_tuple(4, 3, [&](const std::vector<long>& u) {
      const long x = u[0], xp = u[1], y = u[2], yp = u[3];
      const long d = x * y - x * yp - xp * y + xp * yp;
      want += testing::e(phase(1, 2, BigInt(d)));
    });
    CHECK(std::abs(t - want) < 1e-9 * std::abs(want));
    CHECK(std::abs(t.imag()) < 1e-9 * std::abs(t));
    CHECK(t.real() >= 0.0);

    const auto h = S(1, 2, {"x1^2*y1*y2 - 2*x1^2*y2^2"});
    const std::vector<double> a = {5.0 / 16.0};
    const auto th = exp_sum_T(h, a, 3, 2);
    std::complex<double> wh = 0;
    auto gv = [&](long x, long y1, long y2) { return testing::naive_eval(h.poly(0), {x, y1, y2}); };
    testing::each_tuple(6, 4, [&](const std::vector<long>& u) {
      if (u[2] > 2 || u[3] > 2 || u[4] > 2 || u[5] > 2) return;
      const BigInt d = gv(u[0], u[2], u[3]) - gv(u[0], u[4], u[5]) - gv(u[1], u[2], u[3]) + gv(u[1], u[4], u[5]);
      wh += testing::e(phase(5, 16, d));
    });
    CHECK(std::abs(th - wh) < 1e-9 * std::abs(wh));
    CHECK_THROWS_AS(exp_sum_T(h, a, 1000, 1000, Budget{1000}), BudgetError);
  }

  TEST_CASE("Weyl chain inequality") {
    const auto table = PrimeTable::sieve(100);
    const auto g = S(2, 2, {"x1^2*y1^2 - x2^2*y2^2"});
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> a = {static_cast<double>(rng() >> 11) * 0x1.0p-53};
      const auto w = weyl_chain(g, a, 8, 8, table);
      CHECK(w.ok);
      CHECK(w.lhs <= w.rhs * (1 + 1e-9));
    }
  }

  TEST_CASE("major arc location") {
    const ArcGeometry geo{log_P_of(10, 10, 2, 2), 2, 2, 1};
    const std::vector<double> third = {1.0 / 3.0};
    const auto l = major_arc_locate(third, 0.25, geo);
    CHECK(l.major);
    CHECK(l.q == 3);
    CHECK(l.a == std::vector<std::int64_t>{1});
    CHECK(l.distance[0] < 1e-15);
    const std::vector<double> zero = {0.0};
    const auto z = major_arc_locate(zero, 0.1, geo);
    CHECK(z.major);
    CHECK(z.q == 1);
    CHECK(z.a == std::vector<std::int64_t>{0});

    const std::vector<double> a51 = {0.51};
    const auto m = major_arc_locate(a51, 0.1, geo);
    CHECK(m.q_bound == doctest::Approx(std::pow(10.0, 1.2)));
    CHECK(m.width == doctest::Approx(std::pow(10.0, -2.8)));
    CHECK_FALSE(m.major);
    const auto n = major_arc_locate(a51, 0.25, geo);
    CHECK(n.major);
    CHECK(n.q == 2);
    CHECK(n.a == std::vector<std::int64_t>{1});

    const std::vector<double> bad = {1.0};
    CHECK_THROWS_AS(major_arc_locate(bad, 0.1, geo), InputError);
  }

  TEST_CASE("rationals within the bound are major, classification monotone in theta") {
    const ArcGeometry geo{log_P_of(10, 10, 2, 2), 2, 2, 2};
    for (std::int64_t q = 1; q <= 12; ++q) {
      for (std::int64_t a1 = 0; a1 < q; ++a1) {
        const std::vector<double> al = {double(a1) / q, double((a1 * 5 + 1) % q) / q};
        const auto l = major_arc_locate(al, 0.05, geo);
        CHECK(l.major);
        CHECK(l.q <= static_cast<std::uint64_t>(q));
        for (double d : l.distance) CHECK(d < 1e-12);
      }
    }
    const ArcGeometry geo1{log_P_of(10, 10, 2, 2), 2, 2, 1};
    std::mt19937_64 rng(6);
    for (int k = 0; k < 500; ++k) {
      const std::vector<double> al = {static_cast<double>(rng() >> 11) * 0x1.0p-53};
      bool prev = false;
      for (double th : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
        const bool now = major_arc_locate(al, th, geo1).major;
        if (prev) CHECK(now);
        prev = now;
      }
    }
  }

  TEST_CASE("measure bound") {
    const ArcGeometry geo{4.0 * std::log(10.0), 2, 2, 1};
    CHECK(arc_measure_bound(0.0, geo).bound == doctest::Approx(1e-4));
    CHECK(arc_measure_bound(0.1, geo).bound == doctest::Approx(std::pow(10.0, -1.6)));
    double prev = 0;
    for (double th = 0; th <= 0.3; th += 0.01) {
      const double b = arc_measure_bound(th, geo).bound;
      CHECK(b > prev);
      prev = b;
    }
    const auto m = arc_measure_bound(0.2, geo);
    REQUIRE(m.overcount.has_value());
    CHECK(*m.overcount > 0.0);
  }

  TEST_CASE("schedule") {
    ScheduleParams p;
    p.min_codim = 769;
    const auto ctx = schedule(p);
    CHECK(ctx.K == 48.03125);
    CHECK(ctx.sigma == doctest::Approx(0.00390625));
    CHECK(ctx.theta0 == 0.25);
    CHECK(ctx.max_term == 12.0);
    // zeta = (4 R (R+1)(d1+d2-1) + 4 sigma) / K = (24 + 1/64) / (3075/64) = 1/2 exactly
    CHECK(ctx.zeta == 0.5);
    const double cap = p.C * std::log(p.log_P);
    CHECK(ctx.thetas.back() * p.log_P <= cap);
    CHECK(cap < ctx.thetas[ctx.M - 1] * p.log_P);
    for (std::size_t i = 1; i < ctx.thetas.size(); ++i) {
      CHECK(ctx.thetas[i] < ctx.thetas[i - 1]);
      CHECK(ctx.thetas[i] == ctx.zeta * ctx.thetas[i - 1]);
    }
    CHECK(p.C * ctx.zeta < ctx.C0);
    CHECK(ctx.C0 <= p.C);

    p.min_codim = 193;
    CHECK_THROWS_AS(schedule(p), HypothesisError);
    p.min_codim = 150;
    CHECK_THROWS_AS(schedule(p), HypothesisError);
    p.min_codim = 769;
    p.log_P = 20;
    CHECK_THROWS_AS(schedule(p), HypothesisError);
  }

  TEST_CASE("zeta in (0,1) for admissible inputs") {
    std::mt19937_64 rng(10);
    int admissible = 0;
    for (int k = 0; k < 500; ++k) {
      ScheduleParams p;
      p.d1 = 1 + static_cast<int>(rng() % 3);
      p.d2 = 1 + static_cast<int>(rng() % 3);
      p.R = 1 + rng() % 3;
      p.b = 1.0 + static_cast<double>(rng() % 100) / 50.0;
      p.delta0 = 0.1 + static_cast<double>(rng() % 80) / 100.0;
      p.min_codim = static_cast<double>(rng() % 20000);
      p.log_P = 100.0 + static_cast<double>(rng() % 100000);
      try {
        const auto ctx = schedule(p);
        ++admissible;
        CHECK(ctx.zeta > 0.0);
        CHECK(ctx.zeta < 1.0);
      } catch (const HypothesisError&) {
      }
    }
    CHECK(admissible > 50);
  }

  TEST_CASE("dichotomy scan") {
    const auto table = PrimeTable::sieve(100);
    const auto g = S(2, 2, {"x1^2*y1^2 - x2^2*y2^2"});
    std::vector<std::vector<double>> rationals;
    for (int q = 1; q <= 3; ++q) {
      for (int a = 0; a < q; ++a) rationals.push_back({double(a) / q});
    }
    const auto all_major = dichotomy_scan_at(g, 0.2, 48.0, rationals, 8, 8, table);
    CHECK(all_major.minor_count == 0);
    CHECK_FALSE(all_major.max_ratio.has_value());

    const auto a = dichotomy_scan(g, 0.05, 48.0, 200, 7, 8, 8, table);
    const auto b = dichotomy_scan(g, 0.05, 48.0, 200, 7, 8, 8, table);
    CHECK(a.samples.size() == 200);
    REQUIRE(a.max_ratio.has_value());
    CHECK(std::isfinite(*a.max_ratio));
    CHECK(*a.max_ratio == *b.max_ratio);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      CHECK(a.samples[i].alpha == b.samples[i].alpha);
      CHECK(a.samples[i].abs_S == b.samples[i].abs_S);
    }
  }

  TEST_CASE("complete sums") {
    const auto g = S(2, 2, {"x1*y1 - x2*y2"});
    const std::vector<std::int64_t> none;
    const std::vector<std::int64_t> one = {1};
    const auto r1 = complete_sum_check(g, 1, one, 1.0);
    CHECK(r1.sum.real() == doctest::Approx(1.0));
    CHECK(std::isfinite(r1.ratio));
    const auto r3 = complete_sum_check(g, 3, one, 1.0);
    std::complex<double> want = 0;
    testing::each_tuple(4, 3, [&](const std::vector<long>& k) {
      want += testing::e(phase(1, 3, testing::naive_eval(g.poly(0), k)));
    });
    CHECK(std::abs(r3.sum - want) < 1e-9);
    CHECK(r3.abs_sum == doctest::Approx(9.0));
    const std::vector<std::int64_t> three = {3};
    CHECK_THROWS_AS(complete_sum_check(g, 3, three, 1.0), InputError);
  }
}

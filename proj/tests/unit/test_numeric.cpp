#include <doctest.h>

#include <cmath>
#include <random>

#include "cml/error.hpp"
#include "cml/numeric.hpp"
#include "cml/parallel.hpp"
#include "cml/reports.hpp"
#include "cml/verify.hpp"
#include "support.hpp"

using namespace cml;

namespace {

// frac(alpha * v) from the exact rational value of the double alpha.
double frac_oracle(double alpha, const BigInt& v) {
  Rational a(alpha);
  Rational prod = a * Rational(v);
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), prod.get_num_mpz_t(), prod.get_den_mpz_t());
  Rational f = prod - Rational(fl);
  return f.get_d();
}

}  // namespace

TEST_SUITE("numeric") {
  TEST_CASE("exact fractional products") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 5000; ++k) {
      const double alpha = std::ldexp(static_cast<double>(rng() >> 11), -static_cast<int>(rng() % 80)) *
                           ((rng() & 1) ? 1 : -1);
      const std::int64_t v = static_cast<std::int64_t>(rng()) >> (rng() % 60);
      const double got = frac_product(alpha, v);
      CHECK(got >= 0.0);
      CHECK(got < 1.0);
      const double want = frac_oracle(alpha, BigInt(static_cast<long>(v)));
      CHECK(std::abs(got - want) <= 1e-15);
      const BigInt big = BigInt(static_cast<long>(v)) * BigInt("1000000000000000000000");
      const double gb = frac_product(alpha, big);
      CHECK(std::abs(gb - frac_oracle(alpha, big)) <= 1e-15);
    }
    CHECK(frac_product(0.5, 3) == 0.5);
    CHECK(frac_product(0.25, -1) == 0.75);
  }

  TEST_CASE("compensated sums") {
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1000.0);
  }

  TEST_CASE("Halton points and shifts") {
    CHECK(halton(1, 0) == 0.5);
    CHECK(halton(2, 0) == 0.25);
    CHECK(halton(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(random_shift(3, 5) == random_shift(3, 5));
    CHECK(random_shift(3, 5) != random_shift(3, 6));
  }

  TEST_CASE("odometer and tuple maps are deterministic and complete") {
    const std::vector<std::uint64_t> radices = {3, 1, 4, 2};
    auto parts = map_tuples<std::uint64_t>(radices, [](std::uint64_t& acc, const std::vector<std::uint64_t>& d) {
      acc += 1 + d[0] + 3 * d[2] + 12 * d[3];
    });
    std::uint64_t total = 0;
    for (auto p : parts) total += p;
    // sum over all 24 tuples of (1 + mixed-radix index) = 24 * 25 / 2
    CHECK(total == 300);
    set_thread_limit(1);
    auto again = map_tuples<std::uint64_t>(radices, [](std::uint64_t& acc, const std::vector<std::uint64_t>& d) {
      acc += 1 + d[0] + 3 * d[2] + 12 * d[3];
    });
    set_thread_limit(0);
    CHECK(parts == again);
  }

  TEST_CASE("reports serialize rationals and complex values") {
    CHECK(to_json(Rational(3, 6)) == json({{"num", "1"}, {"den", "2"}}));
    CHECK(to_json(std::complex<double>(1.5, -2)) == json({{"re", 1.5}, {"im", -2.0}}));
  }
}

TEST_SUITE("verify") {
  TEST_CASE("random batteries are seeded") {
    const auto a = random_small_systems(6, 3);
    const auto b = random_small_systems(6, 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].poly(0) == b[i].poly(0));
      CHECK(a[i].num_vars() <= 4);
    }
    CHECK(a[0].d1() == 1);
    CHECK(a[1].d1() == 2);
  }

  TEST_CASE("identity battery passes and is reproducible") {
    const auto r = run_verify("identities", 7);
    CHECK(r.all_passed());
    CHECK(to_json(r).dump() == to_json(run_verify("identities", 7)).dump());
    CHECK_THROWS_AS(run_verify("nope", 1), InputError);
  }
}

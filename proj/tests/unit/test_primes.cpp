#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <tuple>

#include "cml/error.hpp"
#include "cml/primes.hpp"
#include "support.hpp"

using namespace cml;

TEST_SUITE("primes") {
  TEST_CASE("small sieves") {
    CHECK(PrimeTable::sieve(10).primes() == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(PrimeTable::sieve(2).primes() == std::vector<std::uint64_t>{2});
    CHECK_THROWS_AS(PrimeTable::sieve(1), InputError);
    CHECK_THROWS_AS(PrimeTable::sieve(kMaxSieveLimit + 1), BudgetError);
  }

  TEST_CASE("sieve agrees with trial division, across segment sizes") {
    const auto a = PrimeTable::sieve(20000, 1000);
    const auto b = PrimeTable::sieve(20000);
    CHECK(a.primes() == b.primes());
    for (std::uint64_t x = 0; x <= 20000; ++x) {
      CHECK(a.is_prime(x) == testing::is_prime_trial(x));
    }
  }

  TEST_CASE("pi(10^6) = 78498") {
    const auto t = PrimeTable::sieve(1'000'000, 65536);
    CHECK(t.primes().size() == 78498);
    std::mt19937_64 rng(1);
    for (int k = 0; k < 2000; ++k) {
      const std::uint64_t x = rng() % 1'000'001;
      CHECK(t.is_prime(x) == testing::is_prime_trial(x));
    }
  }

  TEST_CASE("cache round trip") {
    const auto path = std::filesystem::temp_directory_path() / "cml_sieve_test.bin";
    std::filesystem::remove(path);
    const auto t = PrimeTable::load_or_build(path, 5000);
    const auto u = PrimeTable::load(path);
    CHECK(u.limit() == 5000);
    CHECK(u.primes() == t.primes());
    const auto v = PrimeTable::load_or_build(path, 100);
    CHECK(v.limit() == 5000);
    const auto w = PrimeTable::load_or_build(path, 9000);
    CHECK(w.limit() == 9000);
    CHECK(PrimeTable::load(path).primes().size() == w.primes().size());
    std::filesystem::remove(path);
  }

  TEST_CASE("Miller-Rabin against the sieve and known primes") {
    const auto t = PrimeTable::sieve(100000);
    for (std::uint64_t x = 0; x <= 100000; ++x) CHECK(is_prime_u64(x) == t.is_prime(x));
    CHECK(is_prime_u64(18446744073709551557ULL));
    CHECK_FALSE(is_prime_u64(18446744073709551557ULL - 2));
    CHECK_FALSE(is_prime_u64(3215031751ULL));
  }

  TEST_CASE("lambda star") {
    CHECK(lambda_star(7) == doctest::Approx(1.945910).epsilon(1e-6));
    CHECK(lambda_star(1) == 0.0);
    CHECK(lambda_star(9) == 0.0);
    double s = 0;
    for (std::uint64_t x = 0; x <= 10; ++x) s += lambda_star(x);
    CHECK(s == doctest::Approx(std::log(210.0)).epsilon(1e-12));
    CHECK(s == doctest::Approx(5.347108).epsilon(1e-6));
    const auto t = PrimeTable::sieve(1000);
    for (std::uint64_t x = 0; x <= 1000; ++x) CHECK((lambda_star(x) > 0) == t.is_prime(x));
  }

  TEST_CASE("psi_h") {
    const auto t = PrimeTable::sieve(1000);
    CHECK(psi_h(t, 10, 4, 1) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
    CHECK(psi_h(t, 10, 1, 0) == doctest::Approx(std::log(210.0)).epsilon(1e-12));
    CHECK(psi_h(t, 1, 7, 1) == 0.0);
    for (std::uint64_t q : {1, 3, 8, 30}) {
      double sum = 0;
      for (std::uint64_t h = 0; h < q; ++h) sum += psi_h(t, 900, q, h);
      double direct = 0;
      for (std::uint64_t x = 0; x <= 900; ++x) direct += lambda_star(x);
      CHECK(sum == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  TEST_CASE("semiprimes") {
    const auto t = PrimeTable::sieve(100);
    auto zs = [](const std::vector<SemiprimeRecord>& r) {
      std::vector<std::uint64_t> out;
      for (const auto& s : r) out.push_back(s.z);
      return out;
    };
    const auto a = semiprimes(t, 10, 10, 10);
    CHECK(zs(a) == std::vector<std::uint64_t>{4, 6, 9, 10});
    CHECK(a[1].p == 3);
    CHECK(a[1].q == 2);
    CHECK(semiprimes(t, 3, 3, 3).empty());
    CHECK(zs(semiprimes(t, 25, 25, 2)) == std::vector<std::uint64_t>{4, 6, 10, 14, 22});

    // Oracle: all prime pairs q <= p by brute force.
    const auto r = semiprimes(t, 90, 30, 9);
    std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> want, got;
    for (std::uint64_t p = 2; p <= 30; ++p) {
      for (std::uint64_t q = 2; q <= std::min<std::uint64_t>(p, 9); ++q) {
        if (testing::is_prime_trial(p) && testing::is_prime_trial(q) && p * q <= 90) want.insert({p * q, p, q});
      }
    }
    for (const auto& s : r) {
      CHECK(s.z == s.p * s.q);
      CHECK(s.p >= s.q);
      CHECK(s.weight == doctest::Approx(std::log(double(s.p)) * std::log(double(s.q))));
      got.insert({s.z, s.p, s.q});
    }
    CHECK(got.size() == r.size());
    CHECK(got == want);
  }
}

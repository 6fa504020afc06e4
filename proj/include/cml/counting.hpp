#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cml/budget.hpp"
#include "cml/numeric.hpp"
#include "cml/poly.hpp"
#include "cml/primes.hpp"

namespace cml {

inline constexpr std::size_t kDefaultSampleCap = 10'000;

struct CountReport {
  double weighted = 0.0;
  std::uint64_t unweighted = 0;
  // For semiprime counts: distinct solution vectors z (each may come from
  // several admissible factorizations). Equal to unweighted for prime counts.
  std::uint64_t distinct = 0;
  std::uint64_t tuples = 0;  // size of the enumerated space
  // Up to sample_cap solutions: prime tuples (x; y), or for semiprime
  // counts the z vector followed by its p and q factors.
  std::vector<std::vector<std::int64_t>> sample;
  bool sample_truncated = false;
};

// N_prime(g; P1, P2): prime x <= P1, prime y <= P2 with g_r(x; y) = 0 for all
// r, weighted by prod log x_i prod log y_j.
CountReport count_prime_solutions(const BihomSystem& sys, std::uint64_t P1, std::uint64_t P2,
                                  const PrimeTable& table,
                                  std::size_t sample_cap = kDefaultSampleCap,
                                  const Budget& budget = Budget::count());

// N_2(f; N; N1, N2): every coordinate z_j = p_j q_j <= N with q_j <= p_j,
// p_j <= N1, q_j <= N2, weighted by prod (log p_j)(log q_j).
CountReport count_semiprime_solutions(const IntPolynomial& f, std::uint64_t N, std::uint64_t N1,
                                      std::uint64_t N2, const PrimeTable& table,
                                      std::size_t sample_cap = kDefaultSampleCap,
                                      const Budget& budget = Budget::count());

// sigma_g P1^{n1 - d1 R} P2^{n2 - d2 R} with sigma_g = S mu_infinity.
double predict_main_term(std::size_t n1, std::size_t n2, int d1, int d2, std::size_t R,
                         double P1, double P2, double singular_series, double mu_infinity);

struct InequalityReport {
  std::uint64_t N = 0;
  Rational delta;
  std::uint64_t N1 = 0;  // floor(N^{1 - delta})
  std::uint64_t N2 = 0;  // floor(N^delta)
  CountReport semiprime;  // N_2(f; N; N1, N2)
  CountReport prime;      // N_prime(g; N1, N2), g = f(x_1 y_1, ..., x_n y_n)
  double rhs = 0.0;       // 2^{-n} N_prime
  bool ok = false;        // weighted, with 1e-12 relative slack for rounding
  bool unweighted_ok = false;
};

InequalityReport check_inequality_semiprime(const IntPolynomial& f, std::uint64_t N,
                                            const Rational& delta, const PrimeTable& table,
                                            const Budget& budget = Budget::count());

// floor(N^{k/m}) for delta = k/m, exact.
std::uint64_t rational_power_floor(std::uint64_t N, const Rational& exponent);

}  // namespace cml

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cml/budget.hpp"
#include "cml/numeric.hpp"
#include "cml/poly.hpp"

namespace cml {

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
int mobius(std::uint64_t n);
// Residues in [1, q) coprime to q; {0} when q = 1.
std::vector<std::uint64_t> units_mod(std::uint64_t q);
// p^e, throwing InputError on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t p, unsigned e);

// c_q(m) = sum_{d | gcd(q, m)} mu(q/d) d.
BigInt ramanujan(std::uint64_t q, std::int64_t m);

// counts[m] = #{k : sum_r a_r g_r(k) = m (mod q)} with k ranging over U_q^n
// (units) or over all residues. Without weights the system must have R = 1.
struct ResidueCountVector {
  std::uint64_t q = 1;
  std::vector<std::uint64_t> counts;

  BigInt total() const;
  // sum_m counts[m] e(m / q).
  std::complex<double> exponential_sum() const;
};

ResidueCountVector residue_counts(const BihomSystem& sys, std::uint64_t q,
                                  std::span<const std::int64_t> weights = {}, bool units = true,
                                  const Budget& budget = Budget::density());

// A(q) = phi(q)^{-n} sum over a mod q with gcd(q, a) = 1 of S_{a,q}, computed
// exactly from #{k in U_q^n : d | gcd(q, g_1(k), ..., g_R(k))} for d | q.
Rational A_of_q(const BihomSystem& sys, std::uint64_t q, const Budget& budget = Budget::density());
// R = 1 only: phi(q)^{-n} sum_m counts[m] c_q(m).
Rational A_via_ramanujan(const BihomSystem& sys, std::uint64_t q,
                         const Budget& budget = Budget::density());

// Number of k in U_{p^t}^n with g_r(k) = 0 (mod p^t) for every r.
BigInt nu_t(const BihomSystem& sys, std::uint64_t p, unsigned t,
            const Budget& budget = Budget::density());

struct PrimeDensity {
  std::uint64_t p = 0;
  unsigned t = 0;
  BigInt nu;
  std::vector<Rational> A;  // A(p^j), j = 1..t
  Rational mu_truncated;    // 1 + sum_j A(p^j)
  Rational identity_rhs;    // p^{tR} nu_t(p) / phi(p^t)^n
  bool identity_ok = false;
};

struct CompositeA {
  std::uint64_t q = 0;
  std::uint64_t q1 = 0;
  std::uint64_t q2 = 0;
  Rational value;
  Rational product;  // A(q1) A(q2)
  bool multiplicative_ok = false;
};

struct DensityReport {
  std::vector<PrimeDensity> primes;
  Rational singular_series;  // product of the truncated mu(p)
  std::vector<CompositeA> composites;
  // Least-squares slope of log|A(p)| against log p over primes with
  // A(p) != 0; monitoring only.
  std::optional<double> a_decay_exponent;
};

// Truncations of mu(p) at level t for each prime, the identity check, and
// A(p p') for each pair of distinct listed primes.
DensityReport singular_series(const BihomSystem& sys, std::span<const std::uint64_t> primes,
                              unsigned t, const Budget& budget = Budget::density());

struct LocalWitness {
  std::string kind;  // "p-adic" or "real"
  std::vector<BigInt> padic_point;
  std::vector<double> real_point;
  std::uint64_t p = 0;
  unsigned level = 0;  // witness is taken mod p^level, level = 2v + 1
  BigInt modulus;
  unsigned valuation = 0;  // v, valuation of the best R x R Jacobian minor
  std::vector<std::size_t> minor_columns;
  BigInt minor_value;       // p-adic: minor at the representative, mod p^search_level
  double real_minor = 0.0;  // real: the minor value
  double residual = 0.0;    // real: max |g_r|
};

struct LocalResult {
  std::string status;  // "found", "unknown" (search exhausted) or "not_found"
  std::optional<LocalWitness> witness;
  std::string detail;
};

// Searches k in U_{p^t}^n for t = 1..t_max with g(k) = 0 mod p^t and an
// R x R Jacobian minor of valuation v satisfying 2v + 1 <= t. Such a point
// lifts to a p-adic unit solution. Never reports nonexistence.
LocalResult hensel_check(const BihomSystem& sys, std::uint64_t p, unsigned t_max,
                         const Budget& budget = Budget::density());

// Damped Gauss-Newton from seeded random starts in (0,1)^n; a witness has
// max |g_r| < tolerance, coordinates in (margin, 1 - margin) and an R x R
// minor of absolute value at least min_minor.
LocalResult real_nonsingular_search(const std::vector<IntPolynomial>& forms, unsigned attempts,
                                    double tolerance, std::uint64_t seed,
                                    double min_minor = 1e-6, double margin = 1e-6);

}  // namespace cml

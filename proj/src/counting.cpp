#include "cml/counting.hpp"

#include <cmath>

#include "cml/error.hpp"
#include "cml/parallel.hpp"
#include "cml/poly_eval.hpp"

namespace cml {
namespace {

struct CountAcc {
  CompensatedSum weighted;
  std::uint64_t count = 0;
  std::uint64_t distinct = 0;
  std::vector<std::vector<std::int64_t>> sample;
  bool truncated = false;
};

CountReport merge(const std::vector<CountAcc>& parts, std::size_t cap, double tuples) {
  CountReport rep;
  CompensatedSum w;
  for (const auto& p : parts) {
    w.add(p.weighted);
    rep.unweighted += p.count;
    rep.distinct += p.distinct;
    for (const auto& s : p.sample) {
      if (rep.sample.size() < cap) {
        rep.sample.push_back(s);
      } else {
        rep.sample_truncated = true;
      }
    }
    rep.sample_truncated = rep.sample_truncated || p.truncated;
  }
  rep.weighted = w.value();
  rep.tuples = static_cast<std::uint64_t>(tuples);
  return rep;
}

}  // namespace

CountReport count_prime_solutions(const BihomSystem& sys, std::uint64_t P1, std::uint64_t P2,
                                  const PrimeTable& table, std::size_t sample_cap,
                                  const Budget& budget) {
  const auto px = table.primes_up_to(P1);
  const auto py = table.primes_up_to(P2);
  std::vector<std::uint64_t> radices(sys.n1(), px.size());
  radices.insert(radices.end(), sys.n2(), py.size());
  const double tuples = tuple_count(radices);
  budget.require(tuples, "prime tuples");
  std::vector<IntEvaluator> ev;
  for (const auto& g : sys.polys()) ev.emplace_back(g);
  std::vector<double> lx;
  std::vector<double> ly;
  for (auto p : px) lx.push_back(std::log(static_cast<double>(p)));
  for (auto p : py) ly.push_back(std::log(static_cast<double>(p)));
  const std::size_t n1 = sys.n1();
  const std::size_t n = sys.num_vars();
  auto parts = map_tuples<CountAcc>(radices, [&](CountAcc& acc,
                                                 const std::vector<std::uint64_t>& d) {
    thread_local std::vector<std::int64_t> pt;
    pt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pt[i] = static_cast<std::int64_t>(i < n1 ? px[d[i]] : py[d[i]]);
    }
    for (const auto& e : ev) {
      if (!e.is_zero_at(pt)) return;
    }
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) w *= i < n1 ? lx[d[i]] : ly[d[i]];
    acc.weighted.add(w);
    ++acc.count;
    ++acc.distinct;
    if (acc.sample.size() < sample_cap) {
      acc.sample.push_back(pt);
    } else {
      acc.truncated = true;
    }
  });
  return merge(parts, sample_cap, tuples);
}

CountReport count_semiprime_solutions(const IntPolynomial& f, std::uint64_t N, std::uint64_t N1,
                                      std::uint64_t N2, const PrimeTable& table,
                                      std::size_t sample_cap, const Budget& budget) {
  if (N1 < N2) throw InputError("semiprime boxes need N1 >= N2");
  const auto recs = semiprimes(table, N, N1, N2);
  const std::size_t n = f.num_vars();
  const std::vector<std::uint64_t> radices(n, recs.size());
  const double tuples = tuple_count(radices);
  budget.require(tuples, "semiprime tuples");
  // first[i]: record i is the first one with its z value.
  std::vector<bool> first(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) first[i] = i == 0 || recs[i - 1].z != recs[i].z;
  const IntEvaluator ev(f);
  auto parts = map_tuples<CountAcc>(radices, [&](CountAcc& acc,
                                                 const std::vector<std::uint64_t>& d) {
    thread_local std::vector<std::int64_t> z;
    z.resize(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<std::int64_t>(recs[d[i]].z);
    if (!ev.is_zero_at(z)) return;
    double w = 1.0;
    bool canonical = true;
    for (std::size_t i = 0; i < n; ++i) {
      w *= recs[d[i]].weight;
      canonical = canonical && first[d[i]];
    }
    acc.weighted.add(w);
    ++acc.count;
    if (canonical) ++acc.distinct;
    if (acc.sample.size() < sample_cap) {
      std::vector<std::int64_t> row(z.begin(), z.end());
      for (std::size_t i = 0; i < n; ++i) row.push_back(static_cast<std::int64_t>(recs[d[i]].p));
      for (std::size_t i = 0; i < n; ++i) row.push_back(static_cast<std::int64_t>(recs[d[i]].q));
      acc.sample.push_back(std::move(row));
    } else {
      acc.truncated = true;
    }
  });
  return merge(parts, sample_cap, tuples);
}

double predict_main_term(std::size_t n1, std::size_t n2, int d1, int d2, std::size_t R,
                         double P1, double P2, double singular_series, double mu_infinity) {
  const double sigma = singular_series * mu_infinity;
  if (sigma == 0.0) return 0.0;
  const double e1 = static_cast<double>(n1) - static_cast<double>(d1) * static_cast<double>(R);
  const double e2 = static_cast<double>(n2) - static_cast<double>(d2) * static_cast<double>(R);
  return sigma * std::pow(P1, e1) * std::pow(P2, e2);
}

std::uint64_t rational_power_floor(std::uint64_t N, const Rational& exponent) {
  if (exponent < 0) throw InputError("exponent must be non-negative");
  const BigInt& k = exponent.get_num();
  const BigInt& m = exponent.get_den();
  if (!k.fits_ulong_p() || !m.fits_ulong_p() || k.get_ui() > 64 || m.get_ui() > 1000000) {
    throw InputError("exponent numerator/denominator too large");
  }
  BigInt power;
  mpz_ui_pow_ui(power.get_mpz_t(), N, k.get_ui());
  BigInt root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), m.get_ui());
  if (!root.fits_ulong_p()) throw InputError("box size overflows 64 bits");
  return root.get_ui();
}

InequalityReport check_inequality_semiprime(const IntPolynomial& f, std::uint64_t N,
                                            const Rational& delta, const PrimeTable& table,
                                            const Budget& budget) {
  if (delta <= 0 || delta > Rational(1, 2)) throw InputError("delta must lie in (0, 1/2]");
  InequalityReport rep;
  rep.N = N;
  rep.delta = delta;
  rep.N1 = rational_power_floor(N, Rational(1) - delta);
  rep.N2 = rational_power_floor(N, delta);
  rep.semiprime = count_semiprime_solutions(f, N, rep.N1, rep.N2, table, 0, budget);
  const std::size_t n = f.num_vars();
  const BihomSystem g(n, n, {substitute_products(f)});
  if (rep.N2 >= 2) {
    rep.prime = count_prime_solutions(g, rep.N1, rep.N2, table, 0, budget);
  }
  rep.rhs = std::ldexp(rep.prime.weighted, -static_cast<int>(n));
  rep.ok = rep.semiprime.weighted >= rep.rhs * (1.0 - 1e-12);
  rep.unweighted_ok = std::ldexp(static_cast<double>(rep.semiprime.unweighted),
                                 static_cast<int>(n)) >=
                      static_cast<double>(rep.prime.unweighted);
  return rep;
}

}  // namespace cml

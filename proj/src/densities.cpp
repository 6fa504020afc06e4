#include "cml/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "cml/error.hpp"
#include "cml/parallel.hpp"
#include "cml/poly_eval.hpp"

namespace cml {
namespace {

// All R-element column subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  for (;;) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return out;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

// Exact determinant by fraction-free elimination.
BigInt bareiss(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

unsigned valuation(BigInt v, std::uint64_t p, unsigned cap) {
  if (v == 0) return cap;
  unsigned e = 0;
  const BigInt bp(static_cast<unsigned long>(p));
  while (e < cap && mpz_divisible_p(v.get_mpz_t(), bp.get_mpz_t())) {
    v /= bp;
    ++e;
  }
  return e;
}

std::vector<ModEvaluator> compile_mod(const std::vector<IntPolynomial>& polys, std::uint64_t q) {
  std::vector<ModEvaluator> out;
  out.reserve(polys.size());
  for (const auto& g : polys) out.emplace_back(g, q);
  return out;
}

std::vector<std::uint64_t> residues(std::uint64_t q, bool units) {
  if (units) return units_mod(q);
  std::vector<std::uint64_t> all(q);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

BigInt big_pow(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw InputError("cannot factor 0");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t size = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

int mobius(std::uint64_t n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<std::uint64_t> units_mod(std::uint64_t q) {
  if (q == 0) throw InputError("modulus must be positive");
  if (q == 1) return {0};
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 1; a < q; ++a) {
    if (std::gcd(a, q) == 1) out.push_back(a);
  }
  return out;
}

std::uint64_t checked_pow(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(r, p, &r)) {
      throw InputError(std::to_string(p) + "^" + std::to_string(e) + " overflows 64 bits");
    }
  }
  return r;
}

BigInt ramanujan(std::uint64_t q, std::int64_t m) {
  if (q == 0) throw InputError("ramanujan sum needs q >= 1");
  const std::uint64_t am = m < 0 ? static_cast<std::uint64_t>(-(m + 1)) + 1 : m;
  const std::uint64_t g = std::gcd(q, am);
  BigInt total = 0;
  for (std::uint64_t d : divisors(g)) total += mobius(q / d) * big(d);
  return total;
}

BigInt ResidueCountVector::total() const {
  BigInt t = 0;
  for (auto c : counts) t += big(c);
  return t;
}

std::complex<double> ResidueCountVector::exponential_sum() const {
  ComplexSum sum;
  for (std::uint64_t m = 0; m < counts.size(); ++m) {
    if (counts[m] == 0) continue;
    sum.add(static_cast<double>(counts[m]) *
            unit_phase(static_cast<double>(m) / static_cast<double>(q)));
  }
  return sum.value();
}

ResidueCountVector residue_counts(const BihomSystem& sys, std::uint64_t q,
                                  std::span<const std::int64_t> weights, bool units,
                                  const Budget& budget) {
  if (q == 0) throw InputError("modulus must be positive");
  if (weights.empty() && sys.R() != 1) {
    throw InputError("residue counts for R > 1 need a weight vector a");
  }
  if (!weights.empty() && weights.size() != sys.R()) {
    throw InputError("weight vector length must equal R");
  }
  if (q > (std::uint64_t{1} << 32)) throw InputError("modulus too large for residue counts");
  const auto res = residues(q, units);
  const std::size_t n = sys.num_vars();
  budget.require(std::pow(static_cast<double>(res.size()), static_cast<double>(n)),
                 "residue counts");
  IntPolynomial combo(n);
  if (weights.empty()) {
    combo = sys.poly(0);
  } else {
    for (std::size_t r = 0; r < sys.R(); ++r) {
      combo = combo + BigInt(static_cast<long>(weights[r])) * sys.poly(r);
    }
  }
  const ModEvaluator eval(combo, q);
  using Acc = std::vector<std::uint64_t>;
  auto parts = map_tuples<Acc>(std::vector<std::uint64_t>(n, res.size()),
                               [&](Acc& acc, const std::vector<std::uint64_t>& digits) {
                                 if (acc.empty()) acc.assign(q, 0);
                                 thread_local std::vector<std::uint64_t> pt;
                                 pt.resize(n);
                                 for (std::size_t i = 0; i < n; ++i) pt[i] = res[digits[i]];
                                 ++acc[eval(pt)];
                               });
  ResidueCountVector out{q, std::vector<std::uint64_t>(q, 0)};
  for (const auto& acc : parts) {
    for (std::size_t m = 0; m < acc.size(); ++m) out.counts[m] += acc[m];
  }
  return out;
}

Rational A_of_q(const BihomSystem& sys, std::uint64_t q, const Budget& budget) {
  if (q == 0) throw InputError("modulus must be positive");
  const auto res = units_mod(q);
  const std::size_t n = sys.num_vars();
  budget.require(std::pow(static_cast<double>(res.size()), static_cast<double>(n)), "A(q)");
  const auto divs = divisors(q);
  const auto evals = compile_mod(sys.polys(), q);
  using Acc = std::vector<std::uint64_t>;
  auto parts = map_tuples<Acc>(
      std::vector<std::uint64_t>(n, res.size()),
      [&](Acc& acc, const std::vector<std::uint64_t>& digits) {
        if (acc.empty()) acc.assign(divs.size(), 0);
        thread_local std::vector<std::uint64_t> pt;
        pt.resize(n);
        for (std::size_t i = 0; i < n; ++i) pt[i] = res[digits[i]];
        std::uint64_t g = q;
        for (const auto& e : evals) {
          g = std::gcd(g, e(pt));
          if (g == 1) break;
        }
        ++acc[std::lower_bound(divs.begin(), divs.end(), g) - divs.begin()];
      });
  std::vector<std::uint64_t> hist(divs.size(), 0);
  for (const auto& acc : parts) {
    for (std::size_t i = 0; i < acc.size(); ++i) hist[i] += acc[i];
  }
  BigInt numer = 0;
  for (std::uint64_t d : divs) {
    const int mu = mobius(q / d);
    if (mu == 0) continue;
    BigInt c = 0;
    for (std::size_t i = 0; i < divs.size(); ++i) {
      if (divs[i] % d == 0) c += big(hist[i]);
    }
    numer += mu * big_pow(d, sys.R()) * c;
  }
  Rational a(numer, big_pow(euler_phi(q), n));
  a.canonicalize();
  return a;
}

Rational A_via_ramanujan(const BihomSystem& sys, std::uint64_t q, const Budget& budget) {
  if (sys.R() != 1) throw InputError("A via Ramanujan sums needs R = 1");
  const auto counts = residue_counts(sys, q, {}, true, budget);
  BigInt numer = 0;
  for (std::uint64_t m = 0; m < q; ++m) {
    if (counts.counts[m] != 0) {
      numer += big(counts.counts[m]) * ramanujan(q, static_cast<std::int64_t>(m));
    }
  }
  Rational a(numer, big_pow(euler_phi(q), sys.num_vars()));
  a.canonicalize();
  return a;
}

BigInt nu_t(const BihomSystem& sys, std::uint64_t p, unsigned t, const Budget& budget) {
  if (t == 0) throw InputError("level t must be at least 1");
  const std::uint64_t q = checked_pow(p, t);
  const auto res = units_mod(q);
  const std::size_t n = sys.num_vars();
  budget.require(std::pow(static_cast<double>(q), static_cast<double>(n)), "nu_t");
  const auto evals = compile_mod(sys.polys(), q);
  auto parts = map_tuples<std::uint64_t>(
      std::vector<std::uint64_t>(n, res.size()),
      [&](std::uint64_t& acc, const std::vector<std::uint64_t>& digits) {
        thread_local std::vector<std::uint64_t> pt;
        pt.resize(n);
        for (std::size_t i = 0; i < n; ++i) pt[i] = res[digits[i]];
        for (const auto& e : evals) {
          if (e(pt) != 0) return;
        }
        ++acc;
      });
  BigInt total = 0;
  for (auto c : parts) total += big(c);
  return total;
}

DensityReport singular_series(const BihomSystem& sys, std::span<const std::uint64_t> primes,
                              unsigned t, const Budget& budget) {
  if (t == 0) throw InputError("level t must be at least 1");
  DensityReport report;
  report.singular_series = 1;
  const std::size_t n = sys.num_vars();
  std::vector<double> log_p;
  std::vector<double> log_a;
  for (std::uint64_t p : primes) {
    if (p < 2 || factorize(p).size() != 1 || factorize(p)[0].second != 1) {
      throw InputError(std::to_string(p) + " is not prime");
    }
    PrimeDensity d;
    d.p = p;
    d.t = t;
    d.nu = nu_t(sys, p, t, budget);
    d.mu_truncated = 1;
    for (unsigned j = 1; j <= t; ++j) {
      d.A.push_back(A_of_q(sys, checked_pow(p, j), budget));
      d.mu_truncated += d.A.back();
    }
    d.identity_rhs = Rational(big_pow(p, static_cast<std::uint64_t>(t) * sys.R()) * d.nu,
                              big_pow(euler_phi(checked_pow(p, t)), n));
    d.identity_rhs.canonicalize();
    d.identity_ok = d.mu_truncated == d.identity_rhs;
    report.singular_series *= d.mu_truncated;
    if (d.A[0] != 0) {
      log_p.push_back(std::log(static_cast<double>(p)));
      log_a.push_back(std::log(std::abs(d.A[0].get_d())));
    }
    report.primes.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < report.primes.size(); ++i) {
    for (std::size_t j = i + 1; j < report.primes.size(); ++j) {
      const std::uint64_t q1 = report.primes[i].p;
      const std::uint64_t q2 = report.primes[j].p;
      if (q1 == q2) continue;
      const double need = std::pow(static_cast<double>(euler_phi(q1 * q2)), static_cast<double>(n));
      if (need > static_cast<double>(budget.max_points)) continue;
      CompositeA c;
      c.q = q1 * q2;
      c.q1 = q1;
      c.q2 = q2;
      c.value = A_of_q(sys, c.q, budget);
      c.product = report.primes[i].A[0] * report.primes[j].A[0];
      c.multiplicative_ok = c.value == c.product;
      report.composites.push_back(std::move(c));
    }
  }
  if (log_p.size() >= 2) {
    const double k = static_cast<double>(log_p.size());
    const double mx = std::accumulate(log_p.begin(), log_p.end(), 0.0) / k;
    const double my = std::accumulate(log_a.begin(), log_a.end(), 0.0) / k;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < log_p.size(); ++i) {
      sxy += (log_p[i] - mx) * (log_a[i] - my);
      sxx += (log_p[i] - mx) * (log_p[i] - mx);
    }
    if (sxx > 0) report.a_decay_exponent = sxy / sxx;
  }
  return report;
}

LocalResult hensel_check(const BihomSystem& sys, std::uint64_t p, unsigned t_max,
                         const Budget& budget) {
  if (p < 2 || factorize(p).size() != 1 || factorize(p)[0].second != 1) {
    throw InputError(std::to_string(p) + " is not prime");
  }
  if (t_max == 0) throw InputError("t_max must be at least 1");
  const std::size_t n = sys.num_vars();
  const std::size_t R = sys.R();
  if (R > n) return {"unknown", std::nullopt, "more forms than variables"};
  std::vector<std::vector<IntPolynomial>> jac(R);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t j = 0; j < n; ++j) jac[r].push_back(sys.poly(r).derivative(j));
  }
  const auto combos = combinations(n, R);
  for (unsigned t = 1; t <= t_max; ++t) {
    const std::uint64_t q = checked_pow(p, t);
    const auto res = units_mod(q);
    const double need = std::pow(static_cast<double>(res.size()), static_cast<double>(n));
    if (need > static_cast<double>(budget.max_points)) {
      return {"unknown", std::nullopt,
              "search budget exhausted before level " + std::to_string(t)};
    }
    const auto evals = compile_mod(sys.polys(), q);
    std::vector<std::vector<ModEvaluator>> jev(R);
    for (std::size_t r = 0; r < R; ++r) jev[r] = compile_mod(jac[r], q);
    // Sequential scan: the first witness in lexicographic order is reported.
    Odometer odo(n, res.size());
    std::vector<std::uint64_t> pt(n);
    const auto total = static_cast<std::uint64_t>(need);
    for (std::uint64_t idx = 0; idx < total; ++idx, odo.advance()) {
      for (std::size_t i = 0; i < n; ++i) pt[i] = res[odo[i]];
      bool zero = true;
      for (const auto& e : evals) {
        if (e(pt) != 0) {
          zero = false;
          break;
        }
      }
      if (!zero) continue;
      std::vector<std::vector<BigInt>> J(R, std::vector<BigInt>(n));
      for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t j = 0; j < n; ++j) J[r][j] = big(jev[r][j](pt));
      }
      unsigned best = t;
      std::size_t best_combo = 0;
      BigInt best_minor = 0;
      for (std::size_t c = 0; c < combos.size(); ++c) {
        std::vector<std::vector<BigInt>> m(R, std::vector<BigInt>(R));
        for (std::size_t r = 0; r < R; ++r) {
          for (std::size_t k = 0; k < R; ++k) m[r][k] = J[r][combos[c][k]];
        }
        BigInt det = bareiss(m);
        BigInt red;
        mpz_fdiv_r(red.get_mpz_t(), det.get_mpz_t(), big(q).get_mpz_t());
        const unsigned v = valuation(red, p, t);
        if (v < best) {
          best = v;
          best_combo = c;
          best_minor = red;
        }
      }
      if (2 * best + 1 > t) continue;
      LocalWitness w;
      w.kind = "p-adic";
      w.p = p;
      w.level = 2 * best + 1;
      w.modulus = big(checked_pow(p, w.level));
      w.valuation = best;
      w.minor_columns = combos[best_combo];
      w.minor_value = best_minor;
      for (std::size_t i = 0; i < n; ++i) {
        BigInt c;
        mpz_fdiv_r(c.get_mpz_t(), big(pt[i]).get_mpz_t(), w.modulus.get_mpz_t());
        w.padic_point.push_back(c);
      }
      return {"found", w,
              "g = 0 mod p^" + std::to_string(w.level) + " with a Jacobian minor of valuation " +
                  std::to_string(best)};
    }
  }
  return {"unknown", std::nullopt,
          "no liftable point up to level " + std::to_string(t_max)};
}

LocalResult real_nonsingular_search(const std::vector<IntPolynomial>& forms, unsigned attempts,
                                    double tolerance, std::uint64_t seed, double min_minor,
                                    double margin) {
  if (forms.empty()) throw InputError("need at least one form");
  const std::size_t n = forms.front().num_vars();
  const std::size_t R = forms.size();
  for (const auto& f : forms) {
    if (f.num_vars() != n) throw InputError("forms live in different rings");
  }
  if (R > n) return {"not_found", std::nullopt, "more forms than variables"};
  std::vector<RealEvaluator> evals;
  for (const auto& f : forms) evals.emplace_back(f);
  const auto combos = combinations(n, R);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 0.95);

  Eigen::VectorXd x(n);
  Eigen::VectorXd g(R);
  Eigen::MatrixXd J(R, n);
  std::vector<double> grad(n);
  auto evaluate = [&](const Eigen::VectorXd& pt, Eigen::VectorXd& val, Eigen::MatrixXd* jac) {
    const std::span<const double> s(pt.data(), n);
    for (std::size_t r = 0; r < R; ++r) {
      val[r] = evals[r].value(s);
      if (jac != nullptr) {
        evals[r].gradient(s, grad);
        for (std::size_t j = 0; j < n; ++j) (*jac)(r, j) = grad[j];
      }
    }
  };
  auto clamp = [&](Eigen::VectorXd& pt) {
    for (std::size_t j = 0; j < n; ++j) pt[j] = std::clamp(pt[j], margin * 2, 1 - margin * 2);
  };

  for (unsigned attempt = 0; attempt < attempts; ++attempt) {
    for (std::size_t j = 0; j < n; ++j) x[j] = unit(rng);
    evaluate(x, g, &J);
    for (int iter = 0; iter < 100 && g.cwiseAbs().maxCoeff() >= tolerance; ++iter) {
      const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-g);
      double lambda = 1.0;
      bool improved = false;
      Eigen::VectorXd trial(n);
      Eigen::VectorXd gt(R);
      for (int k = 0; k < 30; ++k, lambda *= 0.5) {
        trial = x + lambda * step;
        clamp(trial);
        evaluate(trial, gt, nullptr);
        if (gt.norm() < g.norm()) {
          improved = true;
          break;
        }
      }
      if (!improved) break;
      x = trial;
      evaluate(x, g, &J);
    }
    if (g.cwiseAbs().maxCoeff() >= tolerance) continue;
    double best = 0.0;
    std::size_t best_combo = 0;
    for (std::size_t c = 0; c < combos.size(); ++c) {
      Eigen::MatrixXd m(R, R);
      for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t k = 0; k < R; ++k) m(r, k) = J(r, combos[c][k]);
      }
      const double det = m.determinant();
      if (std::abs(det) > std::abs(best)) {
        best = det;
        best_combo = c;
      }
    }
    if (std::abs(best) < min_minor) continue;
    bool inside = true;
    for (std::size_t j = 0; j < n; ++j) inside = inside && x[j] > margin && x[j] < 1 - margin;
    if (!inside) continue;
    LocalWitness w;
    w.kind = "real";
    w.real_point.assign(x.data(), x.data() + n);
    w.minor_columns = combos[best_combo];
    w.real_minor = best;
    w.residual = g.cwiseAbs().maxCoeff();
    return {"found", w, "found on attempt " + std::to_string(attempt + 1)};
  }
  return {"not_found", std::nullopt,
          "no nonsingular zero in " + std::to_string(attempts) + " attempts"};
}

}  // namespace cml

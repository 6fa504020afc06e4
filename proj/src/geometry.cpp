#include "cml/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cml/error.hpp"
#include "cml/parallel.hpp"
#include "cml/poly_eval.hpp"
#include "cml/primes.hpp"

namespace cml {
namespace {

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

BigInt big_pow(std::uint64_t base, std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

void check_prime(std::uint64_t p) {
  if (!is_prime_u64(p)) throw InputError(std::to_string(p) + " is not prime");
  if (p >= (std::uint64_t{1} << 31)) throw InputError("prime too large for point counting");
}

std::pair<std::size_t, std::size_t> block_range(const BihomSystem& sys, Block block) {
  switch (block) {
    case Block::x:
      return {0, sys.n1()};
    case Block::y:
      return {sys.n1(), sys.num_vars()};
    case Block::full:
      break;
  }
  return {0, sys.num_vars()};
}

// Rank of an R x m matrix over F_p (entries already reduced), destroying it.
std::size_t rank_mod_p(std::vector<std::uint64_t>& m, std::size_t rows, std::size_t cols,
                       std::uint64_t p) {
  auto inv = [p](std::uint64_t a) {
    std::uint64_t r = 1;
    std::uint64_t e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(m[piv * cols + k], m[rank * cols + k]);
    const std::uint64_t iv = inv(m[rank * cols + c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const std::uint64_t f = m[r * cols + c] * iv % p;
      if (f == 0) continue;
      for (std::size_t k = c; k < cols; ++k) {
        m[r * cols + k] = (m[r * cols + k] + (p - f) * m[rank * cols + k]) % p;
      }
    }
    ++rank;
  }
  return rank;
}

// Primes dividing a coefficient of any form or the total degree.
bool excluded_prime(const BihomSystem& sys, std::uint64_t p) {
  const BigInt bp = big(p);
  for (const auto& g : sys.polys()) {
    for (const auto& t : g.terms()) {
      if (mpz_divisible_p(t.coeff.get_mpz_t(), bp.get_mpz_t())) return true;
    }
  }
  const int d = sys.total_degree();
  return d > 0 && static_cast<std::uint64_t>(d) % p == 0;
}

struct DiagonalTerm {
  std::size_t x = 0;
  std::uint32_t ex = 0;
  std::size_t y = 0;
  std::uint32_t ey = 0;
  BigInt coeff;
};

// Terms of a recognized separated diagonal system, with the kind of shape.
std::optional<std::vector<DiagonalTerm>> diagonal_terms(const BihomSystem& sys, Block block) {
  if (sys.R() != 1) return std::nullopt;
  const bool single = sys.n2() == 0;
  if (single && block == Block::y) return std::nullopt;
  if (!single && block == Block::full) return std::nullopt;
  std::vector<DiagonalTerm> out;
  std::set<std::size_t> used;
  for (const auto& t : sys.poly(0).terms()) {
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] > 0) vars.push_back(i);
    }
    if (vars.empty()) continue;  // constants do not enter the Jacobian
    DiagonalTerm d;
    d.coeff = t.coeff;
    if (single) {
      if (vars.size() != 1 || t.exps[vars[0]] < 2) return std::nullopt;
      d.x = vars[0];
      d.ex = t.exps[vars[0]];
      if (!used.insert(d.x).second) return std::nullopt;
    } else {
      if (vars.size() != 2 || vars[0] >= sys.n1() || vars[1] < sys.n1()) return std::nullopt;
      d.x = vars[0];
      d.ex = t.exps[vars[0]];
      d.y = vars[1];
      d.ey = t.exps[vars[1]];
      if (!used.insert(d.x).second || !used.insert(d.y).second) return std::nullopt;
    }
    out.push_back(d);
  }
  return out;
}

void fit(DimEstimate& est) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [p, c] : est.counts) {
    if (c > 0) {
      lx.push_back(std::log(static_cast<double>(p)));
      ly.push_back(std::log(c.get_d()));
    }
  }
  if (lx.empty()) {
    est.dim = -1;
    est.codim = static_cast<int>(est.ambient) + 1;
    return;
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  double intercept = 0.0;
  if (sxx > 0) {
    est.slope = sxy / sxx;
    intercept = my - est.slope * mx;
  } else {
    est.slope = my / mx;
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + est.slope * lx[i]);
    rss += r * r;
  }
  est.residual = std::sqrt(rss / k);
  est.dim = std::clamp(static_cast<int>(std::lround(est.slope)), 0,
                       static_cast<int>(est.ambient));
  est.codim = static_cast<int>(est.ambient) - est.dim;
}

}  // namespace

Block block_from_int(int b) {
  switch (b) {
    case 0:
      return Block::full;
    case 1:
      return Block::x;
    case 2:
      return Block::y;
    default:
      throw InputError("block must be 0 (full), 1 (x) or 2 (y)");
  }
}

PolyMatrix jacobian(const BihomSystem& sys, Block block) {
  const auto [lo, hi] = block_range(sys, block);
  PolyMatrix m(sys.R());
  for (std::size_t r = 0; r < sys.R(); ++r) {
    for (std::size_t j = lo; j < hi; ++j) m[r].push_back(sys.poly(r).derivative(j));
  }
  return m;
}

BigInt rank_locus_count(const BihomSystem& sys, Block block, std::uint64_t p,
                        const Budget& budget) {
  check_prime(p);
  const PolyMatrix jac = jacobian(sys, block);
  const std::size_t R = sys.R();
  const std::size_t cols = jac.empty() ? 0 : jac[0].size();
  const std::size_t n = sys.num_vars();
  std::vector<std::size_t> used;
  for (std::size_t v = 0; v < n; ++v) {
    bool u = false;
    for (const auto& row : jac) {
      for (const auto& e : row) u = u || e.uses_variable(v);
    }
    if (u) used.push_back(v);
  }
  budget.require(std::pow(static_cast<double>(p), static_cast<double>(used.size())),
                 "rank locus count");
  std::vector<ModEvaluator> ev;
  for (const auto& row : jac) {
    for (const auto& e : row) ev.emplace_back(e, p);
  }
  auto parts = map_tuples<std::uint64_t>(
      std::vector<std::uint64_t>(used.size(), p),
      [&](std::uint64_t& acc, const std::vector<std::uint64_t>& digits) {
        thread_local std::vector<std::uint64_t> pt;
        thread_local std::vector<std::uint64_t> m;
        pt.assign(n, 0);
        for (std::size_t i = 0; i < used.size(); ++i) pt[used[i]] = digits[i];
        if (R == 1) {
          for (const auto& e : ev) {
            if (e(pt) != 0) return;
          }
          ++acc;
          return;
        }
        m.resize(R * cols);
        for (std::size_t i = 0; i < ev.size(); ++i) m[i] = ev[i](pt);
        if (rank_mod_p(m, R, cols, p) < R) ++acc;
      });
  BigInt hits = 0;
  for (auto c : parts) hits += big(c);
  return hits * big_pow(p, n - used.size());
}

std::optional<DimEstimate> exact_codim_diagonal(const BihomSystem& sys, Block block) {
  const auto terms = diagonal_terms(sys, block);
  if (!terms) return std::nullopt;
  DimEstimate est;
  est.ambient = sys.num_vars();
  est.exact = true;
  est.codim = static_cast<int>(terms->size());
  est.dim = static_cast<int>(est.ambient) - est.codim;
  est.slope = est.dim;
  if (sys.n2() == 0) {
    est.certificate = "diagonal form: each term c x_i^d (d >= 2) contributes the hyperplane "
                      "x_i = 0; the locus is their intersection, codim = number of terms";
  } else {
    est.certificate = "separated diagonal: each term c x_i^e y_j^f contributes the union "
                      "{x_i = 0} u {y_j = 0} (or one hyperplane when the block exponent is 1) "
                      "on variables no other term uses; every component has codim = number "
                      "of terms";
  }
  return est;
}

std::optional<BigInt> diagonal_locus_count(const BihomSystem& sys, Block block, std::uint64_t p) {
  const auto terms = diagonal_terms(sys, block);
  if (!terms) return std::nullopt;
  const BigInt bp = big(p);
  BigInt count = 1;
  std::size_t fixed = 0;
  for (const auto& t : *terms) {
    if (mpz_divisible_p(t.coeff.get_mpz_t(), bp.get_mpz_t())) return std::nullopt;
    const std::uint32_t e = block == Block::y ? t.ey : t.ex;
    if (e % p == 0) return std::nullopt;
    if (sys.n2() == 0) {
      fixed += 1;
    } else {
      count *= e >= 2 ? big(2 * p - 1) : bp;
      fixed += 2;
    }
  }
  return count * big_pow(p, sys.num_vars() - fixed);
}

DimEstimate dim_estimate(const BihomSystem& sys, Block block,
                         std::span<const std::uint64_t> primes, const Budget& budget) {
  DimEstimate est;
  est.ambient = sys.num_vars();
  const auto exact = exact_codim_diagonal(sys, block);
  for (std::uint64_t p : primes) {
    check_prime(p);
    if (excluded_prime(sys, p)) {
      est.skipped_primes.push_back(p);
      continue;
    }
    try {
      est.counts.emplace_back(p, rank_locus_count(sys, block, p, budget));
    } catch (const BudgetError&) {
      if (!exact) throw;
    }
  }
  if (exact) {
    est.exact = true;
    est.dim = exact->dim;
    est.codim = exact->codim;
    est.certificate = exact->certificate;
    if (est.counts.size() >= 1) {
      DimEstimate fitted = est;
      fit(fitted);
      est.slope = fitted.slope;
      est.residual = fitted.residual;
    } else {
      est.slope = est.dim;
    }
    return est;
  }
  if (est.counts.size() < 2) {
    throw InputError("dimension estimate needs at least two usable primes");
  }
  fit(est);
  return est;
}

HalvingReport verify_codim_halving(const IntPolynomial& F, std::span<const std::uint64_t> primes,
                                   const Budget& budget) {
  HalvingReport rep;
  const BihomSystem single(F.num_vars(), 0, {F});
  const BihomSystem G = bihomogenize(F);
  rep.F = dim_estimate(single, Block::full, primes, budget);
  rep.G1 = dim_estimate(G, Block::x, primes, budget);
  rep.G2 = dim_estimate(G, Block::y, primes, budget);
  rep.lhs = std::min(rep.G1.codim, rep.G2.codim);
  rep.rhs = rep.F.codim / 2.0;
  rep.ok = rep.lhs >= rep.rhs;
  rep.advisory = !(rep.F.exact && rep.G1.exact && rep.G2.exact);
  return rep;
}

BigInt t_k_count(const IntPolynomial& F, std::size_t k, std::uint64_t p, const Budget& budget) {
  check_prime(p);
  const std::size_t n = F.num_vars();
  if (k > n) throw InputError("k must not exceed the number of variables");
  budget.require(std::pow(static_cast<double>(p), static_cast<double>(k)), "T_k count");
  std::vector<ModEvaluator> ev;
  for (std::size_t j = 0; j < k; ++j) ev.emplace_back(F.derivative(j), p);
  auto parts = map_tuples<std::uint64_t>(
      std::vector<std::uint64_t>(k, p),
      [&](std::uint64_t& acc, const std::vector<std::uint64_t>& digits) {
        thread_local std::vector<std::uint64_t> pt;
        pt.assign(n, 0);
        for (std::size_t i = 0; i < k; ++i) pt[i] = digits[i];
        for (const auto& e : ev) {
          if (e(pt) != 0) return;
        }
        ++acc;
      });
  BigInt total = 0;
  for (auto c : parts) total += big(c);
  return total;
}

RestrictionReport restriction_inequality_check(const BihomSystem& sys,
                                               std::span<const std::size_t> x_zero,
                                               std::span<const std::size_t> y_zero,
                                               std::span<const std::uint64_t> primes,
                                               const Budget& budget) {
  RestrictionReport rep;
  const std::set<std::size_t> xs(x_zero.begin(), x_zero.end());
  const std::set<std::size_t> ys(y_zero.begin(), y_zero.end());
  rep.s = xs.size();
  rep.t = ys.size();
  const std::vector<std::size_t> xv(xs.begin(), xs.end());
  const std::vector<std::size_t> yv(ys.begin(), ys.end());
  const BihomSystem F = restrict_zero(sys, xv, yv);
  for (const auto& f : F.polys()) {
    if (f.is_zero()) throw InputError("restricted system has a zero form");
  }
  rep.G1 = dim_estimate(sys, Block::x, primes, budget);
  rep.G2 = dim_estimate(sys, Block::y, primes, budget);
  rep.F1 = dim_estimate(F, Block::x, primes, budget);
  rep.F2 = dim_estimate(F, Block::y, primes, budget);
  rep.lhs = std::min(rep.F1.codim, rep.F2.codim);
  rep.rhs = std::min(rep.G1.codim, rep.G2.codim) -
            static_cast<int>((rep.s + rep.t) * (sys.R() + 1));
  rep.ok = rep.lhs >= rep.rhs;
  rep.advisory = !(rep.G1.exact && rep.G2.exact && rep.F1.exact && rep.F2.exact);
  return rep;
}

BigInt threshold_two_semiprimes(int d) {
  if (d < 2) throw InputError("degree must be at least 2");
  return big_pow(4, static_cast<std::uint64_t>(d)) * 8 * (2 * d - 1);
}

SqrtThreshold threshold_prime_comparison(std::uint64_t n, int d) {
  if (d < 2) throw InputError("degree must be at least 2");
  if (n == 0) throw InputError("n must be positive");
  SqrtThreshold out;
  out.integer_part = BigInt(384) * d * (d + 1) * big(n);
  out.radicand = n;
  const BigInt bn = big(n);
  if (mpz_perfect_square_p(bn.get_mpz_t())) out.exact = out.integer_part * sqrt(bn);
  out.value = out.integer_part.get_d() * std::sqrt(static_cast<double>(n));
  return out;
}

Rational threshold_bihomogeneous(int d1, int d2, std::uint64_t R, const Rational& b) {
  if (d1 < 1 || d2 < 1 || R == 0) throw InputError("need d1, d2, R >= 1");
  if (b < 1) throw InputError("b = log P1 / log P2 must be at least 1");
  const Rational r(big(R));
  const Rational degree_term = 2 * r * (r + 1) * (d1 + d2 - 1);
  const Rational box_term = r * (b * d1 + d2);
  Rational out = big_pow(2, static_cast<std::uint64_t>(d1 + d2)) * std::max(degree_term, box_term);
  out.canonicalize();
  return out;
}

Rational threshold_semiprime_delta(int d, const Rational& delta) {
  if (d < 2) throw InputError("degree must be at least 2");
  if (delta <= 0 || delta > Rational(1, 2)) throw InputError("delta must lie in (0, 1/2]");
  const Rational a(4 * (2 * d - 1));
  const Rational b = Rational(d) / delta;
  Rational out = 2 * big_pow(4, static_cast<std::uint64_t>(d)) * std::max(a, b);
  out.canonicalize();
  return out;
}

}  // namespace cml

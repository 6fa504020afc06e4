#include "cml/arcs.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cml/densities.hpp"
#include "cml/error.hpp"
#include "cml/numeric.hpp"
#include "cml/parallel.hpp"
#include "cml/poly_eval.hpp"

namespace cml {
namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

double arc_exponent(const ArcGeometry& geo) {
  return static_cast<double>(geo.R) * (geo.d1 + geo.d2 - 1);
}

void check_geometry(const ArcGeometry& geo) {
  if (geo.R == 0) throw InputError("R must be positive");
  if (geo.d1 < 0 || geo.d2 < 0 || geo.d1 + geo.d2 < 1) throw InputError("invalid bidegree");
  if (!(geo.log_P > 0.0)) throw InputError("P must exceed 1");
}

// Phase sum_r alpha_r g_r(point) reduced mod 1, exact in the products.
struct PhaseEvaluator {
  std::vector<IntEvaluator> evals;
  std::vector<double> alpha;

  PhaseEvaluator(const BihomSystem& sys, std::span<const double> a)
      : alpha(a.begin(), a.end()) {
    for (const auto& g : sys.polys()) evals.emplace_back(g);
  }

  double operator()(std::span<const std::int64_t> point) const {
    double phase = 0.0;
    for (std::size_t r = 0; r < evals.size(); ++r) {
      if (auto v = evals[r].try_eval(point)) {
        phase += frac_product(alpha[r], *v);
      } else {
        phase += frac_product(alpha[r], evals[r].eval(point));
      }
    }
    return frac(phase);
  }
};

void check_alpha(const BihomSystem& sys, std::span<const double> alpha) {
  if (alpha.size() != sys.R()) throw InputError("alpha must have one entry per form");
  for (double a : alpha) {
    if (!std::isfinite(a)) throw InputError("alpha must be finite");
  }
}

double log_square_sum(const PrimeTable& table, std::uint64_t P) {
  CompensatedSum s;
  for (std::uint64_t p : table.primes_up_to(P)) {
    const double l = std::log(static_cast<double>(p));
    s.add(l * l);
  }
  return s.value();
}

}  // namespace

double log_P_of(double P1, double P2, int d1, int d2) {
  if (!(P1 > 1.0) || !(P2 > 1.0)) throw InputError("P1 and P2 must exceed 1");
  return d1 * std::log(P1) + d2 * std::log(P2);
}

double weyl_exponent_K(double min_codim, double delta0, int d1, int d2) {
  return (min_codim - delta0) / std::ldexp(1.0, d1 + d2);
}

ArcContext schedule(const ScheduleParams& p) {
  if (p.R == 0 || p.d1 < 1 || p.d2 < 1) throw InputError("schedule needs R >= 1, d1, d2 >= 1");
  if (!(p.b >= 1.0)) throw InputError("b = log P1 / log P2 must be at least 1 (P1 >= P2)");
  if (!(p.delta0 > 0.0) || !(p.eps0 > 0.0) || !(p.C > 0.0)) {
    throw InputError("delta0, eps0 and C must be positive");
  }
  if (!(p.log_P > std::exp(1.0))) throw InputError("log P must exceed e");
  ArcContext ctx;
  ctx.params = p;
  const double R = static_cast<double>(p.R);
  const double degree_term = 2.0 * R * (R + 1.0) * (p.d1 + p.d2 - 1);
  const double box_term = R * (p.b * p.d1 + p.d2);
  ctx.max_term = std::max(degree_term, box_term);
  ctx.log_P2 = p.log_P / (p.b * p.d1 + p.d2);
  ctx.log_P1 = p.b * ctx.log_P2;

  const double codim_bound = std::ldexp(1.0, p.d1 + p.d2) * ctx.max_term;
  if (!(p.min_codim > codim_bound)) {
    throw HypothesisError("min codim " + fmt(p.min_codim) + " fails codim > 2^{d1+d2} max{" +
                          fmt(degree_term) + ", " + fmt(box_term) + "} = " + fmt(codim_bound));
  }
  ctx.K = weyl_exponent_K(p.min_codim, p.delta0, p.d1, p.d2);
  if (!(ctx.K > 4.0 * ctx.max_term)) {
    throw HypothesisError("K = " + fmt(ctx.K) + " fails K > 4 max{" + fmt(degree_term) + ", " +
                          fmt(box_term) + "} = " + fmt(4.0 * ctx.max_term));
  }
  ctx.sigma = 0.5 * (ctx.K / 4.0 - ctx.max_term);
  ctx.zeta = (2.0 * degree_term + 4.0 * ctx.sigma) / ctx.K;
  if (!(ctx.zeta > 0.0 && ctx.zeta < 1.0)) {
    throw HypothesisError("zeta = " + fmt(ctx.zeta) + " is not in (0, 1)");
  }
  ctx.theta0 = 1.0 / (p.b * p.d1 + p.d2);
  if (!(ctx.theta0 * ctx.K / 4.0 > R + p.eps0)) {
    throw HypothesisError("theta0 K / 4 = " + fmt(ctx.theta0 * ctx.K / 4.0) +
                          " fails > R + eps0 = " + fmt(R + p.eps0));
  }
  const double cap = p.C * std::log(p.log_P);
  if (!(ctx.theta0 * p.log_P > cap)) {
    throw HypothesisError("P too small: P^{theta0} <= (log P)^C, so no shrinking step exists");
  }
  ctx.thetas.push_back(ctx.theta0);
  while (ctx.thetas.back() * p.log_P > cap) {
    if (ctx.thetas.size() > 100000) throw HypothesisError("schedule does not terminate");
    ctx.thetas.push_back(ctx.zeta * ctx.thetas.back());
  }
  ctx.M = ctx.thetas.size() - 1;
  ctx.C0 = ctx.thetas.back() * p.log_P / std::log(p.log_P);
  if (!(p.C * ctx.zeta < ctx.C0 && ctx.C0 <= p.C)) {
    throw HypothesisError("C0 = " + fmt(ctx.C0) + " escapes (C zeta, C]");
  }
  return ctx;
}

ArcLocation major_arc_locate(std::span<const double> alpha, double theta, const ArcGeometry& geo,
                             const Budget& budget) {
  check_geometry(geo);
  if (alpha.size() != geo.R) throw InputError("alpha must have R coordinates");
  for (double a : alpha) {
    if (!(a >= 0.0 && a < 1.0)) throw InputError("alpha must lie in [0,1)^R");
  }
  if (!(theta >= 0.0)) throw InputError("theta must be non-negative");
  ArcLocation loc;
  const double e = arc_exponent(geo) * theta;
  loc.q_bound = std::exp(geo.log_P * e);
  loc.width = std::exp(geo.log_P * (e - 1.0));
  const double q_max = std::floor(loc.q_bound * (1.0 + 1e-12));
  budget.require(q_max, "major arc scan");
  const auto last = static_cast<std::uint64_t>(q_max);
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<std::int64_t> a(geo.R);
  std::vector<double> dist(geo.R);
  for (std::uint64_t q = 1; q <= last; ++q) {
    bool inside = true;
    for (std::size_t r = 0; r < geo.R && inside; ++r) {
      const double prod = static_cast<double>(q) * alpha[r];
      a[r] = std::llround(prod);
      dist[r] = std::abs(prod - static_cast<double>(a[r]));
      inside = 2.0 * dist[r] <= loc.width * (1.0 + 1e-12) + 4.0 * eps * static_cast<double>(q);
    }
    if (inside) {
      loc.major = true;
      loc.q = q;
      loc.a = a;
      loc.distance = dist;
      return loc;
    }
  }
  return loc;
}

MeasureBound arc_measure_bound(double theta, const ArcGeometry& geo, const Budget& budget) {
  check_geometry(geo);
  const double R = static_cast<double>(geo.R);
  MeasureBound out;
  out.log_bound = geo.log_P * (-R + R * (R + 1.0) * (geo.d1 + geo.d2 - 1) * theta);
  out.bound = std::exp(out.log_bound);
  const double e = arc_exponent(geo) * theta;
  const double q_bound = std::floor(std::exp(geo.log_P * e) * (1.0 + 1e-12));
  const double width = std::exp(geo.log_P * (e - 1.0));
  const double cap = std::min<double>(static_cast<double>(budget.max_points), 1e6);
  if (q_bound <= cap) {
    CompensatedSum total;
    for (std::uint64_t q = 1; q <= static_cast<std::uint64_t>(q_bound); ++q) {
      double count = 0.0;
      for (std::uint64_t e2 : divisors(q)) {
        count += mobius(e2) * std::pow(static_cast<double>(q / e2 + 1), R);
      }
      total.add(count * std::pow(width / static_cast<double>(q), R));
    }
    out.overcount = total.value();
  }
  return out;
}

std::complex<double> exp_sum_S(const BihomSystem& sys, std::span<const double> alpha,
                               std::uint64_t P1, std::uint64_t P2, const PrimeTable& table,
                               const Budget& budget) {
  check_alpha(sys, alpha);
  const auto px = table.primes_up_to(P1);
  const auto py = table.primes_up_to(P2);
  std::vector<std::uint64_t> radices(sys.n1(), px.size());
  radices.insert(radices.end(), sys.n2(), py.size());
  budget.require(tuple_count(radices), "S(alpha) prime tuples");
  std::vector<double> lx;
  std::vector<double> ly;
  for (auto p : px) lx.push_back(std::log(static_cast<double>(p)));
  for (auto p : py) ly.push_back(std::log(static_cast<double>(p)));
  const PhaseEvaluator phase(sys, alpha);
  const std::size_t n1 = sys.n1();
  const std::size_t n = sys.num_vars();
  auto parts = map_tuples<ComplexSum>(radices, [&](ComplexSum& acc,
                                                   const std::vector<std::uint64_t>& d) {
    thread_local std::vector<std::int64_t> pt;
    pt.resize(n);
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i < n1) {
        pt[i] = static_cast<std::int64_t>(px[d[i]]);
        w *= lx[d[i]];
      } else {
        pt[i] = static_cast<std::int64_t>(py[d[i]]);
        w *= ly[d[i]];
      }
    }
    acc.add(w * unit_phase(phase(pt)));
  });
  ComplexSum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

std::complex<double> exp_sum_T(const BihomSystem& sys, std::span<const double> alpha,
                               std::uint64_t P1, std::uint64_t P2, const Budget& budget) {
  check_alpha(sys, alpha);
  const std::size_t n1 = sys.n1();
  const std::size_t n2 = sys.n2();
  const std::vector<std::uint64_t> rx(n1, P1 + 1);
  const std::vector<std::uint64_t> ry(n2, P2 + 1);
  const double X = tuple_count(rx);
  const double Y = tuple_count(ry);
  budget.require(X * X * Y * Y, "T(alpha) lattice");
  const auto nx = static_cast<std::uint64_t>(X);
  const auto ny = static_cast<std::uint64_t>(Y);
  const PhaseEvaluator phase(sys, alpha);
  std::vector<std::complex<double>> E(nx * ny);
  map_partitions<int>(kPartitions, [&](std::size_t part) {
    const auto [lo, hi] = partition_range(nx, kPartitions, part);
    std::vector<std::int64_t> pt(n1 + n2);
    Odometer ox(rx);
    ox.seek(lo);
    for (std::uint64_t x = lo; x < hi; ++x, ox.advance()) {
      for (std::size_t i = 0; i < n1; ++i) pt[i] = static_cast<std::int64_t>(ox[i]);
      Odometer oy(ry);
      for (std::uint64_t y = 0; y < ny; ++y, oy.advance()) {
        for (std::size_t j = 0; j < n2; ++j) pt[n1 + j] = static_cast<std::int64_t>(oy[j]);
        E[x * ny + y] = unit_phase(phase(pt));
      }
    }
    return 0;
  });
  auto parts = map_partitions<CompensatedSum>(kPartitions, [&](std::size_t part) {
    CompensatedSum acc;
    const auto [lo, hi] = partition_range(nx, kPartitions, part);
    for (std::uint64_t x = lo; x < hi; ++x) {
      const std::complex<double>* ex = &E[x * ny];
      for (std::uint64_t x2 = 0; x2 < nx; ++x2) {
        const std::complex<double>* ex2 = &E[x2 * ny];
        ComplexSum h;
        for (std::uint64_t y = 0; y < ny; ++y) h.add(ex[y] * std::conj(ex2[y]));
        acc.add(std::norm(h.value()));
      }
    }
    return acc;
  });
  CompensatedSum total;
  for (const auto& p : parts) total.add(p);
  return {total.value(), 0.0};
}

WeylChain weyl_chain(const BihomSystem& sys, std::span<const double> alpha, std::uint64_t P1,
                     std::uint64_t P2, const PrimeTable& table, double slack,
                     const Budget& budget) {
  WeylChain w;
  w.S = exp_sum_S(sys, alpha, P1, P2, table, budget);
  w.T = exp_sum_T(sys, alpha, P1, P2, budget).real();
  w.W1 = std::pow(log_square_sum(table, P1), 2.0 * static_cast<double>(sys.n1()));
  w.W2 = std::pow(log_square_sum(table, P2), 2.0 * static_cast<double>(sys.n2()));
  const double s2 = std::norm(w.S);
  w.lhs = s2 * s2;
  w.rhs = w.W1 * w.W2 * w.T;
  w.ok = w.lhs <= w.rhs * (1.0 + slack);
  return w;
}

ScanReport dichotomy_scan_at(const BihomSystem& sys, double theta, double K,
                             const std::vector<std::vector<double>>& alphas, std::uint64_t P1,
                             std::uint64_t P2, const PrimeTable& table, const Budget& budget) {
  ScanReport rep;
  rep.theta = theta;
  rep.K = K;
  const ArcGeometry geo{log_P_of(static_cast<double>(P1), static_cast<double>(P2), sys.d1(),
                                 sys.d2()),
                        sys.d1(), sys.d2(), sys.R()};
  const double n1 = static_cast<double>(sys.n1());
  const double n2 = static_cast<double>(sys.n2());
  rep.scale = std::pow(static_cast<double>(P1), n1) * std::pow(static_cast<double>(P2), n2) *
              std::exp(-K * theta / 4.0 * geo.log_P) * std::pow(geo.log_P, n1 + n2 / 2.0);
  for (const auto& alpha : alphas) {
    ScanSample s;
    s.alpha = alpha;
    const ArcLocation loc = major_arc_locate(alpha, theta, geo, budget);
    s.major = loc.major;
    s.q = loc.q;
    s.abs_S = std::abs(exp_sum_S(sys, alpha, P1, P2, table, budget));
    if (loc.major) {
      ++rep.major_count;
    } else {
      ++rep.minor_count;
      s.ratio = s.abs_S / rep.scale;
      rep.max_ratio = std::max(rep.max_ratio.value_or(0.0), *s.ratio);
    }
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

ScanReport dichotomy_scan(const BihomSystem& sys, double theta, double K, std::size_t count,
                          std::uint64_t seed, std::uint64_t P1, std::uint64_t P2,
                          const PrimeTable& table, const Budget& budget) {
  const std::vector<double> shift = random_shift(sys.R(), seed);
  std::vector<std::vector<double>> alphas;
  alphas.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> a(sys.R());
    for (std::size_t r = 0; r < sys.R(); ++r) a[r] = frac(halton(i + 1, r) + shift[r]);
    alphas.push_back(std::move(a));
  }
  return dichotomy_scan_at(sys, theta, K, alphas, P1, P2, table, budget);
}

CompleteSumReport complete_sum_check(const BihomSystem& sys, std::uint64_t q,
                                     std::span<const std::int64_t> a, double K_tilde,
                                     const Budget& budget) {
  if (q == 0) throw InputError("q must be positive");
  if (a.size() != sys.R()) throw InputError("a must have one entry per form");
  std::uint64_t g = q;
  for (auto ar : a) {
    const auto m = static_cast<std::uint64_t>(((ar % static_cast<std::int64_t>(q)) +
                                               static_cast<std::int64_t>(q)) %
                                              static_cast<std::int64_t>(q));
    g = std::gcd(g, m);
  }
  if (g != 1) throw InputError("complete sum needs gcd(q, a_1, ..., a_R) = 1");
  CompleteSumReport rep;
  rep.q = q;
  rep.a.assign(a.begin(), a.end());
  rep.sum = residue_counts(sys, q, a, false, budget).exponential_sum();
  rep.abs_sum = std::abs(rep.sum);
  rep.K_tilde = K_tilde;
  const double n = static_cast<double>(sys.num_vars());
  const int dd = sys.d1() + sys.d2() - 1;
  rep.exponent = dd > 0 ? n - K_tilde / (static_cast<double>(sys.R()) * dd) : n;
  rep.reference = std::pow(static_cast<double>(q), rep.exponent);
  rep.ratio = rep.abs_sum / rep.reference;
  if (q > 1 && rep.abs_sum > 1e-9) {
    rep.log_ratio = std::log(rep.abs_sum) / std::log(static_cast<double>(q));
  }
  return rep;
}

}  // namespace cml

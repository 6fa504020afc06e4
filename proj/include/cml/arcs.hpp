#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cml/budget.hpp"
#include "cml/poly.hpp"
#include "cml/primes.hpp"

namespace cml {

// The quantities an arc classification needs: log P with
// P = P1^{d1} P2^{d2}, the bidegree and R.
struct ArcGeometry {
  double log_P = 0.0;
  int d1 = 0;
  int d2 = 0;
  std::size_t R = 1;
};

double log_P_of(double P1, double P2, int d1, int d2);

// K = (min codim - delta0) / 2^{d1+d2}.
double weyl_exponent_K(double min_codim, double delta0, int d1, int d2);

struct ScheduleParams {
  double min_codim = 0.0;
  int d1 = 2;
  int d2 = 2;
  std::size_t R = 1;
  double b = 1.0;  // log P1 / log P2
  double delta0 = 0.5;
  double eps0 = 1e-3;
  double C = 10.0;
  double log_P = 1000.0;
};

struct ArcContext {
  ScheduleParams params;
  double log_P1 = 0.0;
  double log_P2 = 0.0;
  double max_term = 0.0;  // max{2R(R+1)(d1+d2-1), R(b d1 + d2)}
  double K = 0.0;
  double sigma = 0.0;
  double zeta = 0.0;
  double theta0 = 0.0;
  std::vector<double> thetas;  // theta_0 .. theta_M
  std::size_t M = 0;
  double C0 = 0.0;

  ArcGeometry geometry() const {
    return {params.log_P, params.d1, params.d2, params.R};
  }
};

// Throws HypothesisError naming the failed condition: the codimension
// bound, K > 4 max{...}, theta0 K / 4 > R + eps0, zeta in (0,1), or P too
// small for the bracketing P^{theta_M} <= (log P)^C < P^{theta_{M-1}}.
ArcContext schedule(const ScheduleParams& params);

struct ArcLocation {
  bool major = false;
  std::uint64_t q = 0;
  std::vector<std::int64_t> a;
  std::vector<double> distance;  // |q alpha_r - a_r|
  double q_bound = 0.0;          // P^{R(d1+d2-1) theta}
  double width = 0.0;            // P^{-1} P^{R(d1+d2-1) theta}
};

// Smallest q <= q_bound with 2|q alpha_r - a_r| <= width for all r (a_r the
// nearest integer to q alpha_r). The minimal q forces gcd(q, a) = 1.
ArcLocation major_arc_locate(std::span<const double> alpha, double theta, const ArcGeometry& geo,
                             const Budget& budget = Budget::exp_sum());

struct MeasureBound {
  double log_bound = 0.0;  // log of P^{-R + R(R+1)(d1+d2-1) theta}
  double bound = 0.0;
  // sum over q <= q_bound of #{a : gcd(q,a) = 1} (width / q)^R, when the
  // q range fits the budget.
  std::optional<double> overcount;
};

MeasureBound arc_measure_bound(double theta, const ArcGeometry& geo,
                               const Budget& budget = Budget::exp_sum());

// S(alpha) = sum over prime x <= P1, prime y <= P2 of
// prod log(x_i) prod log(y_j) e(sum_r alpha_r g_r(x; y)).
std::complex<double> exp_sum_S(const BihomSystem& sys, std::span<const double> alpha,
                               std::uint64_t P1, std::uint64_t P2, const PrimeTable& table,
                               const Budget& budget = Budget::exp_sum());

// T(alpha): sum of e(sum_r alpha_r d_r(u; v)) over the lattice box
// [0,P1]^{2 n1} x [0,P2]^{2 n2}, evaluated in the factored form
// sum_{x, x'} |sum_y E(x,y) conj E(x',y)|^2 with E(x,y) = e(sum alpha g(x;y)).
std::complex<double> exp_sum_T(const BihomSystem& sys, std::span<const double> alpha,
                               std::uint64_t P1, std::uint64_t P2,
                               const Budget& budget = Budget::exp_sum());

struct WeylChain {
  std::complex<double> S;
  double T = 0.0;
  double W1 = 0.0;  // (sum_{p <= P1} log^2 p)^{2 n1}
  double W2 = 0.0;  // (sum_{p <= P2} log^2 p)^{2 n2}
  double lhs = 0.0;  // |S|^4
  double rhs = 0.0;  // W1 W2 T
  bool ok = false;   // lhs <= rhs (1 + slack)
};

WeylChain weyl_chain(const BihomSystem& sys, std::span<const double> alpha, std::uint64_t P1,
                     std::uint64_t P2, const PrimeTable& table, double slack = 1e-9,
                     const Budget& budget = Budget::exp_sum());

struct ScanSample {
  std::vector<double> alpha;
  bool major = false;
  std::uint64_t q = 0;
  double abs_S = 0.0;
  std::optional<double> ratio;  // minor samples only
};

struct ScanReport {
  double theta = 0.0;
  double K = 0.0;
  double scale = 0.0;  // P1^{n1} P2^{n2} P^{-K theta / 4} (log P)^{n1 + n2/2}
  std::vector<ScanSample> samples;
  std::size_t major_count = 0;
  std::size_t minor_count = 0;
  std::optional<double> max_ratio;
};

// Classifies each alpha at theta; for minor alphas records |S(alpha)| / scale.
ScanReport dichotomy_scan_at(const BihomSystem& sys, double theta, double K,
                             const std::vector<std::vector<double>>& alphas, std::uint64_t P1,
                             std::uint64_t P2, const PrimeTable& table,
                             const Budget& budget = Budget::exp_sum());
// Same over `count` shifted Halton points seeded by `seed`.
ScanReport dichotomy_scan(const BihomSystem& sys, double theta, double K, std::size_t count,
                          std::uint64_t seed, std::uint64_t P1, std::uint64_t P2,
                          const PrimeTable& table, const Budget& budget = Budget::exp_sum());

struct CompleteSumReport {
  std::uint64_t q = 1;
  std::vector<std::int64_t> a;
  std::complex<double> sum;
  double abs_sum = 0.0;
  double K_tilde = 0.0;
  double exponent = 0.0;   // n - K_tilde / (R (d1 + d2 - 1))
  double reference = 0.0;  // q^exponent
  double ratio = 0.0;      // |sum| / reference
  std::optional<double> log_ratio;  // log|sum| / log q, q > 1 and sum != 0
};

// Complete sum over all residues x mod q of e(sum_r a_r g_r(x) / q).
CompleteSumReport complete_sum_check(const BihomSystem& sys, std::uint64_t q,
                                     std::span<const std::int64_t> a, double K_tilde,
                                     const Budget& budget = Budget::density());

}  // namespace cml

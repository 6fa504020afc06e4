#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cml/budget.hpp"
#include "cml/numeric.hpp"
#include "cml/poly.hpp"

namespace cml {

// Which partial derivatives enter the Jacobian: the x-block (1), the
// y-block (2) or every variable (0, used for V_F^* of a single form).
enum class Block { full = 0, x = 1, y = 2 };

Block block_from_int(int b);

using PolyMatrix = std::vector<std::vector<IntPolynomial>>;

// R x n_block matrix of formal partials.
PolyMatrix jacobian(const BihomSystem& sys, Block block);

// Number of F_p points of the full (x, y) space where the block Jacobian has
// rank < R. Variables that appear in no Jacobian entry contribute a factor p.
BigInt rank_locus_count(const BihomSystem& sys, Block block, std::uint64_t p,
                        const Budget& budget = Budget::geometry());

struct DimEstimate {
  std::size_t ambient = 0;
  std::vector<std::pair<std::uint64_t, BigInt>> counts;
  std::vector<std::uint64_t> skipped_primes;  // divide a coefficient or the degree
  // -1 encodes the empty-locus sentinel (dim = -infinity); codim is then
  // ambient + 1.
  int dim = 0;
  int codim = 0;
  double slope = 0.0;
  double residual = 0.0;  // RMS residual of the log-log fit
  bool exact = false;
  std::string certificate;
};

// Closed form for systems recognized as separated diagonal (R = 1, every
// term c x_i^{e} y_j^{f} on its own variables, e, f >= 1, or every term
// c x_i^d with d >= 2 when n2 = 0): codim is the number of terms.
std::optional<DimEstimate> exact_codim_diagonal(const BihomSystem& sys, Block block);

// Counts at each usable prime, least-squares slope of log count against
// log p, rounded. Uses the closed form instead when one applies.
DimEstimate dim_estimate(const BihomSystem& sys, Block block,
                         std::span<const std::uint64_t> primes,
                         const Budget& budget = Budget::geometry());

// Point count over F_p implied by the diagonal closed form.
std::optional<BigInt> diagonal_locus_count(const BihomSystem& sys, Block block, std::uint64_t p);

struct HalvingReport {
  DimEstimate F;
  DimEstimate G1;
  DimEstimate G2;
  double lhs = 0.0;  // min{codim V_{G,1}^*, codim V_{G,2}^*}
  double rhs = 0.0;  // codim V_F^* / 2
  bool ok = false;
  bool advisory = false;  // some codim is an estimate
};

// min{codim V_{G,1}^*, codim V_{G,2}^*} >= codim V_F^* / 2 for
// G(x; y) = F(x_1 y_1, ..., x_n y_n).
HalvingReport verify_codim_halving(const IntPolynomial& F, std::span<const std::uint64_t> primes,
                                   const Budget& budget = Budget::geometry());

// #{x in F_p^n : dF/dx_1 = ... = dF/dx_k = 0, x_{k+1} = ... = x_n = 0}.
BigInt t_k_count(const IntPolynomial& F, std::size_t k, std::uint64_t p,
                 const Budget& budget = Budget::geometry());

struct RestrictionReport {
  std::size_t s = 0;
  std::size_t t = 0;
  DimEstimate G1;
  DimEstimate G2;
  DimEstimate F1;
  DimEstimate F2;
  int lhs = 0;  // min codim of the restricted loci
  int rhs = 0;  // min codim of the G loci - (s + t)(R + 1)
  bool ok = false;
  bool advisory = false;
};

RestrictionReport restriction_inequality_check(const BihomSystem& sys,
                                               std::span<const std::size_t> x_zero,
                                               std::span<const std::size_t> y_zero,
                                               std::span<const std::uint64_t> primes,
                                               const Budget& budget = Budget::geometry());

// 4^d 8 (2d - 1).
BigInt threshold_two_semiprimes(int d);
// 384 n^{3/2} d (d + 1) = integer_part * sqrt(n); value is the double.
struct SqrtThreshold {
  BigInt integer_part;  // 384 d (d + 1) n
  std::uint64_t radicand = 0;  // n
  std::optional<BigInt> exact;  // when n is a perfect square
  double value = 0.0;
};
SqrtThreshold threshold_prime_comparison(std::uint64_t n, int d);
// 2^{d1+d2} max{2R(R+1)(d1+d2-1), R(b d1 + d2)}.
Rational threshold_bihomogeneous(int d1, int d2, std::uint64_t R, const Rational& b);
// 2 4^d max{4(2d - 1), d / delta}, 0 < delta <= 1/2.
Rational threshold_semiprime_delta(int d, const Rational& delta);

}  // namespace cml

#pragma once

#include <cstdint>
#include <string_view>

namespace cml {

// Default point budgets. The environment variable CML_BUDGET, when set to a
// positive integer, replaces every default below.
inline constexpr std::uint64_t kDensityBudget = 100'000'000;   // residues mod p^t
inline constexpr std::uint64_t kCountBudget = 10'000'000;      // prime / semiprime tuples
inline constexpr std::uint64_t kGeometryBudget = 100'000'000;  // F_p points
inline constexpr std::uint64_t kExpSumBudget = 100'000'000;    // lattice terms
inline constexpr std::uint64_t kQuadratureBudget = 1u << 22;   // integrand evaluations

struct Budget {
  std::uint64_t max_points;

  static Budget density();
  static Budget count();
  static Budget geometry();
  static Budget exp_sum();
  static Budget quadrature();

  // Throws BudgetError when `needed` (possibly astronomically large, hence
  // a double) exceeds max_points.
  void require(double needed, std::string_view what) const;
};

// Returns the CML_BUDGET override if present, otherwise `fallback`.
std::uint64_t budget_or_env(std::uint64_t fallback);

}  // namespace cml

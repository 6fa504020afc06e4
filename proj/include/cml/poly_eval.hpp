#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cml/poly.hpp"

namespace cml {

// Fast evaluation of one polynomial modulo a 64-bit modulus. Coordinates
// must already be reduced into [0, modulus).
class ModEvaluator {
 public:
  ModEvaluator(const IntPolynomial& p, std::uint64_t modulus);

  std::uint64_t operator()(std::span<const std::uint64_t> point) const;
  std::uint64_t modulus() const { return modulus_; }

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
  };
  struct CompiledTerm {
    std::uint64_t coeff;
    std::vector<Factor> factors;
  };
  std::uint64_t modulus_;
  std::vector<CompiledTerm> terms_;
};

// Exact integer evaluation with an int64 fast path. try_eval returns nullopt
// when an intermediate overflows; eval always succeeds via GMP.
class IntEvaluator {
 public:
  explicit IntEvaluator(const IntPolynomial& p);

  std::optional<std::int64_t> try_eval(std::span<const std::int64_t> point) const;
  BigInt eval(std::span<const std::int64_t> point) const;
  bool is_zero_at(std::span<const std::int64_t> point) const;

 private:
  struct CompiledTerm {
    std::int64_t coeff;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;
  };
  IntPolynomial poly_;
  bool small_ = true;
  std::vector<CompiledTerm> terms_;
};

// Double-precision value and gradient, for the real searches and quadrature.
class RealEvaluator {
 public:
  explicit RealEvaluator(const IntPolynomial& p);

  double value(std::span<const double> point) const;
  // Writes all partial derivatives into grad (size num_vars).
  void gradient(std::span<const double> point, std::span<double> grad) const;
  std::size_t num_vars() const { return num_vars_; }

 private:
  struct CompiledTerm {
    double coeff;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;
  };
  static double eval_terms(const std::vector<CompiledTerm>& terms,
                           std::span<const double> point);
  static std::vector<CompiledTerm> compile(const IntPolynomial& p);

  std::size_t num_vars_;
  std::vector<CompiledTerm> terms_;
  std::vector<std::vector<CompiledTerm>> partials_;
};

}  // namespace cml

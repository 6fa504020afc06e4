#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cml/numeric.hpp"

namespace cml {

using Exponents = std::vector<std::uint32_t>;

struct Term {
  Exponents exps;
  BigInt coeff;
};

// Sparse multivariate polynomial with arbitrary-precision integer
// coefficients. Terms are kept sorted by exponent vector (lexicographic),
// with distinct exponents and nonzero coefficients, so two polynomials are
// symbolically equal iff their term lists are equal. Immutable once built.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  // Canonicalizes: sorts, merges equal exponents, drops zero coefficients.
  static IntPolynomial from_terms(std::size_t num_vars, std::vector<Term> terms);
  static IntPolynomial constant(std::size_t num_vars, const BigInt& c);
  static IntPolynomial variable(std::size_t num_vars, std::size_t index);
  static IntPolynomial monomial(const BigInt& c, Exponents exps);

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Total degree; -1 for the zero polynomial.
  int degree() const { return degree_; }
  bool is_homogeneous() const;
  // Largest exponent of variable j over all terms.
  std::uint32_t degree_in(std::size_t j) const;
  bool uses_variable(std::size_t j) const { return degree_in(j) > 0; }
  // gcd of all coefficients (0 for the zero polynomial).
  BigInt content() const;

  IntPolynomial operator-() const;
  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const BigInt& c, const IntPolynomial& p);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b);
  IntPolynomial pow(unsigned k) const;

  BigInt eval(std::span<const BigInt> point) const;
  BigInt eval(std::span<const std::int64_t> point) const;
  Rational eval(std::span<const Rational> point) const;
  // Value reduced into [0, modulus).
  BigInt eval_mod(std::span<const BigInt> point, const BigInt& modulus) const;

  // Formal partial derivative in variable j (0-based).
  IntPolynomial derivative(std::size_t j) const;
  // Sum of the terms of total degree exactly `deg`.
  IntPolynomial homogeneous_part(int deg) const;
  // Moves variable i to new index var_map[i] in a ring with new_num_vars
  // variables; several variables may map to the same index.
  IntPolynomial remap(std::size_t new_num_vars, std::span<const std::size_t> var_map) const;
  // Substitutes variable i by subs[i]; all subs share one ring.
  IntPolynomial compose(std::span<const IntPolynomial> subs) const;
  // Sets the flagged variables to zero and removes them from the ring.
  IntPolynomial restrict_zero(const std::vector<bool>& drop) const;

  // Human-readable form using the given variable names (v1, v2, ... when
  // names is empty).
  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  void finalize();

  std::size_t num_vars_ = 0;
  std::vector<Term> terms_;
  int degree_ = -1;
};

// top_homogeneous_part: the degree-`deg` portion; zero when deg exceeds the
// degree of p.
inline IntPolynomial top_homogeneous_part(const IntPolynomial& p, int deg) {
  return p.homogeneous_part(deg);
}

// A system g_1..g_R in n1 + n2 variables; the first n1 are the x-block and
// the remaining n2 the y-block. Top parts G_r are the homogeneous parts of
// the common total degree; the system records their bidegree (d1, d2).
class BihomSystem {
 public:
  BihomSystem() = default;
  // Throws InputError if the top parts are not bihomogeneous of one common
  // bidegree or a polynomial lives in the wrong ring.
  // top_degree < 0 selects the largest total degree among the polys.
  BihomSystem(std::size_t n1, std::size_t n2, std::vector<IntPolynomial> polys,
              int top_degree = -1);

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t num_vars() const { return n1_ + n2_; }
  std::size_t R() const { return polys_.size(); }
  int d1() const { return d1_; }
  int d2() const { return d2_; }
  // Degree of the top parts (d1 + d2 whenever some top part is nonzero).
  int total_degree() const { return top_degree_; }
  // Standing assumption d1 > 1 and d2 > 1; recorded rather than enforced.
  bool degrees_exceed_one() const { return d1_ > 1 && d2_ > 1; }
  const std::vector<IntPolynomial>& polys() const { return polys_; }
  const std::vector<IntPolynomial>& top_parts() const { return top_parts_; }
  const IntPolynomial& poly(std::size_t r) const { return polys_[r]; }
  const IntPolynomial& top_part(std::size_t r) const { return top_parts_[r]; }

  // System of the top parts alone.
  BihomSystem top_system() const { return BihomSystem(n1_, n2_, top_parts_, top_degree_); }

  std::vector<std::string> variable_names() const;

 private:
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  int d1_ = 0;
  int d2_ = 0;
  int top_degree_ = 0;
  std::vector<IntPolynomial> polys_;
  std::vector<IntPolynomial> top_parts_;
};

// G(x; y) = F(x_1 y_1, ..., x_n y_n). Requires F homogeneous.
BihomSystem bihomogenize(const IntPolynomial& F);
// f(x_1 y_1, ..., x_n y_n) for arbitrary f (no homogeneity requirement).
IntPolynomial substitute_products(const IntPolynomial& f);

// d_r(x, x'; y, y') = g(x;y) - g(x;y') - g(x';y) + g(x';y'), variables
// ordered (x, x', y, y'); the result has split (2 n1, 2 n2).
BihomSystem weyl_difference(const BihomSystem& sys);

// Sets x_i (i in x_zero) and y_j (j in y_zero) to zero and drops them.
// Indices are 0-based within their block.
BihomSystem restrict_zero(const BihomSystem& sys, std::span<const std::size_t> x_zero,
                          std::span<const std::size_t> y_zero);

}  // namespace cml

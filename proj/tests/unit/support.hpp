#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cml/poly.hpp"
#include "cml/poly_io.hpp"

namespace testing {

inline cml::IntPolynomial P(const std::string& expr, std::size_t n) {
  return cml::parse_poly(expr, cml::plain_names(n));
}

inline cml::BihomSystem S(std::size_t n1, std::size_t n2, const std::vector<std::string>& exprs) {
  std::vector<cml::IntPolynomial> polys;
  for (const auto& e : exprs) polys.push_back(cml::parse_poly(e, cml::block_names(n1, n2)));
  return cml::BihomSystem(n1, n2, std::move(polys));
}

// Term-by-term evaluation with nothing shared with the library evaluators.
inline cml::BigInt naive_eval(const cml::IntPolynomial& p, const std::vector<long>& pt) {
  cml::BigInt total = 0;
  for (const auto& t : p.terms()) {
    cml::BigInt v = t.coeff;
    for (std::size_t i = 0; i < pt.size(); ++i) {
      for (std::uint32_t k = 0; k < t.exps[i]; ++k) v *= pt[i];
    }
    total += v;
  }
  return total;
}

inline std::vector<cml::BigInt> big(const std::vector<long>& v) {
  return {v.begin(), v.end()};
}

inline std::complex<double> e(double x) {
  return std::polar(1.0, 2.0 * M_PI * x);
}

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t gcd_(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Visits every tuple in [0, radix)^dims.
template <class Fn>
void each_tuple(std::size_t dims, std::uint64_t radix, Fn&& fn) {
  std::vector<long> t(dims, 0);
  while (true) {
    fn(t);
    std::size_t i = 0;
    while (i < dims && ++t[i] == static_cast<long>(radix)) t[i++] = 0;
    if (i == dims) return;
  }
}

}  // namespace testing

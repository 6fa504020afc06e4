#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <gmpxx.h>

namespace cml {

using BigInt = mpz_class;
using Rational = mpq_class;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(const ComplexSum& other) {
    re_.add(other.re_);
    im_.add(other.im_);
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// e(x) = exp(2 pi i x)
inline std::complex<double> unit_phase(double x) {
  const double angle = 2.0 * std::numbers::pi * x;
  return {std::cos(angle), std::sin(angle)};
}

// Fractional part of alpha * v in [0, 1). Every finite double is a dyadic
// rational m / 2^e, so the product is reduced exactly: in 128-bit integers
// when e <= 64, with GMP otherwise.
double frac_product(double alpha, std::int64_t v);
double frac_product(double alpha, const BigInt& v);

// Coordinate `dim` of the Halton point with the given index (dim < 24).
double halton(std::uint64_t index, std::size_t dim);
// Uniform shifts in [0,1)^dims drawn from a seeded mt19937_64.
std::vector<double> random_shift(std::size_t dims, std::uint64_t seed);

// Fractional part in [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace cml

#include "cml/numeric.hpp"

#include <cmath>
#include <iterator>
#include <random>

#include "cml/error.hpp"

namespace cml {
namespace {

// alpha = mantissa / 2^shift with |mantissa| < 2^53.
struct Dyadic {
  std::int64_t mantissa;
  int shift;
};

Dyadic to_dyadic(double alpha) {
  int exp = 0;
  const double mant = std::frexp(alpha, &exp);
  return {static_cast<std::int64_t>(std::ldexp(mant, 53)), 53 - exp};
}

double frac_from_mpz(std::int64_t mantissa, int shift, const BigInt& v) {
  BigInt prod = v * BigInt(static_cast<long>(mantissa));
  if (shift <= 0) return 0.0;
  BigInt r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), prod.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  long exp = 0;
  const double d = mpz_get_d_2exp(&exp, r.get_mpz_t());
  const double f = std::ldexp(d, static_cast<int>(exp) - shift);
  return f >= 1.0 ? 0.0 : f;
}

constexpr std::uint64_t kHaltonBases[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                          41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

}  // namespace

double halton(std::uint64_t index, std::size_t dim) {
  if (dim >= std::size(kHaltonBases)) throw InputError("Halton points support 24 dimensions");
  const std::uint64_t base = kHaltonBases[dim];
  const double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += static_cast<double>(index % base) * f;
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<double> random_shift(std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(dims);
  for (auto& s : shift) s = unit(rng);
  return shift;
}

double frac_product(double alpha, std::int64_t v) {
  if (alpha == 0.0 || v == 0) return 0.0;
  const Dyadic a = to_dyadic(alpha);
  if (a.shift <= 0) return 0.0;
  if (a.shift > 64) return frac_from_mpz(a.mantissa, a.shift, BigInt(static_cast<long>(v)));
  using u128 = unsigned __int128;
  const u128 prod = static_cast<u128>(static_cast<std::uint64_t>(a.mantissa)) *
                    static_cast<u128>(static_cast<std::uint64_t>(v));
  const u128 mask = (a.shift == 64) ? ~static_cast<u128>(0) >> 64
                                    : ((static_cast<u128>(1) << a.shift) - 1);
  const auto r = static_cast<std::uint64_t>(prod & mask);
  const long double f = std::ldexp(static_cast<long double>(r), -a.shift);
  const double out = static_cast<double>(f);
  return out >= 1.0 ? 0.0 : out;
}

double frac_product(double alpha, const BigInt& v) {
  if (alpha == 0.0 || v == 0) return 0.0;
  if (v.fits_slong_p()) return frac_product(alpha, static_cast<std::int64_t>(v.get_si()));
  const Dyadic a = to_dyadic(alpha);
  return frac_from_mpz(a.mantissa, a.shift, v);
}

}  // namespace cml

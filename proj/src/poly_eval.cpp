#include "cml/poly_eval.hpp"

#include "cml/error.hpp"

namespace cml {
namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint32_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  while (exp > 0) {
    if (exp & 1u) result = mulmod(result, base, m);
    exp >>= 1;
    if (exp > 0) base = mulmod(base, base, m);
  }
  return result;
}

}  // namespace

ModEvaluator::ModEvaluator(const IntPolynomial& p, std::uint64_t modulus) : modulus_(modulus) {
  if (modulus == 0) throw InputError("modulus must be positive");
  const BigInt m(static_cast<unsigned long>(modulus));
  for (const auto& t : p.terms()) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), t.coeff.get_mpz_t(), m.get_mpz_t());
    CompiledTerm ct{r.get_ui(), {}};
    if (ct.coeff == 0) continue;
    for (std::uint32_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] > 0) ct.factors.push_back({i, t.exps[i]});
    }
    terms_.push_back(std::move(ct));
  }
}

std::uint64_t ModEvaluator::operator()(std::span<const std::uint64_t> point) const {
  std::uint64_t total = 0;
  for (const auto& t : terms_) {
    std::uint64_t v = t.coeff;
    for (const auto& f : t.factors) {
      const std::uint64_t x = point[f.var];
      v = mulmod(v, f.exp == 1 ? x : powmod(x, f.exp, modulus_), modulus_);
      if (v == 0) break;
    }
    total += v;
    if (total >= modulus_) total -= modulus_;
  }
  return total;
}

IntEvaluator::IntEvaluator(const IntPolynomial& p) : poly_(p) {
  for (const auto& t : p.terms()) {
    if (!t.coeff.fits_slong_p()) {
      small_ = false;
      break;
    }
    CompiledTerm ct{static_cast<std::int64_t>(t.coeff.get_si()), {}};
    for (std::uint32_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] > 0) ct.factors.emplace_back(i, t.exps[i]);
    }
    terms_.push_back(std::move(ct));
  }
}

std::optional<std::int64_t> IntEvaluator::try_eval(std::span<const std::int64_t> point) const {
  if (!small_) return std::nullopt;
  std::int64_t total = 0;
  for (const auto& t : terms_) {
    std::int64_t v = t.coeff;
    for (const auto& [var, exp] : t.factors) {
      const std::int64_t x = point[var];
      for (std::uint32_t k = 0; k < exp; ++k) {
        if (__builtin_mul_overflow(v, x, &v)) return std::nullopt;
      }
    }
    if (__builtin_add_overflow(total, v, &total)) return std::nullopt;
  }
  return total;
}

BigInt IntEvaluator::eval(std::span<const std::int64_t> point) const {
  if (auto v = try_eval(point)) return BigInt(static_cast<long>(*v));
  return poly_.eval(point);
}

bool IntEvaluator::is_zero_at(std::span<const std::int64_t> point) const {
  if (auto v = try_eval(point)) return *v == 0;
  return poly_.eval(point) == 0;
}

std::vector<RealEvaluator::CompiledTerm> RealEvaluator::compile(const IntPolynomial& p) {
  std::vector<CompiledTerm> out;
  for (const auto& t : p.terms()) {
    CompiledTerm ct{t.coeff.get_d(), {}};
    for (std::uint32_t i = 0; i < t.exps.size(); ++i) {
      if (t.exps[i] > 0) ct.factors.emplace_back(i, t.exps[i]);
    }
    out.push_back(std::move(ct));
  }
  return out;
}

RealEvaluator::RealEvaluator(const IntPolynomial& p)
    : num_vars_(p.num_vars()), terms_(compile(p)) {
  partials_.reserve(num_vars_);
  for (std::size_t j = 0; j < num_vars_; ++j) partials_.push_back(compile(p.derivative(j)));
}

double RealEvaluator::eval_terms(const std::vector<CompiledTerm>& terms,
                                 std::span<const double> point) {
  double total = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (const auto& [var, exp] : t.factors) {
      const double x = point[var];
      for (std::uint32_t k = 0; k < exp; ++k) v *= x;
    }
    total += v;
  }
  return total;
}

double RealEvaluator::value(std::span<const double> point) const {
  return eval_terms(terms_, point);
}

void RealEvaluator::gradient(std::span<const double> point, std::span<double> grad) const {
  for (std::size_t j = 0; j < num_vars_; ++j) grad[j] = eval_terms(partials_[j], point);
}

}  // namespace cml

#include "cml/poly.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "cml/error.hpp"

namespace cml {
namespace {

int exps_degree(const Exponents& e) {
  return static_cast<int>(std::accumulate(e.begin(), e.end(), std::uint64_t{0}));
}

void check_same_ring(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.num_vars() != b.num_vars()) {
    throw InputError("polynomials live in rings with " + std::to_string(a.num_vars()) +
                     " and " + std::to_string(b.num_vars()) + " variables");
  }
}

}  // namespace

IntPolynomial IntPolynomial::from_terms(std::size_t num_vars, std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.exps.size() != num_vars) {
      throw InputError("exponent vector of length " + std::to_string(t.exps.size()) +
                       " in a ring with " + std::to_string(num_vars) + " variables");
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exps < b.exps; });
  IntPolynomial p(num_vars);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exps == t.exps) {
      p.terms_.back().coeff += t.coeff;
    } else {
      p.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(p.terms_, [](const Term& t) { return t.coeff == 0; });
  p.finalize();
  return p;
}

void IntPolynomial::finalize() {
  degree_ = -1;
  for (const auto& t : terms_) degree_ = std::max(degree_, exps_degree(t.exps));
}

IntPolynomial IntPolynomial::constant(std::size_t num_vars, const BigInt& c) {
  return from_terms(num_vars, {Term{Exponents(num_vars, 0), c}});
}

IntPolynomial IntPolynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw InputError("variable index out of range");
  Exponents e(num_vars, 0);
  e[index] = 1;
  return from_terms(num_vars, {Term{std::move(e), BigInt(1)}});
}

IntPolynomial IntPolynomial::monomial(const BigInt& c, Exponents exps) {
  const std::size_t n = exps.size();
  return from_terms(n, {Term{std::move(exps), c}});
}

bool IntPolynomial::is_homogeneous() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return exps_degree(t.exps) == degree_; });
}

std::uint32_t IntPolynomial::degree_in(std::size_t j) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exps[j]);
  return d;
}

BigInt IntPolynomial::content() const {
  BigInt g = 0;
  for (const auto& t : terms_) g = gcd(g, t.coeff);
  return g;
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  check_same_ring(a, b);
  std::vector<Term> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return IntPolynomial::from_terms(a.num_vars_, std::move(terms));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  check_same_ring(a, b);
  std::map<Exponents, BigInt> acc;
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      Exponents e(a.num_vars_);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = s.exps[i] + t.exps[i];
      acc[std::move(e)] += s.coeff * t.coeff;
    }
  }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [e, c] : acc) terms.push_back(Term{e, c});
  return IntPolynomial::from_terms(a.num_vars_, std::move(terms));
}

IntPolynomial operator*(const BigInt& c, const IntPolynomial& p) {
  std::vector<Term> terms = p.terms_;
  for (auto& t : terms) t.coeff *= c;
  return IntPolynomial::from_terms(p.num_vars_, std::move(terms));
}

bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

IntPolynomial IntPolynomial::pow(unsigned k) const {
  IntPolynomial result = constant(num_vars_, 1);
  IntPolynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

BigInt IntPolynomial::eval(std::span<const BigInt> point) const {
  if (point.size() != num_vars_) {
    throw InputError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                     std::to_string(num_vars_));
  }
  BigInt total = 0;
  BigInt term;
  BigInt power;
  for (const auto& t : terms_) {
    term = t.coeff;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (t.exps[i] == 0) continue;
      mpz_pow_ui(power.get_mpz_t(), point[i].get_mpz_t(), t.exps[i]);
      term *= power;
    }
    total += term;
  }
  return total;
}

BigInt IntPolynomial::eval(std::span<const std::int64_t> point) const {
  std::vector<BigInt> big(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) big[i] = static_cast<long>(point[i]);
  return eval(std::span<const BigInt>(big));
}

Rational IntPolynomial::eval(std::span<const Rational> point) const {
  if (point.size() != num_vars_) {
    throw InputError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                     std::to_string(num_vars_));
  }
  Rational total = 0;
  for (const auto& t : terms_) {
    Rational term = t.coeff;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (std::uint32_t k = 0; k < t.exps[i]; ++k) term *= point[i];
    }
    total += term;
  }
  total.canonicalize();
  return total;
}

BigInt IntPolynomial::eval_mod(std::span<const BigInt> point, const BigInt& modulus) const {
  if (modulus <= 0) throw InputError("modulus must be positive");
  BigInt v = eval(point);
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

IntPolynomial IntPolynomial::derivative(std::size_t j) const {
  if (j >= num_vars_) {
    throw InputError("derivative index " + std::to_string(j) + " out of range for " +
                     std::to_string(num_vars_) + " variables");
  }
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    if (t.exps[j] == 0) continue;
    Term d{t.exps, t.coeff * t.exps[j]};
    d.exps[j] -= 1;
    terms.push_back(std::move(d));
  }
  return from_terms(num_vars_, std::move(terms));
}

IntPolynomial IntPolynomial::homogeneous_part(int deg) const {
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    if (exps_degree(t.exps) == deg) terms.push_back(t);
  }
  return from_terms(num_vars_, std::move(terms));
}

IntPolynomial IntPolynomial::remap(std::size_t new_num_vars,
                                   std::span<const std::size_t> var_map) const {
  if (var_map.size() != num_vars_) throw InputError("variable map has wrong length");
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponents e(new_num_vars, 0);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (t.exps[i] == 0) continue;
      if (var_map[i] >= new_num_vars) throw InputError("variable map target out of range");
      e[var_map[i]] += t.exps[i];
    }
    terms.push_back(Term{std::move(e), t.coeff});
  }
  return from_terms(new_num_vars, std::move(terms));
}

IntPolynomial IntPolynomial::compose(std::span<const IntPolynomial> subs) const {
  if (subs.size() != num_vars_) throw InputError("substitution list has wrong length");
  const std::size_t target = subs.empty() ? 0 : subs.front().num_vars();
  for (const auto& s : subs) {
    if (s.num_vars() != target) throw InputError("substitutions live in different rings");
  }
  IntPolynomial total(target);
  for (const auto& t : terms_) {
    IntPolynomial term = constant(target, t.coeff);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (t.exps[i] > 0) term = term * subs[i].pow(t.exps[i]);
    }
    total = total + term;
  }
  return total;
}

IntPolynomial IntPolynomial::restrict_zero(const std::vector<bool>& drop) const {
  if (drop.size() != num_vars_) throw InputError("restriction mask has wrong length");
  const auto kept = static_cast<std::size_t>(std::count(drop.begin(), drop.end(), false));
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    bool vanishes = false;
    Exponents e;
    e.reserve(kept);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (drop[i]) {
        if (t.exps[i] > 0) vanishes = true;
      } else {
        e.push_back(t.exps[i]);
      }
    }
    if (!vanishes) terms.push_back(Term{std::move(e), t.coeff});
  }
  return from_terms(kept, std::move(terms));
}

std::string IntPolynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest degree first reads more naturally.
  std::vector<const Term*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
    return exps_degree(a->exps) > exps_degree(b->exps);
  });
  for (const Term* t : order) {
    BigInt c = t->coeff;
    if (first) {
      if (c < 0) {
        out << "-";
        c = -c;
      }
    } else {
      out << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    const bool is_const = exps_degree(t->exps) == 0;
    bool need_star = false;
    if (c != 1 || is_const) {
      out << c.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (t->exps[i] == 0) continue;
      if (need_star) out << "*";
      need_star = true;
      if (i < names.size()) {
        out << names[i];
      } else {
        out << "v" << (i + 1);
      }
      if (t->exps[i] > 1) out << "^" << t->exps[i];
    }
  }
  return out.str();
}

BihomSystem::BihomSystem(std::size_t n1, std::size_t n2, std::vector<IntPolynomial> polys,
                         int top_degree)
    : n1_(n1), n2_(n2), polys_(std::move(polys)) {
  if (polys_.empty()) throw InputError("a system needs at least one polynomial");
  int top = top_degree;
  for (const auto& p : polys_) {
    if (p.num_vars() != n1_ + n2_) {
      throw InputError("polynomial has " + std::to_string(p.num_vars()) +
                       " variables, system split is " + std::to_string(n1_) + "+" +
                       std::to_string(n2_));
    }
    if (top_degree < 0) top = std::max(top, p.degree());
  }
  top_degree_ = std::max(top, 0);
  bool found = false;
  for (const auto& p : polys_) {
    IntPolynomial part = p.homogeneous_part(top_degree_);
    for (const auto& t : part.terms()) {
      int dx = 0;
      int dy = 0;
      for (std::size_t i = 0; i < n1_; ++i) dx += static_cast<int>(t.exps[i]);
      for (std::size_t i = n1_; i < n1_ + n2_; ++i) dy += static_cast<int>(t.exps[i]);
      if (!found) {
        d1_ = dx;
        d2_ = dy;
        found = true;
      } else if (dx != d1_ || dy != d2_) {
        throw InputError("top-degree parts are not bihomogeneous: found bidegrees (" +
                         std::to_string(d1_) + "," + std::to_string(d2_) + ") and (" +
                         std::to_string(dx) + "," + std::to_string(dy) + ")");
      }
    }
    top_parts_.push_back(std::move(part));
  }
}

std::vector<std::string> BihomSystem::variable_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n1_; ++i) names.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n2_; ++i) names.push_back("y" + std::to_string(i + 1));
  return names;
}

IntPolynomial substitute_products(const IntPolynomial& f) {
  const std::size_t n = f.num_vars();
  std::vector<IntPolynomial> subs;
  subs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    subs.push_back(IntPolynomial::variable(2 * n, i) * IntPolynomial::variable(2 * n, n + i));
  }
  if (n == 0) return f;
  return f.compose(subs);
}

BihomSystem bihomogenize(const IntPolynomial& F) {
  if (!F.is_homogeneous()) throw InputError("bihomogenize requires a homogeneous form");
  const std::size_t n = F.num_vars();
  return BihomSystem(n, n, {substitute_products(F)});
}

BihomSystem weyl_difference(const BihomSystem& sys) {
  const std::size_t n1 = sys.n1();
  const std::size_t n2 = sys.n2();
  const std::size_t total = 2 * n1 + 2 * n2;
  // Doubled ring order: x (0..n1), x' (n1..2n1), y (2n1..2n1+n2), y' (..).
  auto embed = [&](bool primed_x, bool primed_y) {
    std::vector<std::size_t> map(n1 + n2);
    for (std::size_t i = 0; i < n1; ++i) map[i] = (primed_x ? n1 : 0) + i;
    for (std::size_t j = 0; j < n2; ++j) map[n1 + j] = 2 * n1 + (primed_y ? n2 : 0) + j;
    return map;
  };
  const auto m00 = embed(false, false);
  const auto m01 = embed(false, true);
  const auto m10 = embed(true, false);
  const auto m11 = embed(true, true);
  std::vector<IntPolynomial> diffs;
  diffs.reserve(sys.R());
  for (const auto& g : sys.polys()) {
    diffs.push_back(g.remap(total, m00) - g.remap(total, m01) - g.remap(total, m10) +
                    g.remap(total, m11));
  }
  return BihomSystem(2 * n1, 2 * n2, std::move(diffs));
}

BihomSystem restrict_zero(const BihomSystem& sys, std::span<const std::size_t> x_zero,
                          std::span<const std::size_t> y_zero) {
  std::vector<bool> drop(sys.num_vars(), false);
  for (std::size_t i : x_zero) {
    if (i >= sys.n1()) throw InputError("x index out of range in restriction");
    drop[i] = true;
  }
  for (std::size_t j : y_zero) {
    if (j >= sys.n2()) throw InputError("y index out of range in restriction");
    drop[sys.n1() + j] = true;
  }
  std::size_t new_n1 = sys.n1();
  std::size_t new_n2 = sys.n2();
  for (std::size_t i = 0; i < sys.n1(); ++i) new_n1 -= drop[i] ? 1 : 0;
  for (std::size_t j = 0; j < sys.n2(); ++j) new_n2 -= drop[sys.n1() + j] ? 1 : 0;
  if (new_n1 + new_n2 == 0) throw InputError("restriction removes every variable");
  std::vector<IntPolynomial> polys;
  for (const auto& g : sys.polys()) polys.push_back(g.restrict_zero(drop));
  return BihomSystem(new_n1, new_n2, std::move(polys), sys.total_degree());
}

}  // namespace cml

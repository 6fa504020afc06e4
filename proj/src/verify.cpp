#include "cml/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cml/arcs.hpp"
#include "cml/counting.hpp"
#include "cml/densities.hpp"
#include "cml/error.hpp"
#include "cml/geometry.hpp"
#include "cml/poly_io.hpp"
#include "cml/primes.hpp"
#include "cml/reports.hpp"

namespace cml {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // Uniform-ish integer in [lo, hi]; modulo bias is irrelevant here.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(gen_() % span);
  }
  std::int64_t nonzero(std::int64_t bound) {
    const std::int64_t v = between(1, bound);
    return (gen_() & 1) ? v : -v;
  }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

Exponents unit_exps(std::size_t n, std::initializer_list<std::size_t> idx) {
  Exponents e(n, 0);
  for (std::size_t i : idx) ++e[i];
  return e;
}

BihomSystem random_bilinear(Rng& rng) {
  const auto n1 = static_cast<std::size_t>(rng.between(1, 2));
  const auto n2 = static_cast<std::size_t>(rng.between(1, 2));
  const std::size_t n = n1 + n2;
  const std::size_t R = (n1 * n2 >= 2 && rng.between(0, 2) == 0) ? 2 : 1;
  std::vector<IntPolynomial> polys;
  for (std::size_t r = 0; r < R; ++r) {
    IntPolynomial g;
    while (g.is_zero()) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
          const std::int64_t c = rng.between(-3, 3);
          if (c != 0) terms.push_back({unit_exps(n, {i, n1 + j}), BigInt(static_cast<long>(c))});
        }
      }
      g = IntPolynomial::from_terms(n, std::move(terms));
    }
    polys.push_back(g);
  }
  return BihomSystem(n1, n2, std::move(polys));
}

BihomSystem random_biquadratic(Rng& rng) {
  const auto n1 = static_cast<std::size_t>(rng.between(1, 2));
  const auto n2 = static_cast<std::size_t>(rng.between(1, 2));
  const std::size_t n = n1 + n2;
  IntPolynomial g;
  while (g.is_zero()) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t i2 = i; i2 < n1; ++i2) {
        for (std::size_t j = 0; j < n2; ++j) {
          for (std::size_t j2 = j; j2 < n2; ++j2) {
            const std::int64_t c = rng.between(-2, 2);
            if (c != 0) {
              terms.push_back({unit_exps(n, {i, i2, n1 + j, n1 + j2}), BigInt(static_cast<long>(c))});
            }
          }
        }
      }
    }
    g = IntPolynomial::from_terms(n, std::move(terms));
  }
  return BihomSystem(n1, n2, {g});
}

class Collector {
 public:
  explicit Collector(std::string battery) : battery_(std::move(battery)) {}
  void add(std::string name, bool passed, nlohmann::json detail, bool advisory = false) {
    checks.push_back({battery_, std::move(name), passed, advisory, std::move(detail)});
  }
  // Runs fn; an Error becomes a failed check carrying its message.
  template <class Fn>
  void guard(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      add(name, false, {{"error", e.code()}, {"detail", e.what()}});
    }
  }
  std::vector<Check> checks;

 private:
  std::string battery_;
};

std::string system_label(const BihomSystem& sys) {
  std::string out;
  const auto names = sys.variable_names();
  for (std::size_t r = 0; r < sys.R(); ++r) {
    if (r) out += "; ";
    out += sys.poly(r).to_string(names);
  }
  return out;
}

constexpr std::uint64_t kIdentityPrimes[] = {2, 3, 5};

// Level 2 when phi(p^2)^n stays small, else level 1.
unsigned identity_level(const BihomSystem& sys, std::uint64_t p) {
  const double units = std::pow(static_cast<double>(p * (p - 1)), static_cast<double>(sys.num_vars()));
  return units <= 2e6 ? 2 : 1;
}

void density_checks(Collector& c, const std::string& label, const BihomSystem& sys) {
  c.guard("identity " + label, [&] {
    nlohmann::json per_prime = nlohmann::json::array();
    bool ok = true;
    for (std::uint64_t p : kIdentityPrimes) {
      const auto rep = singular_series(sys, std::span<const std::uint64_t>(&p, 1), identity_level(sys, p));
      const auto& d = rep.primes.front();
      ok = ok && d.identity_ok;
      per_prime.push_back({{"p", p},
                           {"t", d.t},
                           {"lhs", to_json(d.mu_truncated)},
                           {"rhs", to_json(d.identity_rhs)}});
    }
    c.add("identity " + label, ok, {{"system", system_label(sys)}, {"primes", per_prime}});
  });
  c.guard("multiplicativity " + label, [&] {
    nlohmann::json rows = nlohmann::json::array();
    bool ok = true;
    for (auto [q1, q2] : {std::pair<std::uint64_t, std::uint64_t>{2, 3}, {3, 5}}) {
      const Rational a = A_of_q(sys, q1 * q2);
      const Rational b = A_of_q(sys, q1) * A_of_q(sys, q2);
      ok = ok && a == b;
      rows.push_back({{"q", q1 * q2}, {"A", to_json(a)}, {"product", to_json(b)}});
    }
    c.add("multiplicativity " + label, ok, {{"system", system_label(sys)}, {"values", rows}});
  });
}

void diagonal_battery(Collector& c, std::uint64_t seed) {
  const std::vector<std::uint64_t> primes = {5, 7};
  std::uint64_t k = 0;
  for (int d : {2, 3}) {
    for (std::size_t n = 1; n <= 4; ++n, ++k) {
      const IntPolynomial F = random_diagonal_form(n, d, seed * 1000 + k);
      const std::string label = "d=" + std::to_string(d) + " n=" + std::to_string(n);
      c.guard("halving " + label, [&] {
        const HalvingReport rep = verify_codim_halving(F, primes);
        const bool exact = !rep.advisory;
        const bool expected = rep.lhs == static_cast<double>(n) && rep.F.codim == static_cast<int>(n);
        c.add("halving " + label, rep.ok && exact && expected,
              {{"F", F.to_string(plain_names(n))}, {"report", to_json(rep)}});
      });
      c.guard("closed form counts " + label, [&] {
        const BihomSystem G = bihomogenize(F);
        nlohmann::json rows = nlohmann::json::array();
        bool ok = true;
        for (std::uint64_t p : primes) {
          for (Block b : {Block::x, Block::y}) {
            const BigInt counted = rank_locus_count(G, b, p);
            const auto closed = diagonal_locus_count(G, b, p);
            ok = ok && closed && *closed == counted;
            rows.push_back({{"p", p},
                            {"block", static_cast<int>(b)},
                            {"count", counted.get_str()},
                            {"closed_form", closed ? closed->get_str() : "none"}});
          }
          const BigInt vf = rank_locus_count(BihomSystem(n, 0, {F}), Block::full, p);
          ok = ok && vf == 1;
          rows.push_back({{"p", p}, {"block", "F"}, {"count", vf.get_str()}});
        }
        c.add("closed form counts " + label, ok, {{"counts", rows}});
      });
      if (n <= 2) density_checks(c, "bihomogenized " + label, bihomogenize(F));
    }
  }
}

void bilinear_battery(Collector& c, std::uint64_t seed) {
  const auto systems = random_small_systems(6, seed);
  const PrimeTable table = PrimeTable::sieve(64);
  const std::vector<std::uint64_t> primes = {5, 7};
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const BihomSystem& sys = systems[i];
    const std::string label = "#" + std::to_string(i);
    density_checks(c, label, sys);
    c.guard("weyl chain " + label, [&] {
      bool ok = true;
      nlohmann::json rows = nlohmann::json::array();
      for (int s = 0; s < 4; ++s) {
        std::vector<double> alpha(sys.R());
        for (auto& a : alpha) a = rng.unit();
        const WeylChain w = weyl_chain(sys, alpha, 8, 8, table);
        ok = ok && w.ok;
        rows.push_back({{"alpha", alpha}, {"chain", to_json(w)}});
      }
      c.add("weyl chain " + label, ok, {{"system", system_label(sys)}, {"samples", rows}});
    });
    // Drop the first x variable whose removal leaves every form nonzero.
    for (std::size_t i = 0; i < sys.n1(); ++i) {
      const std::vector<std::size_t> x0 = {i};
      const BihomSystem restricted = restrict_zero(sys, x0, {});
      const auto& fs = restricted.polys();
      if (std::any_of(fs.begin(), fs.end(), [](const IntPolynomial& f) { return f.is_zero(); })) {
        continue;
      }
      c.guard("restriction " + label, [&] {
        const RestrictionReport rep = restriction_inequality_check(sys, x0, {}, primes);
        c.add("restriction " + label, rep.ok,
              {{"system", system_label(sys)}, {"x_zero", x0}, {"report", to_json(rep)}},
              rep.advisory);
      });
      break;
    }
  }
}

void identity_battery(Collector& c) {
  const BihomSystem g(2, 2, {parse_poly("x1*y1 - x2*y2", block_names(2, 2))});
  c.guard("worked values x1y1-x2y2", [&] {
    const Rational a2 = A_of_q(g, 2);
    const Rational a3 = A_of_q(g, 3);
    c.add("worked values x1y1-x2y2", a2 == 1 && a3 == Rational(1, 2),
          {{"A(2)", to_json(a2)}, {"A(3)", to_json(a3)}});
  });
  c.guard("ramanujan form", [&] {
    bool ok = true;
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint64_t q : {2, 3, 4, 5, 6, 9, 10}) {
      const Rational a = A_of_q(g, q);
      const Rational b = A_via_ramanujan(g, q);
      ok = ok && a == b;
      rows.push_back({{"q", q}, {"A", to_json(a)}});
    }
    c.add("ramanujan form", ok, {{"values", rows}});
  });
  density_checks(c, "x1y1-x2y2", g);
  c.guard("thresholds", [&] {
    const BigInt t13 = threshold_two_semiprimes(2);
    const Rational t29 = threshold_bihomogeneous(2, 2, 1, 1);
    const Rational t52 = threshold_semiprime_delta(2, Rational(1, 2));
    const bool ok = t13 == 384 && t29 == 192 && t52 == Rational(t13);
    c.add("thresholds", ok,
          {{"two_semiprimes_d2", t13.get_str()},
           {"bihomogeneous_2_2_1_1", to_json(t29)},
           {"semiprime_delta_half_d2", to_json(t52)}});
  });
  c.guard("schedule", [&] {
    ScheduleParams p;
    p.min_codim = 769;
    const ArcContext ctx = schedule(p);
    bool monotone = true;
    for (std::size_t m = 1; m < ctx.thetas.size(); ++m) monotone = monotone && ctx.thetas[m] < ctx.thetas[m - 1];
    c.add("schedule", ctx.K == 48.03125 && monotone, {{"context", to_json(ctx)}});
  });
  c.guard("inequality x1-x2", [&] {
    const PrimeTable table = PrimeTable::sieve(100);
    const InequalityReport rep =
        check_inequality_semiprime(parse_poly("x1 - x2", plain_names(2)), 100, Rational(1, 2), table);
    c.add("inequality x1-x2", rep.ok && rep.unweighted_ok, to_json(rep));
  });
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<BihomSystem> random_small_systems(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BihomSystem> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i % 2 == 0 ? random_bilinear(rng) : random_biquadratic(rng));
  }
  return out;
}

IntPolynomial random_diagonal_form(std::size_t n, int d, std::uint64_t seed) {
  if (n == 0 || d < 1) throw InputError("diagonal form needs n >= 1 and d >= 1");
  Rng rng(seed);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < n; ++i) {
    Exponents e(n, 0);
    e[i] = static_cast<std::uint32_t>(d);
    terms.push_back({e, BigInt(static_cast<long>(rng.nonzero(3)))});
  }
  return IntPolynomial::from_terms(n, std::move(terms));
}

VerifyReport run_verify(const std::string& battery, std::uint64_t seed) {
  const bool all = battery == "all";
  if (!all && battery != "diagonal" && battery != "bilinear" && battery != "identities") {
    throw InputError("unknown battery '" + battery + "' (diagonal|bilinear|identities|all)");
  }
  VerifyReport rep{battery, seed, {}};
  auto take = [&](Collector& c) {
    rep.checks.insert(rep.checks.end(), c.checks.begin(), c.checks.end());
  };
  if (all || battery == "diagonal") {
    Collector c("diagonal");
    diagonal_battery(c, seed);
    take(c);
  }
  if (all || battery == "bilinear") {
    Collector c("bilinear");
    bilinear_battery(c, seed);
    take(c);
  }
  if (all || battery == "identities") {
    Collector c("identities");
    identity_battery(c);
    take(c);
  }
  return rep;
}

nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  std::size_t passed = 0;
  std::size_t advisory = 0;
  for (const auto& c : r.checks) {
    passed += c.passed;
    advisory += c.advisory;
    checks.push_back({{"battery", c.battery},
                      {"name", c.name},
                      {"passed", c.passed},
                      {"advisory", c.advisory},
                      {"detail", c.detail}});
  }
  return {{"battery", r.battery},
          {"seed", r.seed},
          {"checks", checks},
          {"summary",
           {{"total", r.checks.size()},
            {"passed", passed},
            {"failed", r.checks.size() - passed},
            {"advisory", advisory}}},
          {"all_passed", r.all_passed()}};
}

}  // namespace cml

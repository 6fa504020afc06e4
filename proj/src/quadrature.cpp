#include "cml/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <gsl/gsl_sf_expint.h>

#include "cml/error.hpp"
#include "cml/numeric.hpp"
#include "cml/parallel.hpp"
#include "cml/poly_eval.hpp"

namespace cml {
namespace {

constexpr double kPi = std::numbers::pi;

struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

Nodes rule_nodes(const std::string& rule, std::size_t m) {
  Nodes out;
  if (rule == "midpoint") {
    for (std::size_t i = 0; i < m; ++i) {
      out.x.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(m));
      out.w.push_back(1.0 / static_cast<double>(m));
    }
    return out;
  }
  // 4-point Gauss-Legendre on each of m/4 panels.
  const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
  const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
  const double gx[4] = {-b, -a, a, b};
  const double gw[4] = {wb, wa, wa, wb};
  const std::size_t panels = m / 4;
  for (std::size_t k = 0; k < panels; ++k) {
    for (int i = 0; i < 4; ++i) {
      out.x.push_back((static_cast<double>(k) + (gx[i] + 1.0) / 2.0) / static_cast<double>(panels));
      out.w.push_back(gw[i] / 2.0 / static_cast<double>(panels));
    }
  }
  return out;
}

void validate(const QuadratureSpec& spec) {
  if (spec.kind == "grid") {
    if (spec.rule != "midpoint" && spec.rule != "gauss") {
      throw InputError("quadrature rule must be 'midpoint' or 'gauss'");
    }
    const std::size_t step = spec.rule == "gauss" ? 8 : 2;
    if (spec.points_per_axis < step || spec.points_per_axis % step != 0) {
      throw InputError("points_per_axis must be a positive multiple of " + std::to_string(step));
    }
  } else if (spec.kind == "qmc") {
    if (spec.samples < 2) throw InputError("qmc needs at least 2 samples");
  } else {
    throw InputError("quadrature kind must be 'grid' or 'qmc'");
  }
}

// Integrates f over [0,1]^dims; f receives a point and returns a value of
// type V (double or complex). Returns the estimate at full and half
// resolution.
template <class V, class F>
std::pair<V, V> integrate(std::size_t dims, const QuadratureSpec& spec, const Budget& budget,
                          F&& f, std::uint64_t& evaluations) {
  validate(spec);
  using Sum = std::conditional_t<std::is_same_v<V, double>, CompensatedSum, ComplexSum>;
  auto grid = [&](std::size_t m) {
    const Nodes nodes = rule_nodes(spec.rule, m);
    auto parts = map_tuples<Sum>(std::vector<std::uint64_t>(dims, m),
                                 [&](Sum& acc, const std::vector<std::uint64_t>& digits) {
                                   thread_local std::vector<double> pt;
                                   pt.resize(dims);
                                   double w = 1.0;
                                   for (std::size_t i = 0; i < dims; ++i) {
                                     pt[i] = nodes.x[digits[i]];
                                     w *= nodes.w[digits[i]];
                                   }
                                   acc.add(w * f(pt));
                                 });
    Sum total;
    for (const auto& p : parts) total.add(p);
    return total.value();
  };
  if (spec.kind == "grid") {
    const double full = std::pow(static_cast<double>(spec.points_per_axis), dims);
    const double half = std::pow(static_cast<double>(spec.points_per_axis / 2), dims);
    budget.require(full + half, "quadrature grid");
    evaluations = static_cast<std::uint64_t>(full + half);
    return {grid(spec.points_per_axis), grid(spec.points_per_axis / 2)};
  }
  if (dims > 24) throw InputError("qmc supports at most 24 dimensions");
  budget.require(static_cast<double>(spec.samples), "quadrature samples");
  evaluations = spec.samples;
  const std::vector<double> shift = random_shift(dims, spec.seed);
  const std::uint64_t n = spec.samples;
  const std::uint64_t half = n / 2;
  struct Acc {
    Sum first;
    Sum second;
  };
  auto parts = map_partitions<Acc>(kPartitions, [&](std::size_t part) {
    Acc acc;
    std::vector<double> pt(dims);
    const auto [lo, hi] = partition_range(n, kPartitions, part);
    for (std::uint64_t i = lo; i < hi; ++i) {
      for (std::size_t d = 0; d < dims; ++d) {
        pt[d] = frac(halton(i + 1, d) + shift[d]);
      }
      (i < half ? acc.first : acc.second).add(f(pt));
    }
    return acc;
  });
  Sum first;
  Sum all;
  for (const auto& p : parts) {
    first.add(p.first);
    all.add(p.first);
    all.add(p.second);
  }
  return {all.value() / static_cast<double>(n), first.value() / static_cast<double>(half)};
}

// A variable in which every form is at most linear, and used by one of them.
std::optional<std::size_t> linear_variable(const std::vector<IntPolynomial>& G) {
  const std::size_t n = G.front().num_vars();
  for (std::size_t j = 0; j < n; ++j) {
    bool ok = true;
    bool used = false;
    for (const auto& g : G) {
      ok = ok && g.degree_in(j) <= 1;
      used = used || g.degree_in(j) == 1;
    }
    if (ok && used) return j;
  }
  return std::nullopt;
}

// Forms split as G_r = A_r(v') v_j + B_r(v').
struct LinearSplit {
  std::size_t var;
  std::vector<RealEvaluator> slope;
  std::vector<RealEvaluator> offset;
};

LinearSplit split_linear(const std::vector<IntPolynomial>& G, std::size_t j) {
  LinearSplit s{j, {}, {}};
  std::vector<bool> drop(G.front().num_vars(), false);
  drop[j] = true;
  for (const auto& g : G) {
    s.slope.emplace_back(g.derivative(j));
    // Setting v_j = 0 but keeping the ring lets the evaluators share points.
    std::vector<Term> kept;
    for (const auto& t : g.terms()) {
      if (t.exps[j] == 0) kept.push_back(t);
    }
    s.offset.emplace_back(IntPolynomial::from_terms(g.num_vars(), std::move(kept)));
  }
  return s;
}

// Full point from a reduced point with v_j inserted (value irrelevant).
void expand(std::span<const double> reduced, std::size_t j, std::vector<double>& full) {
  full.resize(reduced.size() + 1);
  for (std::size_t i = 0, k = 0; i < full.size(); ++i) full[i] = i == j ? 0.0 : reduced[k++];
}

// sin(2 pi L g) / (pi g), with its limit 2L near g = 0.
double sinc_kernel(double L, double g) {
  const double x = 2.0 * kPi * L * g;
  if (std::abs(x) < 1e-6) return 2.0 * L * (1.0 - x * x / 6.0);
  return std::sin(x) / (kPi * g);
}

void check_forms(const std::vector<IntPolynomial>& G) {
  if (G.empty()) throw InputError("need at least one form");
  for (const auto& g : G) {
    if (g.num_vars() != G.front().num_vars()) throw InputError("forms live in different rings");
  }
  if (G.front().num_vars() == 0) throw InputError("forms need at least one variable");
}

}  // namespace

QuadratureSpec quadrature_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("quadrature spec must be a JSON object");
  QuadratureSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      s.kind = value.get<std::string>();
    } else if (key == "rule") {
      s.rule = value.get<std::string>();
    } else if (key == "points_per_axis") {
      s.points_per_axis = value.get<std::size_t>();
    } else if (key == "samples") {
      s.samples = value.get<std::size_t>();
    } else if (key == "seed") {
      s.seed = value.get<std::uint64_t>();
    } else {
      throw InputError("unknown key '" + key + "' in quadrature spec");
    }
  }
  validate(s);
  return s;
}

nlohmann::json quadrature_to_json(const QuadratureSpec& s) {
  if (s.kind == "grid") {
    return {{"kind", s.kind}, {"rule", s.rule}, {"points_per_axis", s.points_per_axis}};
  }
  return {{"kind", s.kind}, {"samples", s.samples}, {"seed", s.seed}};
}

ComplexEstimate singular_integral_I(const std::vector<IntPolynomial>& G,
                                    std::span<const double> tau, const QuadratureSpec& spec,
                                    const Budget& budget) {
  check_forms(G);
  if (tau.size() != G.size()) throw InputError("tau must have one entry per form");
  validate(spec);
  if (std::all_of(tau.begin(), tau.end(), [](double t) { return t == 0.0; })) {
    return {{1.0, 0.0}, 0.0, 0};
  }
  const std::size_t n = G.front().num_vars();
  ComplexEstimate out;
  std::pair<std::complex<double>, std::complex<double>> est;
  if (auto j = linear_variable(G)) {
    const LinearSplit s = split_linear(G, *j);
    est = integrate<std::complex<double>>(
        n - 1, spec, budget,
        [&](std::span<const double> pt) {
          thread_local std::vector<double> full;
          expand(pt, s.var, full);
          double a = 0.0;
          double b = 0.0;
          for (std::size_t r = 0; r < G.size(); ++r) {
            a += tau[r] * s.slope[r].value(full);
            b += tau[r] * s.offset[r].value(full);
          }
          // integral_0^1 e(a t + b) dt
          if (std::abs(a) < 1e-12) return unit_phase(b);
          const std::complex<double> num = unit_phase(a) - 1.0;
          return unit_phase(b) * num / std::complex<double>(0.0, 2.0 * kPi * a);
        },
        out.evaluations);
  } else {
    std::vector<RealEvaluator> ev;
    for (const auto& g : G) ev.emplace_back(g);
    est = integrate<std::complex<double>>(
        n, spec, budget,
        [&](std::span<const double> pt) {
          double phase = 0.0;
          for (std::size_t r = 0; r < G.size(); ++r) phase += tau[r] * ev[r].value(pt);
          return unit_phase(phase);
        },
        out.evaluations);
  }
  out.value = est.first;
  const double diff = std::abs(est.first - est.second);
  out.error = spec.kind == "grid" && spec.rule == "midpoint" ? diff / 3.0 : diff;
  return out;
}

JEstimate J_of_L(const std::vector<IntPolynomial>& G, double L, const QuadratureSpec& spec,
                 const Budget& budget) {
  check_forms(G);
  validate(spec);
  if (G.size() > 2) throw InputError("J(L) supports R = 1 or 2");
  if (!(L >= 0.0)) throw InputError("L must be non-negative");
  JEstimate out;
  out.L = L;
  if (L == 0.0) return out;
  const std::size_t n = G.front().num_vars();
  std::pair<double, double> est;
  const auto j = G.size() == 1 ? linear_variable(G) : std::nullopt;
  if (j) {
    const LinearSplit s = split_linear(G, *j);
    const double w = 2.0 * kPi * L;
    est = integrate<double>(
        n - 1, spec, budget,
        [&](std::span<const double> pt) {
          thread_local std::vector<double> full;
          expand(pt, s.var, full);
          const double a = s.slope[0].value(full);
          const double b = s.offset[0].value(full);
          // integral_0^1 sin(2 pi L (a t + b)) / (pi (a t + b)) dt
          if (std::abs(w * a) < 1e-4) return sinc_kernel(L, b + a / 2.0);
          return (gsl_sf_Si(w * (a + b)) - gsl_sf_Si(w * b)) / (kPi * a);
        },
        out.evaluations);
  } else {
    std::vector<RealEvaluator> ev;
    for (const auto& g : G) ev.emplace_back(g);
    est = integrate<double>(
        n, spec, budget,
        [&](std::span<const double> pt) {
          double v = 1.0;
          for (const auto& e : ev) v *= sinc_kernel(L, e.value(pt));
          return v;
        },
        out.evaluations);
  }
  out.value = est.first;
  const double diff = std::abs(est.first - est.second);
  out.error = spec.kind == "grid" && spec.rule == "midpoint" ? diff / 3.0 : diff;
  return out;
}

MuInfinity J_and_mu_infinity(const std::vector<IntPolynomial>& G, std::span<const double> Ls,
                             const QuadratureSpec& spec, const Budget& budget) {
  MuInfinity out;
  for (double L : Ls) out.J.push_back(J_of_L(G, L, spec, budget));
  std::vector<const JEstimate*> sorted;
  for (const auto& e : out.J) {
    if (e.L > 0) sorted.push_back(&e);
  }
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->L < b->L; });
  if (sorted.empty()) {
    out.mu_infinity = 0.0;
  } else if (sorted.size() == 1 || sorted[sorted.size() - 2]->L == sorted.back()->L) {
    out.mu_infinity = sorted.back()->value;
  } else {
    const JEstimate& lo = *sorted[sorted.size() - 2];
    const JEstimate& hi = *sorted.back();
    out.mu_infinity = (hi.L * hi.value - lo.L * lo.value) / (hi.L - lo.L);
  }
  return out;
}

}  // namespace cml

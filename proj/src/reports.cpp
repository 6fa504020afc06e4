#include "cml/reports.hpp"

#include "cml/poly_io.hpp"

namespace cml {
namespace {

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Rational& q) { return rational_to_json(q); }

json to_json(const BigInt& v) { return v.get_str(); }

json to_json(const ResidueCountVector& r) {
  return {{"q", r.q}, {"counts", r.counts}, {"total", to_json(r.total())},
          {"exponential_sum", to_json(r.exponential_sum())}};
}

json to_json(const DensityReport& r) {
  json primes = json::array();
  for (const auto& p : r.primes) {
    json A = json::array();
    for (const auto& a : p.A) A.push_back(to_json(a));
    json decay = json::array();
    for (const auto& a : p.A) decay.push_back(std::abs(a.get_d()));
    const Rational dev = p.mu_truncated - 1;
    primes.push_back({{"p", p.p},
                      {"t", p.t},
                      {"nu_t", to_json(p.nu)},
                      {"A", A},
                      {"abs_A", decay},
                      {"mu_truncated", to_json(p.mu_truncated)},
                      {"abs_mu_minus_one", std::abs(dev.get_d())},
                      {"identity_rhs", to_json(p.identity_rhs)},
                      {"identity_ok", p.identity_ok}});
  }
  json comps = json::array();
  for (const auto& c : r.composites) {
    comps.push_back({{"q", c.q},
                     {"factors", {c.q1, c.q2}},
                     {"A", to_json(c.value)},
                     {"product", to_json(c.product)},
                     {"multiplicative_ok", c.multiplicative_ok}});
  }
  return {{"primes", primes},
          {"singular_series_truncated", to_json(r.singular_series)},
          {"singular_series_truncated_approx", r.singular_series.get_d()},
          {"composites", comps},
          {"A_decay_exponent", optional_json(r.a_decay_exponent)}};
}

json to_json(const LocalResult& r) {
  json out = {{"status", r.status}, {"detail", r.detail}, {"witness", nullptr}};
  if (r.witness) {
    const LocalWitness& w = *r.witness;
    json wj = {{"kind", w.kind}, {"minor_columns", w.minor_columns}};
    if (w.kind == "p-adic") {
      json pt = json::array();
      for (const auto& c : w.padic_point) pt.push_back(c.get_str());
      wj["point"] = pt;
      wj["p"] = w.p;
      wj["level"] = w.level;
      wj["modulus"] = w.modulus.get_str();
      wj["valuation"] = w.valuation;
      wj["minor_value"] = w.minor_value.get_str();
    } else {
      wj["point"] = w.real_point;
      wj["minor_value"] = w.real_minor;
      wj["residual"] = w.residual;
    }
    out["witness"] = wj;
  }
  return out;
}

json to_json(const ComplexEstimate& e) {
  return {{"value", to_json(e.value)}, {"error", e.error}, {"evaluations", e.evaluations}};
}

json to_json(const JEstimate& e) {
  return {{"L", e.L}, {"value", e.value}, {"error", e.error}, {"evaluations", e.evaluations}};
}

json to_json(const MuInfinity& m) {
  json J = json::array();
  for (const auto& e : m.J) J.push_back(to_json(e));
  return {{"J", J}, {"mu_infinity_extrapolated", m.mu_infinity}};
}

json to_json(const ArcContext& c) {
  const auto& p = c.params;
  return {{"min_codim", p.min_codim},
          {"d1", p.d1},
          {"d2", p.d2},
          {"R", p.R},
          {"b", p.b},
          {"delta0", p.delta0},
          {"eps0", p.eps0},
          {"C", p.C},
          {"log_P", p.log_P},
          {"log_P1", c.log_P1},
          {"log_P2", c.log_P2},
          {"max_term", c.max_term},
          {"K", c.K},
          {"sigma", c.sigma},
          {"zeta", c.zeta},
          {"theta0", c.theta0},
          {"thetas", c.thetas},
          {"M", c.M},
          {"C0", c.C0}};
}

json to_json(const ArcLocation& l) {
  return {{"major", l.major}, {"q", l.major ? json(l.q) : json(nullptr)},
          {"a", l.a},         {"distance", l.distance},
          {"q_bound", l.q_bound}, {"width", l.width}};
}

json to_json(const MeasureBound& m) {
  return {{"bound", m.bound}, {"log_bound", m.log_bound}, {"overcount", optional_json(m.overcount)}};
}

json to_json(const WeylChain& w) {
  return {{"S", to_json(w.S)}, {"T", w.T},     {"W1", w.W1}, {"W2", w.W2},
          {"lhs", w.lhs},      {"rhs", w.rhs}, {"ok", w.ok}};
}

json to_json(const ScanReport& s) {
  json samples = json::array();
  for (const auto& x : s.samples) {
    samples.push_back({{"alpha", x.alpha},
                       {"major", x.major},
                       {"q", x.major ? json(x.q) : json(nullptr)},
                       {"abs_S", x.abs_S},
                       {"ratio", optional_json(x.ratio)}});
  }
  return {{"theta", s.theta},
          {"K", s.K},
          {"scale", s.scale},
          {"major_count", s.major_count},
          {"minor_count", s.minor_count},
          {"max_ratio", optional_json(s.max_ratio)},
          {"samples", samples}};
}

json to_json(const CompleteSumReport& r) {
  return {{"q", r.q},
          {"a", r.a},
          {"sum", to_json(r.sum)},
          {"abs_sum", r.abs_sum},
          {"K_tilde", r.K_tilde},
          {"exponent", r.exponent},
          {"reference", r.reference},
          {"ratio", r.ratio},
          {"log_ratio", optional_json(r.log_ratio)}};
}

json to_json(const DimEstimate& d) {
  json counts = json::array();
  for (const auto& [p, c] : d.counts) counts.push_back({{"p", p}, {"count", c.get_str()}});
  return {{"ambient", d.ambient},
          {"counts", counts},
          {"skipped_primes", d.skipped_primes},
          {"dim", d.dim < 0 ? json("-inf") : json(d.dim)},
          {"codim", d.codim},
          {"slope", d.slope},
          {"residual", d.residual},
          {"exact", d.exact},
          {"certificate", d.certificate}};
}

json to_json(const HalvingReport& r) {
  return {{"V_F", to_json(r.F)},   {"V_G1", to_json(r.G1)}, {"V_G2", to_json(r.G2)},
          {"lhs", r.lhs},          {"rhs", r.rhs},          {"ok", r.ok},
          {"advisory", r.advisory}};
}

json to_json(const RestrictionReport& r) {
  return {{"s", r.s},
          {"t", r.t},
          {"G_x", to_json(r.G1)},
          {"G_y", to_json(r.G2)},
          {"restricted_x", to_json(r.F1)},
          {"restricted_y", to_json(r.F2)},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"ok", r.ok},
          {"advisory", r.advisory}};
}

json to_json(const SqrtThreshold& t) {
  return {{"integer_part", t.integer_part.get_str()},
          {"sqrt_of", t.radicand},
          {"exact", t.exact ? json(t.exact->get_str()) : json(nullptr)},
          {"value", t.value}};
}

json to_json(const CountReport& r) {
  return {{"weighted", r.weighted},
          {"unweighted", r.unweighted},
          {"distinct_solution_vectors", r.distinct},
          {"tuples", r.tuples},
          {"sample_size", r.sample.size()},
          {"sample_truncated", r.sample_truncated}};
}

json to_json(const InequalityReport& r) {
  return {{"N", r.N},
          {"delta", to_json(r.delta)},
          {"N1", r.N1},
          {"N2", r.N2},
          {"semiprime", to_json(r.semiprime)},
          {"prime", to_json(r.prime)},
          {"rhs", r.rhs},
          {"ok", r.ok},
          {"unweighted_ok", r.unweighted_ok}};
}

}  // namespace cml

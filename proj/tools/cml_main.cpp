#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cml/arcs.hpp"
#include "cml/counting.hpp"
#include "cml/densities.hpp"
#include "cml/error.hpp"
#include "cml/geometry.hpp"
#include "cml/parallel.hpp"
#include "cml/poly_io.hpp"
#include "cml/primes.hpp"
#include "cml/quadrature.hpp"
#include "cml/reports.hpp"
#include "cml/verify.hpp"

namespace {

using cml::json;

struct Common {
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string sieve_cache;
  std::uint64_t budget = 0;
};

struct SystemInput {
  std::string system_path;
  std::vector<std::string> exprs;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  void attach(CLI::App* app) {
    app->add_option("--system", system_path, "System JSON {n1, n2, R, polys}");
    app->add_option("--expr", exprs, "Form over x1..xn1, y1..yn2 (repeatable)");
    app->add_option("--n1", n1, "x-block size for --expr");
    app->add_option("--n2", n2, "y-block size for --expr");
  }

  cml::BihomSystem load() const {
    if (!system_path.empty() && !exprs.empty()) throw cml::InputError("give --system or --expr, not both");
    if (!system_path.empty()) return cml::system_from_json(cml::load_json_file(system_path));
    if (exprs.empty()) throw cml::InputError("a system is required (--system or --expr)");
    const auto names = cml::block_names(n1, n2);
    std::vector<cml::IntPolynomial> polys;
    for (const auto& e : exprs) polys.push_back(cml::parse_poly(e, names));
    return cml::BihomSystem(n1, n2, std::move(polys));
  }
};

struct PolyInput {
  std::string poly_path;
  std::string expr;
  std::size_t n = 0;

  void attach(CLI::App* app) {
    app->add_option("--poly", poly_path, "Polynomial JSON {n, terms}");
    app->add_option("--expr", expr, "Polynomial over x1..xn");
    app->add_option("--n", n, "Number of variables for --expr");
  }

  cml::IntPolynomial load() const {
    if (!poly_path.empty() && !expr.empty()) throw cml::InputError("give --poly or --expr, not both");
    if (!poly_path.empty()) return cml::poly_from_json(cml::load_json_file(poly_path));
    if (expr.empty()) throw cml::InputError("a polynomial is required (--poly or --expr)");
    return cml::parse_poly(expr, cml::plain_names(n));
  }
};

// Exact rational from "3", "-2/7" or "0.125".
cml::Rational parse_rational(const std::string& s) {
  cml::Rational q;
  try {
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
      q.set_str(s, 10);
    } else {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const std::size_t frac_len = s.size() - dot - 1;
      if (digits.empty() || digits == "-" || s.find_first_of("/eE") != std::string::npos) {
        throw std::invalid_argument(s);
      }
      q = cml::Rational(cml::BigInt(digits, 10), cml::BigInt("1" + std::string(frac_len, '0'), 10));
    }
  } catch (const std::invalid_argument&) {
    throw cml::InputError("not a rational number: '" + s + "'");
  }
  if (q.get_den() == 0) throw cml::InputError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += "\n";
    }
    return out;
  }
};

class Runner {
 public:
  explicit Runner(const Common& c) : common_(c) {}

  // With --format csv the command's sample table replaces the JSON report.
  void emit(const json& report, const std::optional<Table>& table) const {
    if (common_.format != "csv") {
      emit(report);
      return;
    }
    if (!table) throw cml::InputError("csv output is available for count, count-semiprime and arcs scan");
    put(table->text());
  }

  cml::Budget budget(cml::Budget fallback) const {
    return common_.budget ? cml::Budget{common_.budget} : fallback;
  }

  cml::PrimeTable primes(std::uint64_t limit) const {
    limit = std::max<std::uint64_t>(limit, 2);
    if (common_.sieve_cache.empty()) return cml::PrimeTable::sieve(limit);
    return cml::PrimeTable::load_or_build(common_.sieve_cache, limit);
  }

  void emit(const json& report) const {
    if (common_.format == "csv") throw cml::InputError("this command has no csv form");
    put(report.dump(2) + "\n");
  }

  void put(const std::string& text) const {
    if (common_.out.empty()) {
      std::cout << text;
      return;
    }
    write_file(common_.out, text);
  }

  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw cml::InputError("cannot write " + path);
    f << text;
  }

 private:
  const Common& common_;
};


std::string num(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

Table sample_table(const cml::CountReport& rep, std::vector<std::string> names) {
  Table t{std::move(names), {}};
  for (const auto& s : rep.sample) {
    std::vector<std::string> r;
    for (auto v : s) r.push_back(std::to_string(v));
    t.rows.push_back(r);
  }
  return t;
}

json error_json(const char* code, const std::string& detail) {
  return {{"error", code}, {"detail", detail}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle-method laboratory: counts, densities, arcs and geometry checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "Worker thread cap (0 = hardware)");
  app.add_option("--seed", common.seed, "Seed for sampled quantities");
  app.add_option("--out", common.out, "Write the report here (plus a .meta.json sidecar)");
  app.add_option("--format", common.format, "json report, or csv sample table (count, count-semiprime, arcs scan)")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--sieve-cache", common.sieve_cache, "Prime sieve cache file");
  app.add_option("--budget", common.budget, "Point budget for every enumeration (overrides CML_BUDGET)");

  Runner run(common);
  std::function<void()> action;

  // count
  auto* count = app.add_subcommand("count", "Weighted prime solutions of a bihomogeneous system");
  SystemInput count_in;
  count_in.attach(count);
  std::uint64_t P1 = 0, P2 = 0;
  std::size_t sample_cap = cml::kDefaultSampleCap;
  std::string samples_csv;
  std::optional<double> series_in, mu_in;
  count->add_option("--P1", P1, "Bound for x primes")->required();
  count->add_option("--P2", P2, "Bound for y primes")->required();
  count->add_option("--sample-cap", sample_cap, "Solutions kept in the sample");
  count->add_option("--samples-csv", samples_csv, "CSV of sampled solutions");
  count->add_option("--singular-series", series_in, "Truncated singular series for the main term");
  count->add_option("--mu-infinity", mu_in, "Singular integral for the main term");
  count->callback([&] {
    action = [&] {
      const auto sys = count_in.load();
      const auto primes = run.primes(std::max(P1, P2));
      const auto rep = cml::count_prime_solutions(sys, P1, P2, primes, sample_cap, run.budget(cml::Budget::count()));
      json out = {{"command", "count"}, {"system", cml::system_to_json(sys)}, {"P1", P1}, {"P2", P2},
                  {"report", cml::to_json(rep)}};
      if (series_in && mu_in) {
        const double main = cml::predict_main_term(sys.n1(), sys.n2(), sys.d1(), sys.d2(), sys.R(),
                                                   double(P1), double(P2), *series_in, *mu_in);
        out["prediction"] = {{"singular_series", *series_in},
                             {"mu_infinity", *mu_in},
                             {"sigma_g", *series_in * *mu_in},
                             {"main_term", main},
                             {"ratio", main != 0.0 ? json(rep.weighted / main) : json(nullptr)}};
      }
      const Table table = sample_table(rep, sys.variable_names());
      if (!samples_csv.empty()) Runner::write_file(samples_csv, table.text());
      run.emit(out, table);
    };
  });

  // count-semiprime
  auto* csemi = app.add_subcommand("count-semiprime", "Weighted semiprime solutions of one polynomial");
  PolyInput semi_in;
  semi_in.attach(csemi);
  std::uint64_t N = 0;
  std::optional<std::uint64_t> N1, N2;
  std::string delta_text;
  bool inequality = false;
  std::string semi_csv;
  std::size_t semi_cap = cml::kDefaultSampleCap;
  csemi->add_option("--N", N, "Box bound for z")->required();
  csemi->add_option("--N1", N1, "Bound for the larger prime factor");
  csemi->add_option("--N2", N2, "Bound for the smaller prime factor");
  csemi->add_option("--delta", delta_text, "N1 = floor(N^{1-delta}), N2 = floor(N^delta); exact rational");
  csemi->add_flag("--check-inequality", inequality, "Also compare against 2^{-n} times the prime count");
  csemi->add_option("--sample-cap", semi_cap, "Solutions kept in the sample");
  csemi->add_option("--samples-csv", semi_csv, "CSV of sampled solutions");
  csemi->callback([&] {
    action = [&] {
      const auto f = semi_in.load();
      std::optional<cml::Rational> delta;
      if (!delta_text.empty()) delta = parse_rational(delta_text);
      if (delta && (N1 || N2)) throw cml::InputError("give --delta or --N1/--N2, not both");
      if (!delta && !(N1 && N2)) throw cml::InputError("give --delta or both --N1 and --N2");
      if (inequality && !delta) throw cml::InputError("--check-inequality needs --delta");
      std::uint64_t n1 = 0, n2 = 0;
      if (delta) {
        if (!(*delta > 0 && *delta <= cml::Rational(1, 2))) throw cml::InputError("delta must lie in (0, 1/2]");
        n1 = cml::rational_power_floor(N, 1 - *delta);
        n2 = cml::rational_power_floor(N, *delta);
      } else {
        n1 = *N1;
        n2 = *N2;
      }
      const auto primes = run.primes(std::max<std::uint64_t>(N, 2));
      const auto b = run.budget(cml::Budget::count());
      const auto rep = cml::count_semiprime_solutions(f, N, n1, n2, primes, semi_cap, b);
      json out = {{"command", "count-semiprime"}, {"poly", cml::poly_to_json(f)}, {"N", N},
                  {"N1", n1}, {"N2", n2}, {"report", cml::to_json(rep)}};
      if (delta) out["delta"] = cml::to_json(*delta);
      if (inequality) out["inequality"] = cml::to_json(cml::check_inequality_semiprime(f, N, *delta, primes, b));
      std::vector<std::string> names;
      for (const char* prefix : {"z", "p", "q"}) {
        for (std::size_t j = 1; j <= f.num_vars(); ++j) names.push_back(prefix + std::to_string(j));
      }
      const Table table = sample_table(rep, names);
      if (!semi_csv.empty()) Runner::write_file(semi_csv, table.text());
      run.emit(out, table);
    };
  });

  // density / singular-series
  std::vector<std::uint64_t> dens_primes = {2, 3, 5};
  unsigned level = 1;
  std::vector<std::uint64_t> q_list;
  auto* density = app.add_subcommand("density", "A(q), nu_t(p) and the local identity per prime");
  SystemInput dens_in;
  dens_in.attach(density);
  density->add_option("--primes", dens_primes, "Primes")->delimiter(',');
  density->add_option("--level", level, "Prime power level t");
  density->add_option("--q", q_list, "Extra moduli for A(q)")->delimiter(',');
  density->callback([&] {
    action = [&] {
      const auto sys = dens_in.load();
      const auto b = run.budget(cml::Budget::density());
      json out = {{"command", "density"}, {"system", cml::system_to_json(sys)}, {"level", level},
                  {"report", cml::to_json(cml::singular_series(sys, dens_primes, level, b))}};
      json extra = json::array();
      for (auto q : q_list) extra.push_back({{"q", q}, {"A", cml::to_json(cml::A_of_q(sys, q, b))}});
      out["A_of_q"] = extra;
      run.emit(out);
    };
  });

  auto* series = app.add_subcommand("singular-series", "Truncated singular series and singular integral");
  SystemInput series_sys;
  series_sys.attach(series);
  std::vector<std::uint64_t> series_primes = {2, 3, 5, 7};
  unsigned series_level = 1;
  std::vector<double> Ls;
  std::string quad_path;
  std::string quad_kind = "grid", quad_rule = "midpoint";
  std::size_t quad_points = 128, quad_samples = std::size_t{1} << 20;
  series->add_option("--primes", series_primes, "Primes in the truncated product")->delimiter(',');
  series->add_option("--level", series_level, "Prime power level t");
  series->add_option("--L", Ls, "Cutoffs for J(L); two or more give a mu(infinity) estimate")->delimiter(',');
  series->add_option("--quadrature", quad_path, "Quadrature spec JSON");
  series->add_option("--kind", quad_kind)->check(CLI::IsMember({"grid", "qmc"}));
  series->add_option("--rule", quad_rule)->check(CLI::IsMember({"midpoint", "gauss"}));
  series->add_option("--points", quad_points, "Grid nodes per axis");
  series->add_option("--samples", quad_samples, "QMC samples");
  series->callback([&] {
    action = [&] {
      const auto sys = series_sys.load();
      const auto rep = cml::singular_series(sys, series_primes, series_level, run.budget(cml::Budget::density()));
      json out = {{"command", "singular-series"}, {"system", cml::system_to_json(sys)},
                  {"level", series_level}, {"density", cml::to_json(rep)}};
      if (!Ls.empty()) {
        cml::QuadratureSpec spec;
        if (!quad_path.empty()) {
          spec = cml::quadrature_from_json(cml::load_json_file(quad_path));
        } else {
          spec.kind = quad_kind;
          spec.rule = quad_rule;
          spec.points_per_axis = quad_points;
          spec.samples = quad_samples;
          spec.seed = common.seed;
        }
        const auto b = run.budget(cml::Budget::quadrature());
        out["quadrature"] = cml::quadrature_to_json(spec);
        if (Ls.size() >= 2) {
          const auto mu = cml::J_and_mu_infinity(sys.top_parts(), Ls, spec, b);
          out["singular_integral"] = cml::to_json(mu);
          out["sigma_g"] = rep.singular_series.get_d() * mu.mu_infinity;
        } else {
          out["singular_integral"] = {{"J", {cml::to_json(cml::J_of_L(sys.top_parts(), Ls[0], spec, b))}}};
        }
      }
      run.emit(out);
    };
  });

  // local-check
  auto* local = app.add_subcommand("local-check", "Nonsingular p-adic and real solutions");
  SystemInput local_in;
  local_in.attach(local);
  std::vector<std::uint64_t> local_primes;
  unsigned t_max = 3;
  bool real = false;
  unsigned attempts = 64;
  double tol = 1e-12;
  local->add_option("--p", local_primes, "Primes for the Hensel search")->delimiter(',');
  local->add_option("--t-max", t_max, "Largest level p^t searched");
  local->add_flag("--real", real, "Search a real nonsingular zero of the top parts in (0,1)^n");
  local->add_option("--attempts", attempts, "Random starts for the real search");
  local->add_option("--tol", tol, "Residual tolerance for the real search");
  local->callback([&] {
    action = [&] {
      const auto sys = local_in.load();
      if (local_primes.empty() && !real) throw cml::InputError("give --p and/or --real");
      json padic = json::array();
      for (auto p : local_primes) {
        padic.push_back({{"p", p},
                         {"result", cml::to_json(cml::hensel_check(sys, p, t_max, run.budget(cml::Budget::density())))}});
      }
      json out = {{"command", "local-check"}, {"system", cml::system_to_json(sys)}, {"p_adic", padic}};
      if (real) {
        out["real"] = cml::to_json(cml::real_nonsingular_search(sys.top_parts(), attempts, tol, common.seed));
      }
      run.emit(out);
    };
  });

  // arcs
  auto* arcs = app.add_subcommand("arcs", "Major/minor arc machinery");
  arcs->require_subcommand(1);
  int d1 = 2, d2 = 2;
  std::vector<double> alpha;
  double theta = 0.0;
  double arc_P1 = 0, arc_P2 = 0;
  auto* locate = arcs->add_subcommand("locate", "Classify alpha as major or minor at theta");
  locate->add_option("--alpha", alpha, "Point in [0,1)^R")->delimiter(',')->required();
  locate->add_option("--theta", theta, "Arc parameter")->required();
  locate->add_option("--P1", arc_P1, "P1")->required();
  locate->add_option("--P2", arc_P2, "P2")->required();
  locate->add_option("--d1", d1);
  locate->add_option("--d2", d2);
  locate->callback([&] {
    action = [&] {
      if (!(arc_P1 > 1 && arc_P2 > 1)) throw cml::InputError("P1 and P2 must exceed 1");
      const cml::ArcGeometry geo{cml::log_P_of(arc_P1, arc_P2, d1, d2), d1, d2, alpha.size()};
      const auto b = run.budget(cml::Budget::exp_sum());
      run.emit({{"command", "arcs locate"},
                {"alpha", alpha},
                {"theta", theta},
                {"log_P", geo.log_P},
                {"location", cml::to_json(cml::major_arc_locate(alpha, theta, geo, b))},
                {"measure", cml::to_json(cml::arc_measure_bound(theta, geo, b))}});
    };
  });

  cml::ScheduleParams sp;
  auto* sched = arcs->add_subcommand("schedule", "Theta schedule, K, sigma, zeta and C0");
  sched->add_option("--min-codim", sp.min_codim, "min codim of the rank loci")->required();
  sched->add_option("--d1", sp.d1);
  sched->add_option("--d2", sp.d2);
  sched->add_option("--R", sp.R);
  sched->add_option("--b", sp.b, "log P1 / log P2");
  sched->add_option("--delta0", sp.delta0);
  sched->add_option("--eps0", sp.eps0);
  sched->add_option("--C", sp.C);
  sched->add_option("--logP", sp.log_P, "log P");
  sched->callback([&] {
    action = [&] { run.emit({{"command", "arcs schedule"}, {"context", cml::to_json(cml::schedule(sp))}}); };
  });

  auto* scan = arcs->add_subcommand("scan", "Minor-arc bound ratios at sampled alpha");
  SystemInput scan_in;
  scan_in.attach(scan);
  double K = 0.0;
  std::size_t scan_count = 100;
  std::uint64_t scan_P1 = 0, scan_P2 = 0;
  std::string scan_csv;
  scan->add_option("--theta", theta)->required();
  scan->add_option("--K", K, "Weyl exponent K")->required();
  scan->add_option("--count", scan_count, "Number of sampled alpha");
  scan->add_option("--P1", scan_P1)->required();
  scan->add_option("--P2", scan_P2)->required();
  scan->add_option("--csv", scan_csv, "CSV of samples");
  scan->callback([&] {
    action = [&] {
      const auto sys = scan_in.load();
      const auto primes = run.primes(std::max(scan_P1, scan_P2));
      const auto rep = cml::dichotomy_scan(sys, theta, K, scan_count, common.seed, scan_P1, scan_P2, primes,
                                           run.budget(cml::Budget::exp_sum()));
      Table table;
      {
        std::vector<std::string>& header = table.header;
        for (std::size_t r = 1; r <= sys.R(); ++r) header.push_back("alpha" + std::to_string(r));
        header.insert(header.end(), {"major", "q", "abs_S", "ratio"});
        for (const auto& s : rep.samples) {
          std::vector<std::string> row;
          for (double a : s.alpha) row.push_back(num(a));
          row.push_back(s.major ? "1" : "0");
          row.push_back(s.major ? std::to_string(s.q) : "");
          row.push_back(num(s.abs_S));
          row.push_back(s.ratio ? num(*s.ratio) : "");
          table.rows.push_back(row);
        }
      }
      if (!scan_csv.empty()) Runner::write_file(scan_csv, table.text());
      run.emit({{"command", "arcs scan"}, {"seed", common.seed}, {"P1", scan_P1}, {"P2", scan_P2},
                {"report", cml::to_json(rep)}},
               table);
    };
  });

  // expsum
  auto* expsum = app.add_subcommand("expsum", "Exponential sums S, T and complete sums");
  SystemInput exp_in;
  exp_in.attach(expsum);
  std::string which = "S";
  std::uint64_t e_P1 = 0, e_P2 = 0, q = 1;
  std::vector<std::int64_t> a_vec;
  double K_tilde = 0.0;
  bool chain = false;
  expsum->add_option("which", which, "S, T or complete")->check(CLI::IsMember({"S", "T", "complete"}));
  expsum->add_option("--alpha", alpha, "Frequencies, one per form")->delimiter(',');
  expsum->add_option("--P1", e_P1);
  expsum->add_option("--P2", e_P2);
  expsum->add_flag("--chain", chain, "Also evaluate |S|^4 <= W1 W2 T");
  expsum->add_option("--q", q, "Modulus for the complete sum");
  expsum->add_option("--a", a_vec, "Numerators for the complete sum")->delimiter(',');
  expsum->add_option("--K-tilde", K_tilde, "Exponent parameter for the complete sum reference");
  expsum->callback([&] {
    action = [&] {
      const auto sys = exp_in.load();
      json out = {{"command", "expsum " + which}, {"system", cml::system_to_json(sys)}};
      if (which == "complete") {
        const auto b = run.budget(cml::Budget::density());
        out["report"] = cml::to_json(cml::complete_sum_check(sys, q, a_vec, K_tilde, b));
        run.emit(out);
        return;
      }
      if (e_P1 < 1 || e_P2 < 1) throw cml::InputError("--P1 and --P2 are required");
      const auto b = run.budget(cml::Budget::exp_sum());
      out["alpha"] = alpha;
      out["P1"] = e_P1;
      out["P2"] = e_P2;
      if (which == "S" || chain) {
        const auto primes = run.primes(std::max(e_P1, e_P2));
        if (chain) {
          out["chain"] = cml::to_json(cml::weyl_chain(sys, alpha, e_P1, e_P2, primes, 1e-9, b));
        } else {
          out["S"] = cml::to_json(cml::exp_sum_S(sys, alpha, e_P1, e_P2, primes, b));
        }
      }
      if (which == "T" && !chain) out["T"] = cml::to_json(cml::exp_sum_T(sys, alpha, e_P1, e_P2, b));
      run.emit(out);
    };
  });

  // codim
  auto* codim = app.add_subcommand("codim", "Rank-locus counts and codimension estimates");
  SystemInput codim_sys;
  codim_sys.attach(codim);
  PolyInput codim_form;
  codim->add_option("--form", codim_form.expr, "Single form F over x1..xn (V_F^* and halving)");
  codim->add_option("--form-json", codim_form.poly_path, "Single form F as JSON");
  codim->add_option("--n", codim_form.n, "Variables of --form");
  int block = 1;
  std::vector<std::uint64_t> codim_primes = {5, 7, 11};
  bool halving = false;
  std::vector<std::size_t> rx, ry;
  std::optional<std::size_t> tk;
  std::uint64_t tk_p = 5;
  codim->add_option("--block", block, "0 = all variables, 1 = x-block, 2 = y-block");
  codim->add_option("--primes", codim_primes, "Prime battery")->delimiter(',');
  codim->add_flag("--halving", halving, "Check min codim V_{G,i}^* >= codim V_F^* / 2 for --form");
  codim->add_option("--restrict-x", rx, "x indices (1-based) set to zero")->delimiter(',');
  codim->add_option("--restrict-y", ry, "y indices (1-based) set to zero")->delimiter(',');
  codim->add_option("--tk", tk, "Count T_k for --form at --tk-p");
  codim->add_option("--tk-p", tk_p, "Prime for --tk");
  codim->callback([&] {
    action = [&] {
      const auto b = run.budget(cml::Budget::geometry());
      const bool have_form = !codim_form.expr.empty() || !codim_form.poly_path.empty();
      json out = {{"command", "codim"}};
      if (have_form) {
        const auto F = codim_form.load();
        out["form"] = cml::poly_to_json(F);
        if (halving) out["halving"] = cml::to_json(cml::verify_codim_halving(F, codim_primes, b));
        if (tk) out["T_k"] = {{"k", *tk}, {"p", tk_p}, {"count", cml::t_k_count(F, *tk, tk_p, b).get_str()}};
        if (!halving && !tk) {
          out["V_F"] = cml::to_json(cml::dim_estimate(cml::BihomSystem(F.num_vars(), 0, {F}),
                                                      cml::Block::full, codim_primes, b));
        }
        run.emit(out);
        return;
      }
      const auto sys = codim_sys.load();
      out["system"] = cml::system_to_json(sys);
      if (!rx.empty() || !ry.empty()) {
        auto zero_based = [](std::vector<std::size_t> v) {
          for (auto& i : v) {
            if (i == 0) throw cml::InputError("restriction indices are 1-based");
            --i;
          }
          return v;
        };
        out["restriction"] = cml::to_json(
            cml::restriction_inequality_check(sys, zero_based(rx), zero_based(ry), codim_primes, b));
      } else {
        out["block"] = block;
        out["estimate"] = cml::to_json(cml::dim_estimate(sys, cml::block_from_int(block), codim_primes, b));
      }
      run.emit(out);
    };
  });

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "Codimension thresholds");
  std::string kind = "all";
  int td = 2, td1 = 2, td2 = 2;
  std::uint64_t tn = 1, tR = 1;
  std::string tb = "1", tdelta = "1/2";
  thr->add_option("--kind", kind)->check(
      CLI::IsMember({"all", "two-semiprimes", "prime-comparison", "bihomogeneous", "semiprime-delta"}));
  thr->add_option("--d", td);
  thr->add_option("--n", tn);
  thr->add_option("--d1", td1);
  thr->add_option("--d2", td2);
  thr->add_option("--R", tR);
  thr->add_option("--b", tb, "Exact rational");
  thr->add_option("--delta", tdelta, "Exact rational");
  thr->callback([&] {
    action = [&] {
      json out = {{"command", "thresholds"}};
      const bool all = kind == "all";
      if (all || kind == "two-semiprimes") {
        out["two_semiprimes"] = {{"d", td}, {"value", cml::threshold_two_semiprimes(td).get_str()}};
      }
      if (all || kind == "prime-comparison") {
        out["prime_comparison"] = {{"d", td}, {"n", tn}, {"value", cml::to_json(cml::threshold_prime_comparison(tn, td))}};
      }
      if (all || kind == "bihomogeneous") {
        out["bihomogeneous"] = {{"d1", td1}, {"d2", td2}, {"R", tR}, {"b", tb},
                                {"value", cml::to_json(cml::threshold_bihomogeneous(td1, td2, tR, parse_rational(tb)))}};
      }
      if (all || kind == "semiprime-delta") {
        out["semiprime_delta"] = {{"d", td}, {"delta", tdelta},
                                  {"value", cml::to_json(cml::threshold_semiprime_delta(td, parse_rational(tdelta)))}};
      }
      run.emit(out);
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Built-in check batteries");
  std::string battery = "all";
  verify->add_option("--battery", battery)->check(CLI::IsMember({"diagonal", "bilinear", "identities", "all"}));
  int verify_status = 0;
  verify->callback([&] {
    action = [&] {
      const auto rep = cml::run_verify(battery, common.seed);
      run.emit(cml::to_json(rep));
      verify_status = rep.all_passed() ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json("input", e.what()).dump() << "\n";
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    cml::set_thread_limit(common.threads);
    action();
  } catch (const cml::Error& e) {
    std::cout << error_json(e.code(), e.what()).dump() << "\n";
    return e.exit_status();
  } catch (const json::exception& e) {
    std::cout << error_json("input", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << error_json("internal", e.what()).dump() << "\n";
    return 1;
  }
  if (!common.out.empty()) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string cmd;
    for (int i = 1; i < argc; ++i) cmd += (i > 1 ? " " : "") + std::string(argv[i]);
    json meta = {{"argv", cmd}, {"elapsed_seconds", secs}, {"threads", cml::thread_limit()}};
    Runner::write_file(common.out + ".meta.json", meta.dump(2) + "\n");
  }
  return verify_status;
}

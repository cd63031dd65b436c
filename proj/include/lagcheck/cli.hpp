#pragma once

// Command-line front end. run_cli() does all the work so tests can drive it
// in-process; the lagcheck executable is a thin main() around it.
//
// Exit codes: 0 success, 1 negative verdict under --assert, 2 usage or input
// error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagcheck/errors.hpp"
#include "lagcheck/expsum.hpp"
#include "lagcheck/io/csv.hpp"
#include "lagcheck/io/json.hpp"
#include "lagcheck/io/svg.hpp"
#include "lagcheck/model.hpp"
#include "lagcheck/oracle.hpp"
#include "lagcheck/simulate.hpp"
#include "lagcheck/spectral.hpp"

#ifndef LAGCHECK_VERSION
#define LAGCHECK_VERSION "1.0.0"
#endif

namespace lagcheck::cli {

using io::Json;

inline constexpr const char* kSchema = "lagcheck/1";
inline constexpr double kOracleTolerance = 1e-4;
inline constexpr const char* kUnstableRationale =
    "orders >= 5 give an unstable constitutive equation: the characteristic polynomial has at least one "
    "complex root having positive real part";

/// Bad flags or values; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string format = "json";
  std::string out;
  bool assert_flag = false;
  std::string mode = "weak";
};

inline Json envelope(const std::string& command, Json inputs, Json results) {
  Json doc = Json::object();
  doc["schema"] = kSchema;
  doc["command"] = command;
  doc["tool_version"] = LAGCHECK_VERSION;
  doc["deterministic"] = true;
  doc["inputs"] = std::move(inputs);
  doc["results"] = std::move(results);
  return doc;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
  if (!f) throw UsageError("cannot write '" + path + "'");
}

inline void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
  } else {
    write_file(g.out, text);
  }
}

inline Json interval_json(const RatioInterval& iv) {
  Json j = Json::object();
  j["low"] = iv.low;
  j["low_kind"] = std::string(to_string(iv.low_kind));
  j["high"] = iv.high_kind == BoundKind::Unbounded ? Json(nullptr) : Json(iv.high);
  j["high_kind"] = std::string(to_string(iv.high_kind));
  return j;
}

inline Json intervals_json(const std::vector<RatioInterval>& ivs) {
  Json a = Json::array();
  for (const auto& iv : ivs) a.push_back(interval_json(iv));
  return a;
}

inline Json complex_json(cplx z) {
  Json j = Json::object();
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

inline void require_thermo_orders_cli(int n, int m) {
  if (n < 0 || m < 0) throw UsageError("orders must be >= 0");
  if (n > kMaxThermoOrder || m > kMaxThermoOrder) {
    std::ostringstream os;
    os << "orders (n, m) = (" << n << ", " << m << ") outside {0..4}; " << kUnstableRationale;
    throw UsageError(os.str());
  }
}

inline Mode mode_of(const Globals& g) { return *parse_mode(g.mode); }

/// Uniform double in [-1, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

// ---------------------------------------------------------------------------

inline int cmd_roots(const Globals& g, std::ostream& out, int n, double tau_q) {
  if (n < 1 || n > kMaxStabilityOrder) throw UsageError("--n must lie in 1..50 (order 0 has no roots to report)");
  if (!(tau_q > 0.0)) throw UsageError("--tau-q must be > 0");
  const auto rep = characteristic_roots(n);
  if (g.format == "csv") {
    io::CsvWriter csv({"index", "x_re", "x_im", "lambda_re", "lambda_im"});
    for (std::size_t i = 0; i < rep.roots.size(); ++i) {
      const cplx x = rep.roots[i];
      csv.row({io::cell(static_cast<int>(i)), io::cell(x.real()), io::cell(x.imag()), io::cell(x.real() / tau_q),
               io::cell(x.imag() / tau_q)});
    }
    emit(g, out, csv.str());
    return 0;
  }
  Json roots = Json::array();
  for (const cplx& x : rep.roots) {
    Json r = Json::object();
    r["x"] = complex_json(x);
    r["lambda"] = complex_json(x / tau_q);
    roots.push_back(r);
  }
  Json res = Json::object();
  res["roots"] = roots;
  res["spectral_abscissa"] = rep.spectral_abscissa;
  res["spectral_abscissa_per_second"] = rep.spectral_abscissa / tau_q;
  res["enestrom_kakeya"] = rep.ek_satisfied;
  res["real_root_count"] = rep.real_root_count;
  res["classification"] = std::string(to_string(rep.classification));
  res["max_scaled_residual"] = rep.max_scaled_residual;
  Json in = Json::object();
  in["n"] = n;
  in["tau_q"] = tau_q;
  emit(g, out, io::to_json_text(envelope("roots", in, res)));
  return 0;
}

inline int cmd_szego(const Globals& g, std::ostream& out, int n_max, int samples, const std::string& out_csv,
                     const std::string& out_svg) {
  if (n_max < 1 || n_max > kMaxStabilityOrder) throw UsageError("--n-max must lie in 1..50");
  if (samples < 64) throw UsageError("--samples must be >= 64");
  io::CsvWriter csv({"kind", "n", "re", "im", "distance", "defect"});
  io::SzegoPlot plot;
  plot.title = "scaled roots x/n, n = 1.." + std::to_string(n_max);
  Json per_n = Json::array();
  std::vector<cplx> curve;
  for (int n = 1; n <= n_max; ++n) {
    const auto s = szego_sample(n, samples);
    if (curve.empty()) curve = s.curve_points;
    for (std::size_t i = 0; i < s.scaled_roots.size(); ++i) {
      const cplx z = s.scaled_roots[i];
      csv.row({"root", io::cell(n), io::cell(z.real()), io::cell(z.imag()), io::cell(s.distances[i]), ""});
      plot.roots.push_back(z);
    }
    Json e = Json::object();
    e["n"] = n;
    e["max_distance"] = s.max_distance;
    per_n.push_back(e);
  }
  double worst_defect = 0.0;
  for (const cplx& z : curve) {
    const double d = szego_defect(z);
    worst_defect = std::max(worst_defect, d);
    csv.row({"curve", "", io::cell(z.real()), io::cell(z.imag()), "", io::cell(d)});
  }
  plot.curve = curve;
  if (!curve.empty()) plot.curve.push_back(curve.front());
  if (!out_csv.empty()) write_file(out_csv, csv.str());
  if (!out_svg.empty()) write_file(out_svg, io::svg_szego(plot));
  if (g.format == "csv") {
    emit(g, out, csv.str());
    return 0;
  }
  Json res = Json::object();
  res["orders"] = per_n;
  res["curve_points"] = static_cast<int>(curve.size());
  res["curve_max_defect"] = worst_defect;
  Json in = Json::object();
  in["n_max"] = n_max;
  in["samples"] = samples;
  emit(g, out, io::to_json_text(envelope("szego", in, res)));
  return 0;
}

inline int cmd_check(const Globals& g, std::ostream& out, int n, int m, double tau_q, double tau_T) {
  require_thermo_orders_cli(n, m);
  const ModelOrder order{n, m};
  const LagPair lags{tau_q, tau_T};
  try {
    lags.validate(order);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto verdict = classify(order, lags);
  const auto P = build_positivity_polynomial(order, lags.effective_ratio(order));
  const bool ok = verdict.admissible(mode_of(g));
  if (g.format == "csv") {
    io::CsvWriter csv({"key", "value"});
    csv.row({"verdict", std::string(to_string(verdict.kind))});
    csv.row({"admissible", ok ? "true" : "false"});
    csv.row({"witness_omega", verdict.witness_omega ? io::cell(*verdict.witness_omega) : ""});
    for (std::size_t i = 0; i < P.coefficients().size(); ++i) {
      csv.row({"c" + std::to_string(i), io::cell(P.coefficients()[i])});
    }
    emit(g, out, csv.str());
  } else {
    Json res = Json::object();
    res["verdict"] = std::string(to_string(verdict.kind));
    res["admissible"] = ok;
    res["ratio"] = lags.effective_ratio(order);
    res["positivity_coefficients"] = P.coefficients();
    res["degree"] = P.degree();
    const double tref = lags.reference_time(order);
    res["witness_omega"] = verdict.witness_omega ? Json(*verdict.witness_omega) : Json(nullptr);
    res["witness_omega_tau"] = verdict.witness_omega ? Json(*verdict.witness_omega * tref) : Json(nullptr);
    Json in = Json::object();
    in["n"] = n;
    in["m"] = m;
    in["tau_q"] = tau_q;
    in["tau_T"] = tau_T;
    in["mode"] = g.mode;
    emit(g, out, io::to_json_text(envelope("check", in, res)));
  }
  return g.assert_flag && !ok ? 1 : 0;
}

inline int cmd_region(const Globals& g, std::ostream& out, int n, int m, double r_max, double tol,
                      const std::string& sweep_csv) {
  require_thermo_orders_cli(n, m);
  RegionOptions opt;
  opt.r_max = r_max;
  opt.tol = tol;
  opt.mode = mode_of(g);
  opt.keep_sweep = !sweep_csv.empty();
  RegionResult res;
  try {
    res = admissible_region({n, m}, opt);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (!sweep_csv.empty()) {
    io::CsvWriter csv({"r", "verdict"});
    for (const auto& p : res.sweep) csv.row({io::cell(p.r), std::string(to_string(p.kind))});
    write_file(sweep_csv, csv.str());
  }
  if (g.format == "csv") {
    io::CsvWriter csv({"low", "high", "low_kind", "high_kind"});
    for (const auto& iv : res.region.intervals) {
      csv.row({io::cell(iv.low), iv.high_kind == BoundKind::Unbounded ? "" : io::cell(iv.high),
               std::string(to_string(iv.low_kind)), std::string(to_string(iv.high_kind))});
    }
    emit(g, out, csv.str());
  } else {
    Json r = Json::object();
    r["intervals"] = intervals_json(res.region.intervals);
    r["leading_coefficient_intervals"] = intervals_json(res.leading_coefficient_intervals);
    r["empty"] = res.region.empty();
    if (const auto known = known_region_oracle({n, m})) {
      Json k = Json::object();
      k["intervals"] = intervals_json(known->region.intervals);
      k["necessary_only"] = known->necessary_only;
      r["closed_form"] = k;
    } else {
      r["closed_form"] = nullptr;
    }
    Json in = Json::object();
    in["n"] = n;
    in["m"] = m;
    in["r_max"] = r_max;
    in["tol"] = tol;
    in["mode"] = g.mode;
    emit(g, out, io::to_json_text(envelope("region", in, r)));
  }
  return g.assert_flag && res.region.empty() ? 1 : 0;
}

/// Pairs named consistent in the published summary, which leaves out (1,1).
inline bool in_published_summary(int n, int m) {
  static constexpr int pairs[][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 1}, {1, 2}, {2, 2},
                                     {3, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 3}, {4, 4}};
  for (const auto& p : pairs) {
    if (p[0] == n && p[1] == m) return true;
  }
  return false;
}

inline int cmd_grid(const Globals& g, std::ostream& out) {
  Json cells = Json::array();
  io::CsvWriter csv({"n", "m", "class", "intervals", "witness_omega_tau", "in_published_summary"});
  RegionOptions opt;
  opt.mode = mode_of(g);
  for (int n = 0; n <= kMaxThermoOrder; ++n) {
    for (int m = 0; m <= kMaxThermoOrder; ++m) {
      const auto reg = admissible_region({n, m}, opt).region;
      const std::string cls = reg.unconditional() ? "always" : (reg.empty() ? "never" : "conditional");
      std::optional<double> witness;
      if (reg.empty()) witness = classify({n, m}, LagPair{1.0, 1.0}).witness_omega;
      Json c = Json::object();
      c["n"] = n;
      c["m"] = m;
      c["class"] = cls;
      c["intervals"] = intervals_json(reg.intervals);
      c["contains_equal_lags"] = reg.contains(1.0);
      c["witness_omega_tau"] = witness ? Json(*witness) : Json(nullptr);
      const bool listed = in_published_summary(n, m);
      c["in_published_summary"] = listed;
      if (!reg.empty() && !listed) {
        c["note"] = "consistent but absent from the published summary list";
      } else if (reg.empty() && listed) {
        c["note"] = "listed in the published summary but found inconsistent";
      }
      cells.push_back(c);
      std::ostringstream ivs;
      for (std::size_t i = 0; i < reg.intervals.size(); ++i) {
        const auto& iv = reg.intervals[i];
        ivs << (i ? " " : "") << (iv.low_kind == BoundKind::Closed ? "[" : "(") << io::format_double(iv.low) << ";"
            << (iv.high_kind == BoundKind::Unbounded ? "inf" : io::format_double(iv.high))
            << (iv.high_kind == BoundKind::Closed ? "]" : ")");
      }
      csv.row({io::cell(n), io::cell(m), cls, ivs.str(), witness ? io::cell(*witness) : "", listed ? "true" : "false"});
    }
  }
  if (g.format == "csv") {
    emit(g, out, csv.str());
    return 0;
  }
  Json res = Json::object();
  res["cells"] = cells;
  Json in = Json::object();
  in["mode"] = g.mode;
  emit(g, out, io::to_json_text(envelope("grid", in, res)));
  return 0;
}

inline int cmd_integral(const Globals& g, std::ostream& out, int n, int m, double r, std::optional<double> omega_tau,
                        std::optional<double> omega, std::optional<double> tau_q_opt) {
  require_thermo_orders_cli(n, m);
  if (n < 1) throw UsageError("integral needs a flux order n >= 1");
  if (!(r > 0.0)) throw UsageError("--r must be > 0");
  if (omega && !tau_q_opt) throw UsageError("--omega requires --tau-q");
  if (omega && omega_tau) throw UsageError("give either --omega-tau or --omega, not both");
  const double tau_q = tau_q_opt.value_or(1.0);
  if (!(tau_q > 0.0)) throw UsageError("--tau-q must be > 0");
  const double w = omega ? *omega : omega_tau.value_or(1.0) / tau_q;
  if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("frequency must be > 0");
  const auto c = compare_all({n, m}, LagPair{tau_q, r * tau_q}, w);
  const bool agree = c.max_rel_disagreement <= kOracleTolerance;
  if (g.format == "csv") {
    io::CsvWriter csv({"method", "value"});
    csv.row({"spectral", io::cell(c.value_spectral)});
    csv.row({"kernel", io::cell(c.value_kernel)});
    csv.row({"ode", io::cell(c.value_ode)});
    emit(g, out, csv.str());
  } else {
    Json res = Json::object();
    res["value_spectral"] = c.value_spectral;
    res["value_kernel"] = c.value_kernel;
    res["value_ode"] = c.value_ode;
    res["max_rel_disagreement"] = c.max_rel_disagreement;
    res["tolerance"] = kOracleTolerance;
    res["agree"] = agree;
    Json in = Json::object();
    in["n"] = n;
    in["m"] = m;
    in["r"] = r;
    in["tau_q"] = tau_q;
    in["omega"] = w;
    in["omega_tau"] = w * tau_q;
    emit(g, out, io::to_json_text(envelope("integral", in, res)));
  }
  return g.assert_flag && !agree ? 1 : 0;
}

inline int cmd_simulate(const Globals& g, std::ostream& out, int n, double tau_q, double horizon_tau, double step_tau,
                        std::uint64_t seed, const std::vector<double>& init) {
  if (n < 1 || n > kMaxSimulateOrder) throw UsageError("--n must lie in 1..10");
  if (!(tau_q > 0.0)) throw UsageError("--tau-q must be > 0");
  if (!(horizon_tau > 0.0)) throw UsageError("--horizon must be > 0");
  if (!(step_tau > 0.0)) throw UsageError("--step must be > 0");
  std::vector<double> ic = init;
  if (ic.empty()) {
    std::mt19937_64 rng(seed);
    for (int j = 0; j < n; ++j) ic.push_back(unit_uniform(rng));
  }
  if (ic.size() != static_cast<std::size_t>(n)) throw UsageError("--init needs exactly n values");
  Trajectory tr;
  try {
    tr = free_decay(n, tau_q, ic, horizon_tau * tau_q, step_tau * tau_q);
  } catch (const StepTooLarge& e) {
    throw UsageError(e.what());
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto rep = characteristic_roots(n);
  if (g.format == "csv") {
    io::CsvWriter csv({"t", "abs_q"});
    for (std::size_t i = 0; i < tr.times.size(); ++i) csv.row({io::cell(tr.times[i]), io::cell(tr.values[i])});
    emit(g, out, csv.str());
  } else {
    Json res = Json::object();
    res["outcome"] = std::string(to_string(tr.outcome));
    res["fitted_rate"] = tr.fitted_rate;
    res["fitted_rate_tau"] = tr.fitted_rate * tau_q;
    res["spectral_abscissa"] = rep.spectral_abscissa;
    res["samples"] = static_cast<int>(tr.times.size());
    res["final_time"] = tr.times.back();
    Json in = Json::object();
    in["n"] = n;
    in["tau_q"] = tau_q;
    in["horizon_tau"] = horizon_tau;
    in["step_tau"] = step_tau;
    in["initial"] = ic;
    in["seed"] = seed;
    emit(g, out, io::to_json_text(envelope("simulate", in, res)));
  }
  return g.assert_flag && tr.outcome != Outcome::Decayed ? 1 : 0;
}

// ---------------------------------------------------------------------------

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lagcheck: stability and Second-Law consistency of dual-phase-lag heat conduction laws"};
  app.name("lagcheck");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Write the report to PATH instead of stdout");
  app.add_flag("--assert", g.assert_flag, "Exit 1 on a negative verdict");
  app.add_option("--mode", g.mode, "Consistency mode")->check(CLI::IsMember({"strict", "weak"}));
  app.set_version_flag("--version", LAGCHECK_VERSION);

  int n = -1, m = -1, n_max = 50, samples = 512;
  double tau_q = 1.0, tau_T = 1.0, r = 1.0, r_max = 100.0, tol = 1e-6, horizon = kDefaultHorizonLags,
         step = 1.0 / 50.0;
  std::optional<double> omega_tau, omega, tau_q_opt;
  std::string out_csv, out_svg, sweep_csv;
  std::uint64_t seed = 1;
  std::vector<double> init;

  auto* roots = app.add_subcommand("roots", "Roots of the truncated exponential e_n")->fallthrough();
  roots->add_option("--n", n, "Order 1..50")->required();
  roots->add_option("--tau-q", tau_q, "Flux lag tau_q (s)");

  auto* szego = app.add_subcommand("szego", "Scaled roots against the Szego curve")->fallthrough();
  szego->add_option("--n-max", n_max, "Largest order 1..50");
  szego->add_option("--samples", samples, "Curve points (>= 64)");
  szego->add_option("--out-csv", out_csv, "CSV of roots and curve points");
  szego->add_option("--out-svg", out_svg, "SVG plot");

  auto* check = app.add_subcommand("check", "Second-Law verdict for one (n, m, tau_q, tau_T)")->fallthrough();
  check->add_option("--n", n, "Flux order 0..4")->required();
  check->add_option("--m", m, "Gradient order 0..4")->required();
  check->add_option("--tau-q", tau_q, "Flux lag tau_q (s)");
  check->add_option("--tau-t", tau_T, "Gradient lag tau_T (s)");

  auto* region = app.add_subcommand("region", "Admissible delay ratios r = tau_T / tau_q")->fallthrough();
  region->add_option("--n", n, "Flux order 0..4")->required();
  region->add_option("--m", m, "Gradient order 0..4")->required();
  region->add_option("--r-max", r_max, "Scan [1/r_max, r_max]");
  region->add_option("--tol", tol, "Relative boundary tolerance");
  region->add_option("--sweep-csv", sweep_csv, "CSV of (r, verdict) over the scan grid");

  auto* grid = app.add_subcommand("grid", "Verdict classes over (n, m) in {0..4}^2")->fallthrough();

  auto* integral = app.add_subcommand("integral", "Cycle integral by three independent methods")->fallthrough();
  integral->add_option("--n", n, "Flux order 1..4")->required();
  integral->add_option("--m", m, "Gradient order 0..4")->required();
  integral->add_option("--r", r, "Delay ratio tau_T / tau_q");
  integral->add_option("--omega-tau", omega_tau, "Dimensionless frequency omega * tau_q");
  integral->add_option("--omega", omega, "Frequency (rad/s); needs --tau-q");
  integral->add_option("--tau-q", tau_q_opt, "Flux lag tau_q (s)");

  auto* simulate = app.add_subcommand("simulate", "Free decay of the homogeneous flux equation")->fallthrough();
  simulate->add_option("--n", n, "Order 1..10")->required();
  simulate->add_option("--tau-q", tau_q, "Flux lag tau_q (s)");
  simulate->add_option("--horizon", horizon, "Horizon in units of tau_q");
  simulate->add_option("--step", step, "RK4 step in units of tau_q (<= 1/50)");
  simulate->add_option("--seed", seed, "Seed for random initial data");
  simulate->add_option("--init", init, "Initial tau_q^j q^(j)(0), j = 0..n-1")->delimiter(',');

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*roots) return cmd_roots(g, out, n, tau_q);
    if (*szego) return cmd_szego(g, out, n_max, samples, out_csv, out_svg);
    if (*check) return cmd_check(g, out, n, m, tau_q, tau_T);
    if (*region) return cmd_region(g, out, n, m, r_max, tol, sweep_csv);
    if (*grid) return cmd_grid(g, out);
    if (*integral) return cmd_integral(g, out, n, m, r, omega_tau, omega, tau_q_opt);
    if (*simulate) return cmd_simulate(g, out, n, tau_q, horizon, step, seed, init);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace lagcheck::cli

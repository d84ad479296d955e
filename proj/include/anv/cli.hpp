#pragma once

#include <cmath>
#include <ctime>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "anv/common.hpp"
#include "anv/congruence.hpp"
#include "anv/gamma_factors.hpp"
#include "anv/mseries.hpp"
#include "anv/newvector.hpp"
#include "anv/numerics.hpp"
#include "anv/padic.hpp"
#include "anv/plancherel.hpp"
#include "anv/report.hpp"
#include "anv/rng.hpp"
#include "anv/version.hpp"
#include "anv/whittaker.hpp"

namespace anv::cli {

using ordered_json = nlohmann::ordered_json;

/// Conductor-uniformity constant of the invariance experiment, frozen from
/// the first verified run of `newvector-defect` with the default family.
inline constexpr double kFrozenDefectK = 1.30;

/// p-adic heart fixtures: largest m_1 with a nonzero torus integral in the
/// scan window, and the exact nonzero values.
inline constexpr int kHeartThresholdN2 = 0;   // nonzero set {(0,0)} -> 2
inline constexpr int kHeartThresholdN3 = -1;  // nonzero set {(-1,-1,-1)} -> 6

struct ExperimentConfig {
  std::string command;
  Config params;
  std::string out_path;        // empty: stdout
  std::string format = "csv";  // csv | json | svg
};

namespace detail {

/// Tabular result plus metadata; rendered to csv/json/svg on demand.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  ordered_json meta = ordered_json::object();

  std::string to_csv() const {
    CsvWriter w(columns);
    for (const auto& r : rows) w.row_values(r);
    std::string out = w.body();
    if (!meta.empty()) out += "# meta " + meta.dump() + "\r\n";
    return out;
  }
  std::string to_json() const {
    ordered_json j = ordered_json::object();
    for (auto it = meta.begin(); it != meta.end(); ++it) j[it.key()] = it.value();
    ordered_json data = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row = ordered_json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) row[columns[i]] = r[i];
      data.push_back(row);
    }
    j["rows"] = data;
    return j.dump(2) + "\n";
  }
  std::string to_svg(const std::string& xlab, const std::string& ylab, int xcol, int ycol) const {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) pts.emplace_back(r[xcol], r[ycol]);
    return svg_plot({{ylab, pts}}, xlab, ylab);
  }
};

inline void check(Report& rep, bool ok, const std::string& name, const std::string& detail) {
  if (!ok) rep.failures.push_back({name, detail});
}

inline std::vector<cplx> parse_mu(const Config& c, const std::string& re_key,
                                  const std::string& im_key,
                                  const std::vector<double>& re_dflt,
                                  const std::vector<double>& im_dflt) {
  std::vector<double> re = c.get_list(re_key, re_dflt);
  std::vector<double> im = c.get_list(im_key, im_dflt);
  if (re.size() != im.size()) throw ConfigError("mu real/imag lists differ in length");
  std::vector<cplx> mu(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) mu[i] = cplx(re[i], im[i]);
  return mu;
}

// --- command implementations ----------------------------------------------

inline Table cmd_gamma(const Config& c, Report& rep) {
  Table t;
  t.columns = {"s_re", "s_im", "gamma_r_re", "gamma_r_im"};
  double from = c.get_double("re_from", -3.5);
  double to = c.get_double("re_to", 3.5);
  double step = c.get_double("re_step", 0.25);
  double im = c.get_double("im", 0.7);
  if (!(step > 0.0)) throw ConfigError("gamma: re_step must be positive");
  for (double re = from; re <= to + 1e-12; re += step) {
    cplx s(re, im);
    if (anv::detail::is_gamma_r_pole(s)) continue;
    cplx v = gamma_R(s);
    t.rows.push_back({re, im, v.real(), v.imag()});
  }
  (void)rep;
  return t;
}

inline Table cmd_conductor(const Config& c, Report& rep) {
  Table t;
  t.columns = {"case_n", "draw", "c_big", "c_small", "c_tensor", "lower", "upper", "ok"};
  long draws = c.get_long("draws", 1000);
  std::uint64_t seed = c.get_u64("seed", 20240901ULL);
  long bad = 0;
  for (int cs = 0; cs < 2; ++cs) {
    int big_n = cs == 0 ? 2 : 3;
    int small_n = big_n - 1;
    SplitMix64 rng(seed, 100 + cs);
    for (long d = 0; d < draws; ++d) {
      LanglandsParams Pi, pi;
      for (int i = 0; i < big_n; ++i) Pi.mu.push_back(cplx(0.0, rng.uniform(-40.0, 40.0)));
      for (int i = 0; i < small_n; ++i) pi.mu.push_back(cplx(0.0, rng.uniform(-40.0, 40.0)));
      double cb = analytic_conductor(Pi), cp = analytic_conductor(pi);
      double ct = analytic_conductor(rs_params(Pi, pi));
      double low = std::pow(cb, small_n) / std::pow(cp, big_n);
      double up = std::pow(cb, small_n) * std::pow(cp, big_n);
      bool ok = low <= ct && ct <= up;
      if (!ok) ++bad;
      if (d < 16 || !ok)
        t.rows.push_back({double(small_n), double(d), cb, cp, ct, low, up, ok ? 1.0 : 0.0});
    }
  }
  t.meta["draws_per_case"] = draws;
  t.meta["violations"] = bad;
  check(rep, bad == 0, "conductor_tensor_bounds", "violations=" + std::to_string(bad));
  return t;
}

inline Table cmd_k_volume(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"X", "estimate", "stderr", "scaled"};
  CongruenceBox box;
  box.n = static_cast<int>(c.get_long("n", 2));
  box.star = static_cast<int>(c.get_long("star", 0));
  box.tau = c.get_double("tau", 0.1);
  std::vector<double> xs = c.get_list("xs", {1.0, 10.0, 100.0});
  long samples = c.get_long("samples", 400000);
  std::uint64_t seed = c.get_u64("seed", 7ULL);
  double A = box.star == 1 ? box.n : box.n - 1;
  double ref = 0.0, refstderr = 0.0;
  double maxdev = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    box.X = xs[i];
    McEstimate e = volume_mc(box, samples, seed);
    double scaled = e.estimate * std::pow(box.X, A);
    if (i == 0) {
      ref = scaled;
      refstderr = e.stderr_ * std::pow(box.X, A);
    } else {
      double dev = std::abs(scaled - ref);
      maxdev = std::max(maxdev, dev / ref);
      double slack = std::max(tolerance * ref,
                              3.0 * (e.stderr_ * std::pow(box.X, A) + refstderr));
      if (dev > slack) ok = false;
    }
    t.rows.push_back({box.X, e.estimate, e.stderr_, scaled});
  }
  t.meta["A"] = A;
  t.meta["max_rel_dev"] = maxdev;
  check(rep, ok, "volume_scaling",
        "vol*X^A drifts beyond tolerance, max_rel_dev=" + fmt_double(maxdev));
  return t;
}

inline Table cmd_folner(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"X", "tau1", "ratio", "stderr"};
  CongruenceBox box;
  box.n = static_cast<int>(c.get_long("n", 2));
  box.star = static_cast<int>(c.get_long("star", 0));
  box.tau = c.get_double("tau", 0.1);
  std::vector<double> xs = c.get_list("xs", {1.0, 50.0});
  std::vector<double> fracs = c.get_list("fracs", {2.0, 8.0, 32.0});
  long samples = c.get_long("samples", 320000);
  std::uint64_t seed = c.get_u64("seed", 11ULL);
  double thresh = tolerance > 0.0 ? tolerance : 0.05;
  bool ok = true;
  for (double X : xs) {
    box.X = X;
    double prev = 1e300;
    for (double f : fracs) {
      double tau1 = box.tau / f;
      MatrixD g = folner_probe(box, tau1, seed);
      McEstimate e = folner_ratio_stats(g, box, tau1, samples, seed);
      t.rows.push_back({X, tau1, e.estimate, e.stderr_});
      if (!(e.estimate < prev)) ok = false;
      prev = e.estimate;
      if (f == fracs.back() && !(e.estimate < thresh)) ok = false;
    }
  }
  t.meta["threshold"] = thresh;
  check(rep, ok, "folner_decay", "ratios not decreasing below threshold");
  return t;
}

inline Table cmd_whittaker_eval(const Config& c, Report& rep, double tolerance) {
  Table t;
  std::string mode = c.get("mode", "gl2");
  double tol = tolerance > 0.0 ? tolerance : 1e-8;
  if (mode == "gl2") {
    t.columns = {"a1", "a2", "w_re", "w_im"};
    auto mu = parse_mu(c, "mu_re", "mu_im", {0.0, 0.0}, {2.0, -2.0});
    std::vector<double> av = c.get_list("a", {0.7, 1.3});
    LanglandsParams p{std::vector<cplx>(mu)};
    DiagonalPoint a{std::vector<double>(av)};
    cplx w = whittaker_gl2(p, a);
    t.rows.push_back({av[0], av[1], w.real(), w.imag()});
    t.meta["mode"] = "gl2";
  } else if (mode == "gl3") {
    t.columns = {"a1", "a2", "a3", "w_re", "w_im", "tail"};
    auto mu = parse_mu(c, "mu_re", "mu_im", {0.02, 0.01, -0.03}, {0.0, 0.0, 0.0});
    std::vector<double> av = c.get_list("a", {1.0, 1.0, 1.0});
    VerticalContour contour{c.get_double("sigma", 0.0), c.get_double("height", 26.0),
                            static_cast<int>(c.get_long("nodes", 416))};
    LanglandsParams p{std::vector<cplx>(mu)};
    DiagonalPoint a{std::vector<double>(av)};
    Gl3Value v = whittaker_gl3(p, a, contour);
    VerticalContour dbl{contour.sigma, contour.height * 1.25, contour.nodes * 2};
    Gl3Value v2 = whittaker_gl3(p, a, dbl);
    double dev = std::abs(v.w - v2.w) / std::max(std::abs(v2.w), 1e-280);
    t.rows.push_back({av[0], av[1], av[2], v.w.real(), v.w.imag(), v.tail});
    t.meta["mode"] = "gl3";
    t.meta["refined_rel_dev"] = dev;
    check(rep, dev < tol, "gl3_node_doubling", "refinement deviation " + fmt_double(dev));
  } else {
    throw ConfigError("whittaker-eval: mode must be gl2 or gl3");
  }
  return t;
}

inline Table cmd_decompose(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"ratio", "t", "residual"};
  std::vector<double> ratios = c.get_list("ratios", {0.01, 0.1, 0.5, 0.9});
  std::vector<double> ts = c.get_list("ts", {0.0, 3.0, 10.0});
  double re1 = c.get_double("re1", 0.02), re2 = c.get_double("re2", 0.01);
  int kmax = static_cast<int>(c.get_long("kmax", 24));
  double tol = tolerance > 0.0 ? tolerance : 1e-8;
  double worst = 0.0;
  for (double r : ratios)
    for (double tv : ts) {
      LanglandsParams mu{{cplx(re1, tv), cplx(re2, -tv)}};
      DiagonalPoint a{{r, 1.0}};
      DecomposeResult d = decompose_gl2(mu, a, kmax);
      double res = d.residual();
      worst = std::max(worst, res);
      t.rows.push_back({r, tv, res});
    }
  t.meta["worst_residual"] = worst;
  check(rep, worst <= tol, "gl2_decomposition", "worst residual " + fmt_double(worst));
  return t;
}

inline Table cmd_m_vanishing(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"case", "congruent", "residual"};
  int kmax = static_cast<int>(c.get_long("kmax", 14));
  double tol = tolerance > 0.0 ? tolerance : 1e-8;
  DiagonalPoint a{{0.2, 0.5, 1.0}};
  std::vector<LanglandsParams> congruent = {
      LanglandsParams{{cplx(0.3, 1.0), cplx(2.3, 1.0), cplx(0.07, 0.0)}},
      LanglandsParams{{cplx(0.1, 2.0), cplx(4.1, 2.0), cplx(0.03, 0.0)}},
      LanglandsParams{{cplx(0.5, 0.6), cplx(2.5, 0.6), cplx(0.11, 0.0)}}};
  LanglandsParams control{{cplx(0.3, 1.0), cplx(2.8, 1.0), cplx(0.07, 0.0)}};
  bool ok = true;
  for (std::size_t i = 0; i < congruent.size(); ++i) {
    double r = m_vanishing(congruent[i], a, kmax);
    ok = ok && r <= tol;
    t.rows.push_back({double(i), 1.0, r});
  }
  double rc = m_vanishing(control, a, kmax);
  ok = ok && rc >= 1e-3;
  t.rows.push_back({double(congruent.size()), 0.0, rc});
  t.meta["control_residual"] = rc;
  check(rep, ok, "m_vanishing", "vanishing residuals out of band");
  return t;
}

inline Table cmd_plancherel(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"t", "re", "im"};
  double tmax = c.get_double("tmax", 40.0);
  int nodes = static_cast<int>(c.get_long("nodes", 400));
  double tol = tolerance > 0.0 ? tolerance : 1e-4;
  BumpFunction f = BumpFunction::unit_l2(c.get_double("center", 1.0), c.get_double("radius", 0.5));
  SpectralGrid grid = make_spectral_grid(0.0, tmax, nodes);
  ForwardCoefficients coeffs = forward_transform(f, grid);
  for (std::size_t i = 0; i < grid.t_values.size(); ++i)
    t.rows.push_back({grid.t_values[i], coeffs.values[i].real(), coeffs.values[i].imag()});
  double rt = roundtrip_error(f, grid);
  double pv = parseval_defect(f, grid);
  double dd = 0.0;
  for (double tv : {0.35, 1.0, 2.5, 10.0, 25.0})
    dd = std::max(dd, std::abs(plancherel_density(tv) - plancherel_density_closed(tv)) /
                          plancherel_density_closed(tv));
  t.meta["roundtrip_sup_error"] = rt;
  t.meta["parseval_rel_defect"] = pv;
  t.meta["density_two_path_rel"] = dd;
  check(rep, rt <= tol, "plancherel_roundtrip", "sup error " + fmt_double(rt));
  check(rep, pv <= 1e-3, "parseval_shadow", "relative defect " + fmt_double(pv));
  check(rep, dd <= 1e-10, "density_closed_form", "two-path rel dev " + fmt_double(dd));
  return t;
}

inline Table cmd_newvector_decay(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"M", "slope"};
  double tv = c.get_double("t", 10.0);
  std::vector<double> ms = c.get_list("ms", {3.0, 5.0});
  std::vector<double> grid = c.get_list("grid", {0.3, 0.15, 0.075, 0.0375, 0.03});
  double slack = tolerance > 0.0 ? tolerance : 0.1;
  Gl2Rep rep_pi = Gl2Rep::tempered(tv);
  KirillovVector v = KirillovVector::unit();
  bool ok = true;
  for (double m : ms) {
    double slope = decay_fit(rep_pi, v, grid, static_cast<int>(m));
    ok = ok && slope >= m - slack;
    t.rows.push_back({m, slope});
  }
  t.meta["conductor"] = rep_pi.conductor();
  check(rep, ok, "decay_slopes", "fitted slope below M - 0.1");
  return t;
}

inline Table cmd_newvector_defect(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"conductor", "c", "defect_re", "defect_im", "ratio"};
  std::vector<double> ts = c.get_list("ts", {2.1622776601683795, 9.0, 30.622776601683793});
  std::vector<double> cs = c.get_list("cs", {0.01, 0.05, 0.1});
  double kcap = tolerance > 0.0 ? tolerance : kFrozenDefectK;
  KirillovVector v = KirillovVector::unit();
  double K = 0.0;
  for (double tv : ts) {
    Gl2Rep rp = Gl2Rep::tempered(tv);
    DefectEngine eng(rp, v);
    for (double cc : cs) {
      cplx d = eng.defect(cc);
      double ratio = std::abs(d) / std::abs(cc);
      K = std::max(K, ratio);
      t.rows.push_back({rp.conductor(), cc, d.real(), d.imag(), ratio});
    }
  }
  t.meta["K_estimate"] = K;
  t.meta["K_frozen"] = kFrozenDefectK;
  check(rep, K <= kcap, "defect_linear_bound", "K estimate " + fmt_double(K));
  return t;
}

inline Table cmd_subconductor(const Config& c, Report& rep, double tolerance) {
  Table t;
  t.columns = {"conductor", "shrink", "c", "defect_re", "defect_im", "defect_abs"};
  double tv = c.get_double("t", 100.0);
  double shrink = c.get_double("shrink", 0.01);
  double cc = c.get_double("c", 0.1);
  double thresh = tolerance > 0.0 ? tolerance : 0.05;
  Gl2Rep rp = Gl2Rep::tempered(tv);
  KirillovVector v = KirillovVector::unit();
  cplx d = subconductor_probe(rp, v, shrink, cc);
  t.rows.push_back({rp.conductor(), shrink, cc, d.real(), d.imag(), std::abs(d)});
  t.meta["witness_threshold"] = thresh;
  check(rep, std::abs(d) >= thresh, "subconductor_witness",
        "|defect| = " + fmt_double(std::abs(d)));
  return t;
}

inline Table cmd_toy(const Config& c, Report& rep) {
  Table t;
  t.columns = {"t", "X", "defect", "bound", "ok"};
  std::vector<double> ts = c.get_list("ts", {1.0, 10.0, 100.0});
  std::vector<double> xs = c.get_list("xs", {10.0, 1000.0, 100000.0});
  if (ts.size() != xs.size()) throw ConfigError("toy: ts and xs must pair up");
  bool all = true;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double d = toy_defect(ts[i], xs[i]);
    double bound = std::abs(ts[i]) / (xs[i] - 1.0);
    bool ok = d <= bound * (1.0 + 1e-9);
    all = all && ok;
    t.rows.push_back({ts[i], xs[i], d, bound, ok ? 1.0 : 0.0});
  }
  check(rep, all, "toy_elementary_bound", "grid sup exceeded |t|/(X-1)");
  return t;
}

inline Table cmd_padic_heart(const Config& c, Report& rep) {
  Table t;
  t.columns = {"m1", "m2", "m3", "numerator", "denominator", "qpower"};
  int n = static_cast<int>(c.get_long("n", 2));
  int m1max = static_cast<int>(c.get_long("m1max", 6));
  ScanResult scan = heart_vanishing_scan(n, m1max);
  for (const auto& e : scan.entries) {
    if (e.value == 0) continue;  // table lists the nonzero support
    double m3 = n == 3 ? e.m[2] : 0.0;
    t.rows.push_back({double(e.m[0]), double(e.m[1]), m3,
                      boost::multiprecision::numerator(e.value).convert_to<double>(),
                      boost::multiprecision::denominator(e.value).convert_to<double>(),
                      double(e.qpower)});
  }
  t.meta["n"] = n;
  t.meta["entries_scanned"] = scan.entries.size();
  t.meta["threshold_m1"] = scan.has_threshold ? scan.threshold_m1 : -999;
  int expect = n == 2 ? kHeartThresholdN2 : kHeartThresholdN3;
  bool ok = scan.has_threshold && scan.threshold_m1 == expect;
  if (n == 2) ok = ok && torus_integral({0, 0}, 2) == 2;
  check(rep, ok, "padic_heart_threshold",
        "threshold table does not match the frozen fixture");
  return t;
}

}  // namespace detail

/// Run one experiment; returns the report (exit_code 0/1/2). Deterministic
/// bodies for fixed config + seed; the timestamp lives in the header.
inline Report run(const ExperimentConfig& cfg) {
  Report rep;
  Config merged = cfg.params;
  merged.kv["command"] = cfg.command;
  merged.kv["format"] = cfg.format;
  {
    std::ostringstream hash;
    hash << std::hex << merged.hash();
    rep.header.push_back(std::string("artifact: anv ") + kVersion);
    rep.header.push_back("command: " + cfg.command);
    rep.header.push_back("seed: " + merged.get("seed", "default"));
    rep.header.push_back("config-hash: " + hash.str());
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    rep.header.push_back(std::string("generated: ") + buf);
  }
  double tolerance = cfg.params.get_double("tolerance", 0.0);
  detail::Table t;
  try {
    if (cfg.command == "gamma")
      t = detail::cmd_gamma(cfg.params, rep);
    else if (cfg.command == "conductor")
      t = detail::cmd_conductor(cfg.params, rep);
    else if (cfg.command == "k-volume")
      t = detail::cmd_k_volume(cfg.params, rep, tolerance > 0 ? tolerance : 0.05);
    else if (cfg.command == "folner")
      t = detail::cmd_folner(cfg.params, rep, tolerance);
    else if (cfg.command == "whittaker-eval")
      t = detail::cmd_whittaker_eval(cfg.params, rep, tolerance);
    else if (cfg.command == "decompose")
      t = detail::cmd_decompose(cfg.params, rep, tolerance);
    else if (cfg.command == "m-vanishing")
      t = detail::cmd_m_vanishing(cfg.params, rep, tolerance);
    else if (cfg.command == "plancherel-roundtrip")
      t = detail::cmd_plancherel(cfg.params, rep, tolerance);
    else if (cfg.command == "newvector-decay")
      t = detail::cmd_newvector_decay(cfg.params, rep, tolerance);
    else if (cfg.command == "newvector-defect")
      t = detail::cmd_newvector_defect(cfg.params, rep, tolerance);
    else if (cfg.command == "subconductor")
      t = detail::cmd_subconductor(cfg.params, rep, tolerance);
    else if (cfg.command == "toy")
      t = detail::cmd_toy(cfg.params, rep);
    else if (cfg.command == "padic-heart")
      t = detail::cmd_padic_heart(cfg.params, rep);
    else
      throw ConfigError("unknown command: " + cfg.command);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    // Library-level domain failures triggered by configuration values.
    throw ConfigError(std::string("command failed: ") + e.what());
  }
  if (cfg.format == "csv")
    rep.body = t.to_csv();
  else if (cfg.format == "json")
    rep.body = t.to_json();
  else if (cfg.format == "svg")
    rep.body = t.to_svg(t.columns[0], t.columns.size() > 2 ? t.columns[2] : t.columns[1], 0,
                        t.rows.empty() || t.rows[0].size() < 3 ? 1 : 2);
  else
    throw ConfigError("format must be csv, json or svg");
  rep.exit_code = rep.failures.empty() ? 0 : 1;
  return rep;
}

}  // namespace anv::cli

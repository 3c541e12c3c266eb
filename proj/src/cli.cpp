#include "hysterion/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hysterion/det.hpp"
#include "hysterion/ensemble.hpp"
#include "hysterion/errors.hpp"
#include "hysterion/io.hpp"
#include "hysterion/model.hpp"
#include "hysterion/scaling.hpp"
#include "hysterion/sde.hpp"

namespace hyst {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_slack(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.4f", v);
  return buf;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// "a,b,c" lists the values; "log:lo:hi:n" spaces n values geometrically.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.rfind("log:", 0) == 0) {
    const auto parts = split(text.substr(4), ':');
    if (parts.size() != 3)
      throw std::invalid_argument("grid needs log:lo:hi:n");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double nd = parse_number(parts[2]);
    const int n = static_cast<int>(nd);
    if (nd != n || n < 2 || !(lo > 0.0) || !(hi > lo))
      throw std::invalid_argument("grid needs 0 < lo < hi and n >= 2");
    for (int k = 0; k < n; ++k)
      grid.push_back(lo * std::pow(hi / lo, double(k) / double(n - 1)));
    grid.back() = hi;
  } else {
    for (const std::string& part : split(text, ','))
      grid.push_back(parse_number(part));
  }
  return grid;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw std::invalid_argument(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument("bad config file " + path + ": " + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("config file must hold a JSON object");
  return j;
}

// Config supplies a value only when the option was absent on the command line.
template <class T>
void overlay(const CLI::App& sub, const json& cfg, const char* key,
             const char* optname, T& v) {
  if (!cfg.contains(key)) return;
  const CLI::Option* o = sub.get_option_no_throw(optname);
  if (o != nullptr && o->count() > 0) return;
  try {
    v = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "': " + e.what());
  }
}

template <class T>
void overlay(const CLI::App& sub, const json& cfg, const char* key,
             const char* optname, std::optional<T>& v) {
  if (!cfg.contains(key)) return;
  const CLI::Option* o = sub.get_option_no_throw(optname);
  if (o != nullptr && o->count() > 0) return;
  try {
    v = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config key '" + std::string(key) +
                                "': " + e.what());
  }
}

struct ParamOpts {
  double eps = 1e-3;
  double sigma = 0.0;
  std::optional<double> amp;
  std::optional<double> a0;
};

void add_param_options(CLI::App* sub, ParamOpts& po) {
  sub->add_option("--eps", po.eps, "time-scale separation (0, 1)");
  sub->add_option("--sigma", po.sigma, "noise intensity, >= 0");
  CLI::Option* amp = sub->add_option("--amp", po.amp, "forcing amplitude A");
  CLI::Option* a0 = sub->add_option("--a0", po.a0,
                                    "amplitude offset A - lambda_c");
  amp->excludes(a0);
  a0->excludes(amp);
}

void overlay_params(const CLI::App& sub, const json& cfg, ParamOpts& po) {
  overlay(sub, cfg, "eps", "--eps", po.eps);
  overlay(sub, cfg, "sigma", "--sigma", po.sigma);
  const CLI::Option* oa = sub.get_option_no_throw("--amp");
  const CLI::Option* og = sub.get_option_no_throw("--a0");
  const bool given = (oa != nullptr && oa->count() > 0) ||
                     (og != nullptr && og->count() > 0);
  if (given) return;
  if (cfg.contains("amp")) po.amp = cfg.at("amp").get<double>();
  if (cfg.contains("a0")) po.a0 = cfg.at("a0").get<double>();
}

ModelParams resolve_params(const ParamOpts& po) {
  if (po.amp && po.a0)
    throw std::invalid_argument("give either --amp or --a0, not both");
  if (!po.amp && !po.a0)
    throw std::invalid_argument("an amplitude is required: --amp or --a0");
  ModelParams p = po.a0 ? ModelParams::from_a0(po.eps, po.sigma, *po.a0)
                        : ModelParams{po.eps, po.sigma, *po.amp};
  p.validate();
  return p;
}

const char* stability_label(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "?";
}

double default_x0(const ModelParams& p, double t0) {
  const EquilibriumSet eq = equilibria(lambda_of(t0, p.amplitude));
  return eq.roots[eq.count - 1];
}

void emit(const fs::path& file, const std::string& content, Manifest& man) {
  write_text_file(file.string(), content);
  man.add_output(file.string());
  std::cout << "wrote " << file.string() << "\n";
}

int run_classify(const ParamOpts& po) {
  const ModelParams p = resolve_params(po);
  const Regime r = classify(p);
  std::cout << to_string(r.regime_case) << " (" << family_label(r.regime_case)
            << ")\n";
  std::cout << "borderline: " << (r.borderline ? "yes" : "no") << "\n";
  std::cout << "min_slack: " << fmt_slack(r.min_slack) << "\n";
  std::cout << "margins (positive log-slack = inequality holds):\n";
  for (const auto& [label, slack] : r.margins)
    std::cout << "  " << std::left << std::setw(36) << label
              << fmt_slack(slack) << "\n";
  return 0;
}

struct DetOpts {
  ParamOpts po;
  double eta = 200.0;
  bool zeta = false;
  std::string out;  // CSV path prefix
};

int run_det(const DetOpts& d) {
  const ModelParams p = resolve_params(d.po);
  OrbitOptions oo;
  oo.eta = d.eta;
  const auto orbits = find_periodic_orbits(p, oo);
  std::cout << "a0: " << fmt6(p.a0()) << "\n";
  std::cout << "orbits: " << orbits.size() << "\n";
  std::cout << (d.zeta ? "branch,stability,area,zeta_max\n"
                       : "branch,stability,area\n");
  for (const PeriodicOrbit& orb : orbits) {
    std::cout << to_string(orb.branch) << ',' << stability_label(orb.stability)
              << ',' << fmt_double(det_area(orb.path, p));
    if (d.zeta) {
      if (orb.stability == Stability::stable)
        std::cout << ',' << fmt_double(zeta_profile(orb.path, p).zeta_max());
      else
        std::cout << ",-";
    }
    std::cout << "\n";
  }
  if (!d.out.empty()) {
    for (const PeriodicOrbit& orb : orbits) {
      const std::string file =
          d.out + "_" + to_string(orb.branch) + ".csv";
      write_text_file(file, path_csv(orb.path));
      std::cout << "wrote " << file << "\n";
    }
  }
  return 0;
}

struct SimOpts {
  ParamOpts po;
  std::uint64_t seed = 1;
  double t0 = -0.5;
  double span = 1.0;
  double eta = 200.0;
  std::optional<double> x0;
  double level = 0.0;
  std::string out;
};

int run_simulate(const SimOpts& s) {
  const ModelParams p = resolve_params(s.po);
  SimulateOptions so;
  so.eta = s.eta;
  const double x0 = s.x0 ? *s.x0 : default_x0(p, s.t0);
  const Path path = simulate_path(p, x0, s.t0, s.t0 + s.span, s.seed, so);
  std::cout << "seed: " << s.seed << " steps: " << path.steps()
            << " dt: " << fmt6(path.dt) << " x0: " << fmt6(x0) << "\n";
  const bool whole =
      s.span >= 0.5 && std::abs(s.span - std::round(s.span)) < 1e-9;
  if (whole) {
    const CycleObservables o = cycle_observables(path, p, s.level);
    std::cout << "area: " << fmt_double(o.area) << "\n";
    if (o.crossed)
      std::cout << "crossed: yes tau0: " << fmt_double(*o.tau0)
                << " lambda0: " << fmt_double(*o.lambda0) << "\n";
    else
      std::cout << "crossed: no\n";
  }
  if (!s.out.empty()) {
    write_text_file(s.out, path_csv(path));
    std::cout << "wrote " << s.out << "\n";
  }
  return 0;
}

struct EnsOpts {
  ParamOpts po;
  long long n = 1000;
  std::uint64_t seed_base = 1;
  std::uint64_t index_offset = 0;
  double t0 = -0.5;
  double span = 1.0;
  double eta = 200.0;
  std::optional<double> x0;
  double level = 0.0;
  int threads = 0;
  bool samples = false;
  std::string out_dir;
};

json ensemble_config_echo(const ModelParams& p, const EnsembleOptions& eo) {
  json j;
  j["eps"] = p.epsilon;
  j["sigma"] = p.sigma;
  j["amp"] = p.amplitude;
  j["n"] = eo.n;
  j["seed_base"] = eo.seed_base;
  j["index_offset"] = eo.index_offset;
  j["t0"] = eo.t0;
  j["span"] = eo.span;
  j["eta"] = eo.eta;
  j["level"] = eo.crossing_level;
  if (eo.x0) j["x0"] = *eo.x0;
  return j;
}

int run_ensemble(const EnsOpts& e, const std::string& cmdline) {
  const ModelParams p = resolve_params(e.po);
  EnsembleOptions eo;
  eo.n = e.n;
  eo.seed_base = e.seed_base;
  eo.index_offset = e.index_offset;
  eo.t0 = e.t0;
  eo.span = e.span;
  eo.eta = e.eta;
  eo.x0 = e.x0;
  eo.crossing_level = e.level;
  eo.threads = e.threads;
  eo.keep_samples = e.samples;

  Manifest man;
  man.command = cmdline;
  man.config = ensemble_config_echo(p, eo);
  man.started_utc = utc_now_iso8601();

  const EnsembleSummary s = run_ensemble(p, eo);
  std::cout << "n: " << s.n << " dt: " << fmt6(s.dt) << " x0: " << fmt6(s.x0)
            << "\n";
  std::cout << "area mean: " << fmt6(s.area.moments.mean)
            << " variance: " << fmt6(s.area.moments.variance())
            << " median: " << fmt6(s.area.quantiles[3]) << "\n";
  std::cout << "crossed: " << s.crossed << " rate: " << fmt6(s.crossing_rate)
            << "\n";

  if (!e.out_dir.empty()) {
    const fs::path dir(e.out_dir);
    fs::create_directories(dir);
    emit(dir / "summary.csv", summary_csv(s), man);
    emit(dir / "summary.json", summary_json(s).dump(2) + "\n", man);
    emit(dir / "area_hist.csv", histogram_csv(s.area_hist), man);
    if (e.samples) emit(dir / "samples.csv", samples_csv(s.samples), man);
    man.finished_utc = utc_now_iso8601();
    man.write((dir / "manifest.json").string());
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
    std::cout << "digest: " << man.canonical_digest() << "\n";
  }
  return 0;
}

struct SweepOpts {
  std::string law;
  std::string axis;
  std::string grid;
  std::optional<long long> n;
  std::optional<std::uint64_t> seed_base;
  std::optional<double> eta;
  std::optional<double> c1;
  int threads = 0;
  std::optional<double> eps;
  std::optional<double> sigma;
  std::optional<double> amp;
  std::optional<double> a0;
  std::optional<double> tolerance;  // verify only
  std::optional<double> r2_min;     // verify only
  std::string out_dir;
};

void add_sweep_options(CLI::App* sub, SweepOpts& so, bool verify) {
  sub->add_option("--law", so.law, "scaling law id")->required();
  sub->add_option("--axis", so.axis, "swept parameter: eps, a0 or sigma")
      ->required();
  sub->add_option("--grid", so.grid, "values a,b,c or log:lo:hi:n");
  sub->add_option("--n", so.n, "paths per stochastic grid point");
  sub->add_option("--seed-base", so.seed_base, "root seed for the sweep");
  sub->add_option("--eta", so.eta, "steps per eps (dt = eps/eta)");
  sub->add_option("--c1", so.c1, "reference switch constant");
  sub->add_option("--threads", so.threads, "worker threads (0 = auto)");
  sub->add_option("--eps", so.eps, "base eps when not the swept axis");
  sub->add_option("--sigma", so.sigma, "base sigma when not the swept axis");
  CLI::Option* amp = sub->add_option("--amp", so.amp, "base amplitude");
  CLI::Option* a0 = sub->add_option("--a0", so.a0, "base amplitude offset");
  amp->excludes(a0);
  a0->excludes(amp);
  if (verify) {
    sub->add_option("--tolerance", so.tolerance, "allowed |fit - theory|");
    sub->add_option("--r2-min", so.r2_min, "minimum fit R^2");
  }
  sub->add_option("--out-dir", so.out_dir, "directory for CSV/JSON outputs");
}

void overlay_sweep(const CLI::App& sub, const json& cfg, SweepOpts& so) {
  overlay(sub, cfg, "law", "--law", so.law);
  overlay(sub, cfg, "axis", "--axis", so.axis);
  overlay(sub, cfg, "grid", "--grid", so.grid);
  overlay(sub, cfg, "n", "--n", so.n);
  overlay(sub, cfg, "seed_base", "--seed-base", so.seed_base);
  overlay(sub, cfg, "eta", "--eta", so.eta);
  overlay(sub, cfg, "c1", "--c1", so.c1);
  overlay(sub, cfg, "threads", "--threads", so.threads);
  overlay(sub, cfg, "eps", "--eps", so.eps);
  overlay(sub, cfg, "sigma", "--sigma", so.sigma);
  const CLI::Option* oa = sub.get_option_no_throw("--amp");
  const CLI::Option* og = sub.get_option_no_throw("--a0");
  const bool given = (oa != nullptr && oa->count() > 0) ||
                     (og != nullptr && og->count() > 0);
  if (!given) {
    if (cfg.contains("amp")) so.amp = cfg.at("amp").get<double>();
    if (cfg.contains("a0")) so.a0 = cfg.at("a0").get<double>();
  }
  overlay(sub, cfg, "tolerance", "--tolerance", so.tolerance);
  overlay(sub, cfg, "r2_min", "--r2-min", so.r2_min);
  overlay(sub, cfg, "out_dir", "--out-dir", so.out_dir);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

SweepConfig build_sweep_config(const SweepOpts& so) {
  const LawId law = law_from_string(upper(so.law));
  const SweepAxis axis = axis_from_string(so.axis);
  SweepConfig cfg = default_config(law, axis);
  if (so.eps) cfg.base.epsilon = *so.eps;
  if (so.sigma) cfg.base.sigma = *so.sigma;
  if (so.amp && so.a0)
    throw std::invalid_argument("give either --amp or --a0, not both");
  if (so.amp) cfg.base.amplitude = *so.amp;
  if (so.a0) cfg.base.amplitude = kLambdaC + *so.a0;
  if (!so.grid.empty()) cfg.grid = parse_grid(so.grid);
  if (so.n) cfg.n_paths = *so.n;
  if (so.seed_base) cfg.seed_base = *so.seed_base;
  if (so.eta) cfg.eta = *so.eta;
  if (so.c1) cfg.c1 = *so.c1;
  cfg.threads = so.threads;
  return cfg;
}

json sweep_config_echo(const SweepConfig& cfg) {
  json j;
  j["law"] = to_string(cfg.law);
  j["axis"] = to_string(cfg.axis);
  j["grid"] = cfg.grid;
  j["n_paths"] = cfg.n_paths;
  j["seed_base"] = cfg.seed_base;
  j["eta"] = cfg.eta;
  j["c1"] = cfg.c1;
  j["eps"] = cfg.base.epsilon;
  j["sigma"] = cfg.base.sigma;
  j["amp"] = cfg.base.amplitude;
  return j;
}

void print_points(const std::vector<SweepPoint>& points, SweepAxis axis) {
  std::cout << to_string(axis) << "  statistic  mc_error  regime\n";
  for (const SweepPoint& pt : points) {
    std::cout << fmt6(pt.x) << "  " << fmt6(pt.statistic) << "  "
              << fmt6(pt.mc_error) << "  " << to_string(pt.regime)
              << (pt.borderline ? " (borderline)" : "") << "\n";
  }
}

PowerLawFit fit_points(const std::vector<SweepPoint>& points) {
  std::vector<std::pair<double, double>> xy;
  std::vector<double> rel;
  bool any_mc = false;
  for (const SweepPoint& pt : points) {
    xy.emplace_back(pt.x, pt.statistic);
    if (pt.mc_error > 0.0 && pt.statistic > 0.0) {
      rel.push_back(pt.mc_error / pt.statistic);
      any_mc = true;
    } else {
      rel.push_back(0.0);
    }
  }
  return fit_power_law(xy, any_mc ? rel : std::vector<double>{});
}

int run_sweep(const SweepOpts& so, const std::string& cmdline) {
  const SweepConfig cfg = build_sweep_config(so);

  Manifest man;
  man.command = cmdline;
  man.config = sweep_config_echo(cfg);
  man.started_utc = utc_now_iso8601();

  const std::vector<SweepPoint> points = sweep(cfg);
  print_points(points, cfg.axis);
  const PowerLawFit fit = fit_points(points);
  std::cout << "fitted exponent: " << fmt6(fit.exponent) << " +/- "
            << fmt6(fit.stderr_exponent) << " r2: " << fmt6(fit.r2)
            << " theory: " << fmt6(theory_exponent(cfg.law, cfg.axis)) << "\n";

  if (!so.out_dir.empty()) {
    const fs::path dir(so.out_dir);
    fs::create_directories(dir);
    emit(dir / "sweep.csv", sweep_csv(points), man);
    man.reports.push_back({{"kind", "fit"},
                           {"exponent", fit.exponent},
                           {"stderr_exponent", fit.stderr_exponent},
                           {"r2", fit.r2}});
    man.finished_utc = utc_now_iso8601();
    man.write((dir / "manifest.json").string());
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
    std::cout << "digest: " << man.canonical_digest() << "\n";
  }
  return 0;
}

int run_verify(const SweepOpts& so, const std::string& cmdline) {
  const SweepConfig cfg = build_sweep_config(so);
  const double tol =
      so.tolerance ? *so.tolerance : default_tolerance(cfg.law, cfg.axis);
  const double r2_min = so.r2_min ? *so.r2_min : 0.95;

  Manifest man;
  man.command = cmdline;
  man.config = sweep_config_echo(cfg);
  man.config["tolerance"] = tol;
  man.config["r2_min"] = r2_min;
  man.started_utc = utc_now_iso8601();

  const ScalingReport rep = verify_scaling(cfg, tol, r2_min);
  print_points(rep.points, cfg.axis);
  std::cout << "law " << to_string(rep.law) << " axis " << to_string(rep.axis)
            << "\n";
  std::cout << "fitted exponent: " << fmt6(rep.fit.exponent) << " +/- "
            << fmt6(rep.fit.stderr_exponent) << " (theory "
            << fmt6(rep.theory) << ", tolerance " << fmt6(rep.tolerance)
            << ")\n";
  std::cout << "r2: " << fmt6(rep.fit.r2) << " (min " << fmt6(rep.r2_min)
            << ")\n";
  std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";

  if (!so.out_dir.empty()) {
    const fs::path dir(so.out_dir);
    fs::create_directories(dir);
    emit(dir / "sweep.csv", sweep_csv(rep.points), man);
    emit(dir / "report.json", report_json(rep).dump(2) + "\n", man);
    man.reports.push_back(report_json(rep));
    man.finished_utc = utc_now_iso8601();
    man.write((dir / "manifest.json").string());
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
    std::cout << "digest: " << man.canonical_digest() << "\n";
  }
  return rep.pass ? 0 : 3;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"double-well hysteresis areas and crossing statistics"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON object supplying values for options not on the "
                 "command line");

  ParamOpts classify_po;
  CLI::App* c_classify = app.add_subcommand(
      "classify", "regime case for (eps, sigma, amplitude)");
  add_param_options(c_classify, classify_po);

  DetOpts det_opts;
  CLI::App* c_det = app.add_subcommand(
      "det", "noise-free periodic orbits, their areas and sensitivity");
  add_param_options(c_det, det_opts.po);
  c_det->add_option("--eta", det_opts.eta, "steps per eps (dt = eps/eta)");
  c_det->add_flag("--zeta", det_opts.zeta, "include the zeta_max column");
  c_det->add_option("--out", det_opts.out, "CSV path prefix for the orbits");

  SimOpts sim_opts;
  CLI::App* c_sim = app.add_subcommand("simulate", "one stochastic path");
  add_param_options(c_sim, sim_opts.po);
  c_sim->add_option("--seed", sim_opts.seed, "path seed");
  c_sim->add_option("--t0", sim_opts.t0, "start time");
  c_sim->add_option("--span", sim_opts.span, "duration in periods");
  c_sim->add_option("--eta", sim_opts.eta, "steps per eps (dt = eps/eta)");
  c_sim->add_option("--x0", sim_opts.x0, "initial state (default from t0)");
  c_sim->add_option("--level", sim_opts.level, "crossing level");
  c_sim->add_option("--out", sim_opts.out, "CSV file for the path");

  EnsOpts ens_opts;
  CLI::App* c_ens = app.add_subcommand(
      "ensemble", "independent paths reduced to cycle statistics");
  add_param_options(c_ens, ens_opts.po);
  c_ens->add_option("--n", ens_opts.n, "number of paths, >= 2");
  c_ens->add_option("--seed-base", ens_opts.seed_base, "root seed");
  c_ens->add_option("--index-offset", ens_opts.index_offset,
                    "global index of the first path");
  c_ens->add_option("--t0", ens_opts.t0, "start time");
  c_ens->add_option("--span", ens_opts.span, "duration in whole periods");
  c_ens->add_option("--eta", ens_opts.eta, "steps per eps (dt = eps/eta)");
  c_ens->add_option("--x0", ens_opts.x0, "initial state (default from t0)");
  c_ens->add_option("--level", ens_opts.level, "crossing level");
  c_ens->add_option("--threads", ens_opts.threads, "worker threads (0 = auto)");
  c_ens->add_flag("--samples", ens_opts.samples, "also write per-path rows");
  c_ens->add_option("--out-dir", ens_opts.out_dir,
                    "directory for CSV/JSON outputs and the manifest");

  SweepOpts sweep_opts;
  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "evaluate a law's statistic over a parameter grid");
  add_sweep_options(c_sweep, sweep_opts, false);

  SweepOpts verify_opts;
  CLI::App* c_verify = app.add_subcommand(
      "verify", "sweep, fit the power law and judge it against theory");
  add_sweep_options(c_verify, verify_opts, true);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("hysterion");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_store.size());
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::ostringstream cmd;
  cmd << "hysterion";
  for (const std::string& a : args) cmd << ' ' << a;

  try {
    const json cfg = load_config(config_path);
    if (c_classify->parsed()) {
      overlay_params(*c_classify, cfg, classify_po);
      return run_classify(classify_po);
    }
    if (c_det->parsed()) {
      overlay_params(*c_det, cfg, det_opts.po);
      overlay(*c_det, cfg, "eta", "--eta", det_opts.eta);
      overlay(*c_det, cfg, "out", "--out", det_opts.out);
      return run_det(det_opts);
    }
    if (c_sim->parsed()) {
      overlay_params(*c_sim, cfg, sim_opts.po);
      overlay(*c_sim, cfg, "seed", "--seed", sim_opts.seed);
      overlay(*c_sim, cfg, "t0", "--t0", sim_opts.t0);
      overlay(*c_sim, cfg, "span", "--span", sim_opts.span);
      overlay(*c_sim, cfg, "eta", "--eta", sim_opts.eta);
      overlay(*c_sim, cfg, "x0", "--x0", sim_opts.x0);
      overlay(*c_sim, cfg, "level", "--level", sim_opts.level);
      overlay(*c_sim, cfg, "out", "--out", sim_opts.out);
      return run_simulate(sim_opts);
    }
    if (c_ens->parsed()) {
      overlay_params(*c_ens, cfg, ens_opts.po);
      overlay(*c_ens, cfg, "n", "--n", ens_opts.n);
      overlay(*c_ens, cfg, "seed_base", "--seed-base", ens_opts.seed_base);
      overlay(*c_ens, cfg, "index_offset", "--index-offset",
              ens_opts.index_offset);
      overlay(*c_ens, cfg, "t0", "--t0", ens_opts.t0);
      overlay(*c_ens, cfg, "span", "--span", ens_opts.span);
      overlay(*c_ens, cfg, "eta", "--eta", ens_opts.eta);
      overlay(*c_ens, cfg, "x0", "--x0", ens_opts.x0);
      overlay(*c_ens, cfg, "level", "--level", ens_opts.level);
      overlay(*c_ens, cfg, "threads", "--threads", ens_opts.threads);
      overlay(*c_ens, cfg, "samples", "--samples", ens_opts.samples);
      overlay(*c_ens, cfg, "out_dir", "--out-dir", ens_opts.out_dir);
      return run_ensemble(ens_opts, cmd.str());
    }
    if (c_sweep->parsed()) {
      overlay_sweep(*c_sweep, cfg, sweep_opts);
      return run_sweep(sweep_opts, cmd.str());
    }
    if (c_verify->parsed()) {
      overlay_sweep(*c_verify, cfg, verify_opts);
      return run_verify(verify_opts, cmd.str());
    }
    std::cerr << "error: a subcommand is required (see --help)\n";
    return 2;
  } catch (const NonFinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const StepTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BadSpan& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AmbiguousRegime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoSamples& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonPositive& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hyst

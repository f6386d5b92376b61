// rotalign: command-line driver for alignment / orientation simulations,
// parameter sweeps and pulse shaping.
//
//   rotalign simulate --preset fig1 --out out/fig1
//   rotalign sweep --preset fig2 --fit --out out/fig2
//   rotalign list-presets
//
// Configuration is layered: preset < --config file < command-line flags.
// Worker threads: ROTALIGN_WORKERS (default: hardware concurrency).

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotalign/io.hpp"
#include "rotalign/presets.hpp"
#include "rotalign/rotalign.hpp"

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using json = nlohmann::ordered_json;
using namespace rotalign;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Layered key/value configuration ("section.key").
class Config {
 public:
  void set(const std::string& key, const std::string& value) { tree_.put(key, value); }

  void load_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    pt::ptree file;
    try {
      pt::ini_parser::read_ini(in, file);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : file)
      for (const auto& [k, v] : body) set(section + "." + k, strip(v.data()));
  }

  bool has(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    return v && !v->empty();
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    return tree_.get<std::string>(key, fallback);
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_number(key, tree_.get<std::string>(key));
  }

  std::optional<double> number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return parse_number(key, tree_.get<std::string>(key));
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto v = tree_.get<std::string>(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
  }

  /// All entries, sorted, for the manifest and its hash.
  json entries() const {
    std::map<std::string, std::string> flat;
    for (const auto& [section, body] : tree_)
      for (const auto& [k, v] : body)
        if (!v.data().empty()) flat[section + "." + k] = v.data();
    json j = json::object();
    for (const auto& [k, v] : flat) j[k] = v;
    return j;
  }

 private:
  static std::string strip(std::string v) {
    if (auto pos = v.find(';'); pos != std::string::npos) v.resize(pos);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
    return v;
  }

  static double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError(key + ": '" + text + "' is not a number");
    return v;
  }

  pt::ptree tree_;
};

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  auto num = [&](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw ConfigError(key + ": bad grid '" + text + "'");
    }
  };
  std::vector<double> g;
  if (parts.size() == 4 && parts[0] == "log") {
    const double lo = num(parts[1]), hi = num(parts[2]);
    const int n = static_cast<int>(num(parts[3]));
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError(key + ": bad log grid '" + text + "'");
    for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  } else if (parts.size() == 3) {
    const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
    if (!(h > 0.0) || b < a) throw ConfigError(key + ": bad grid '" + text + "'");
    const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) g.push_back(a + static_cast<double>(i) * h);
  } else {
    std::stringstream list(text);
    for (std::string p; std::getline(list, p, ',');) g.push_back(num(p));
  }
  if (g.empty()) throw ConfigError(key + ": empty grid");
  return g;
}

struct Context {
  Config cfg;
  MoleculeTable molecules;
  RotorSpec spec;
  fs::path out;
  std::string command;
};

RotorSpec resolve_molecule(Context& ctx) {
  if (ctx.cfg.has("run.molecules_file")) {
    std::ifstream in(ctx.cfg.str("run.molecules_file", ""));
    if (!in) throw ConfigError("cannot read molecules file " + ctx.cfg.str("run.molecules_file", ""));
    try {
      ctx.molecules.load(in);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  const auto name = ctx.cfg.str("run.molecule", "CO2");
  if (!ctx.molecules.contains(name)) throw ConfigError("run.molecule: unknown molecule '" + name + "'");
  return ctx.molecules.get(name);
}

double resolve_kt(const Context& ctx) {
  if (ctx.cfg.has("ensemble.kt_over_b") && ctx.cfg.has("ensemble.temp_kelvin"))
    throw ConfigError("ensemble: give either kt_over_b or temp_kelvin, not both");
  if (auto k = ctx.cfg.number("ensemble.temp_kelvin")) return kt_over_b_from_kelvin(*k, ctx.spec);
  return ctx.cfg.number("ensemble.kt_over_b", 0.0);
}

PropagationSettings resolve_settings(const Context& ctx) {
  PropagationSettings s;
  s.tolerance = ctx.cfg.number("settings.tol", s.tolerance);
  s.sample_dt = ctx.cfg.number("settings.sample_dt", s.sample_dt / units::kRotationalPeriod) * units::kRotationalPeriod;
  s.validate();
  return s;
}

TraceOptions resolve_trace_options(const Context& ctx) {
  TraceOptions o;
  o.j_max = static_cast<int>(ctx.cfg.number("settings.jmax", resolve_kt(ctx) > 0.0 ? 128 : 64));
  if (o.j_max < 2) throw ConfigError("settings.jmax must be >= 2");
  o.d_over_b = ctx.cfg.flag("run.centrifugal", false) ? ctx.spec.d_over_b() : 0.0;
  return o;
}

json manifest_base(const Context& ctx) {
  json j;
  j["command"] = ctx.command;
  const auto entries = ctx.cfg.entries();
  j["config"] = entries;
  j["config_hash"] = io::config_hash(ctx.command + "\n" + entries.dump());
  j["molecule"] = {{"label", ctx.spec.label},
                   {"rotational_constant_b_cm", ctx.spec.rotational_constant_b},
                   {"centrifugal_constant_d_cm", ctx.spec.centrifugal_constant_d},
                   {"polarizability_anisotropy_a3", ctx.spec.polarizability_anisotropy},
                   {"dipole_moment_debye", ctx.spec.dipole_moment},
                   {"t_rot_ps", ctx.spec.rotational_period_seconds() * 1e12}};
  return j;
}

// ---------------------------------------------------------------------------

PulseProgram simulate_program(const Context& ctx) {
  const auto& c = ctx.cfg;
  const double gamma = c.number("pulse.gamma", 0.0);
  const double tau_a = c.number("pulse.tau_a", 2.0) * units::kRotationalPeriod;
  const double tau_k = c.number("pulse.tau_k", 0.0) * units::kRotationalPeriod;
  const auto truncation = truncation_from_string(c.str("pulse.truncation", "at_peak"));
  PulseSegment kick;
  if (c.has("pulse.train")) {
    const auto zetas = parse_grid("pulse.train", c.str("pulse.train", ""));
    std::vector<Impulse> kicks;
    for (std::size_t k = 0; k < zetas.size(); ++k)
      kicks.push_back({static_cast<double>(k) * units::kRotationalPeriod, zetas[k]});
    kick = PulseSegment::kick_train(kicks);
  } else {
    const double zeta = c.number("pulse.zeta", 0.0);
    kick = tau_k > 0.0 ? PulseSegment::finite_kick_from_zeta(zeta, tau_k) : PulseSegment::impulsive_kick(zeta);
  }
  return make_combined_program(gamma, tau_a, kick, truncation);
}

void write_run(const Context& ctx, const PulseProgram& program, const ThermalEnsemble& ens,
               const PropagationSettings& settings, const PostPulseResult& r, json extra) {
  io::write_trace_csv(ctx.out / "trace.csv", r.trace);
  {
    auto f = io::open_out(ctx.out / "program.txt");
    write_program(f, program);
  }
  auto m = manifest_base(ctx);
  for (auto& [k, v] : extra.items()) m[k] = v;
  m["j_max_used"] = r.j_max_used;
  m["trace_file"] = "trace.csv";
  io::write_trace_sidecar(ctx.out / "trace.json", r.trace, program, ens, settings, r.maximum, m);
  std::cout << to_string(r.trace.observable_kind) << " max " << r.maximum.value << " at t/T_rot "
            << r.maximum.t_max / units::kRotationalPeriod << "\n";
}

int cmd_simulate(Context& ctx) {
  const auto program = simulate_program(ctx);
  const auto settings = resolve_settings(ctx);
  const auto opt = resolve_trace_options(ctx);
  const auto ens = thermal_weights(resolve_kt(ctx), ctx.spec, -1, ctx.cfg.flag("ensemble.fold_m", false));
  const auto r = analyze_run(ens, program, settings, program.span(), postpulse_window(program),
                             field_free_from(program), ObservableKind::Alignment, opt);
  json extra;
  if (ens.members.size() == 1 && ens.members[0].m == 0 && ens.members[0].j == 0) {
    const auto psi = free_evolve(r.free.states[0], r.maximum.t_max - r.free.time, opt.d_over_b);
    const auto proj = project_on_target(psi, 1, std::min(40, psi.basis.j_max / 2 + 1));
    extra["target_projection"] = {{"best_n", proj.best_n}, {"overlap", proj.overlap}, {"leakage", proj.leakage}};
  }
  write_run(ctx, program, ens, settings, r, extra);
  return 0;
}

int cmd_orient(Context& ctx) {
  const auto& c = ctx.cfg;
  const double tau_k = c.has("pulse.tau_k") ? c.number("pulse.tau_k", 0.0) * units::kRotationalPeriod
                                            : reduced_time_from_fs(c.number("orient.tau_k_ps", 1.0) * 1e3, ctx.spec);
  const double tau_a = c.has("pulse.tau_a") ? c.number("pulse.tau_a", 0.0) * units::kRotationalPeriod
                                            : reduced_time_from_fs(c.number("orient.tau_a_ps", 18.0) * 1e3, ctx.spec);
  if (ctx.spec.dipole_moment == 0.0) throw ConfigError("orient: molecule '" + ctx.spec.label + "' has no dipole");
  const auto program =
      make_orientation_program(omega_mu_from_field(c.number("orient.hcp_kv_cm", 140.0), ctx.spec), tau_k,
                               omega_mu_from_field(c.number("orient.ramp_kv_cm", 2.0), ctx.spec), tau_a);
  const auto settings = resolve_settings(ctx);
  const auto opt = resolve_trace_options(ctx);
  const auto ens = thermal_weights(resolve_kt(ctx), ctx.spec, -1, false);
  const auto r = analyze_run(ens, program, settings, program.span(), postpulse_window(program),
                             field_free_from(program), ObservableKind::Orientation, opt);
  write_run(ctx, program, ens, settings, r, json::object());
  return 0;
}

SweepOptions resolve_sweep_options(const Context& ctx) {
  SweepOptions o;
  o.settings = resolve_settings(ctx);
  const auto t = resolve_trace_options(ctx);
  o.j_max = t.j_max;
  o.d_over_b = t.d_over_b;
  o.fold_m = ctx.cfg.flag("ensemble.fold_m", false);
  return o;
}

int run_zeta_gamma(Context& ctx, bool force_fit) {
  const auto& c = ctx.cfg;
  const auto zg = parse_grid("sweep.zeta_grid", c.str("sweep.zeta_grid", "0:25:1"));
  const auto gg = parse_grid("sweep.gamma_grid", c.str("sweep.gamma_grid", "0:400:10"));
  const auto mode = c.has("pulse.tau_a") ? RampMode::FixedTau : RampMode::Adiabatic;
  const double tau = c.number("pulse.tau_a", 2.0) * units::kRotationalPeriod;
  const auto contour = sweep_zeta_gamma(zg, gg, resolve_kt(ctx), ctx.spec, mode, tau, resolve_sweep_options(ctx));
  std::vector<FitResult> fits;
  json summary;
  if (force_fit || c.flag("sweep.fit", false)) {
    const double lo = c.number("sweep.fit_zeta_min", 5.0), hi = c.number("sweep.fit_zeta_max", 22.0);
    auto line = optimal_gamma_line(contour, lo, hi);
    // The existence threshold uses every row of the grid.
    const auto all = optimal_gamma_line(contour, zg.front(), zg.back());
    line.threshold = all.threshold;
    fits.push_back(line);
    fits.push_back(fit_saturation_curve(optimum_alignments(contour, lo, hi)));
    summary["slope"] = line.parameters[0];
    summary["intercept"] = line.parameters[1];
    if (line.threshold) summary["threshold_zeta"] = *line.threshold;
    summary["a"] = fits[1].parameters[0];
    summary["b"] = fits[1].parameters[1];
    summary["c"] = fits[1].parameters[2];
    std::cout << "gamma_opt = " << line.parameters[0] << " zeta + " << line.parameters[1] << "\n";
  }
  auto m = manifest_base(ctx);
  m["summary"] = summary;
  io::write_contour(ctx.out, "contour", contour, fits, m);
  std::cout << "contour " << zg.size() << " x " << gg.size() << " written to " << ctx.out.string() << "\n";
  return contour.failures.empty() ? 0 : 4;
}

int cmd_sweep(Context& ctx, bool fit_flag) {
  const auto kind = ctx.cfg.str("sweep.kind", "zeta_gamma");
  if (kind == "zeta_gamma") return run_zeta_gamma(ctx, fit_flag);
  if (kind != "tau_gamma") throw ConfigError("sweep.kind: expected zeta_gamma or tau_gamma, got '" + kind + "'");
  const auto& c = ctx.cfg;
  auto tg = parse_grid("sweep.tau_grid", c.str("sweep.tau_grid", "log:0.05:2:25"));
  for (auto& t : tg) t *= units::kRotationalPeriod;
  const auto gg = parse_grid("sweep.gamma_grid", c.str("sweep.gamma_grid", "0:400:10"));
  const auto contour =
      sweep_tau_gamma(tg, gg, c.number("pulse.zeta", 11.0), resolve_kt(ctx), ctx.spec, resolve_sweep_options(ctx));
  auto m = manifest_base(ctx);
  io::write_contour(ctx.out, "contour", contour, {}, m);
  std::cout << "contour " << tg.size() << " x " << gg.size() << " written to " << ctx.out.string() << "\n";
  return contour.failures.empty() ? 0 : 4;
}

int cmd_shape(Context& ctx) {
  const auto& c = ctx.cfg;
  ShaperConfig s;
  s.spec = ctx.spec;
  s.ramp_fwhm_fs = c.has("pulse.tau_a") ? fs_from_reduced_time(c.number("pulse.tau_a", 0.0) * units::kRotationalPeriod, ctx.spec)
                                         : c.number("shape.tau_a_fs", 10000.0);
  s.kick_fwhm_fs = c.has("pulse.tau_k") ? fs_from_reduced_time(c.number("pulse.tau_k", 0.0) * units::kRotationalPeriod, ctx.spec)
                                         : c.number("shape.tau_k_fs", 200.0);
  s.ramp_intensity = c.has("pulse.gamma") ? intensity_from_gamma(c.number("pulse.gamma", 0.0), ctx.spec)
                                          : c.number("shape.ia", 2.5);
  if (c.has("pulse.zeta")) {
    const double per_unit = zeta_from_kick(1.0, s.kick_fwhm_fs, EnvelopeShape::Gaussian, ctx.spec);
    s.kick_intensity = c.number("pulse.zeta", 0.0) / per_unit;
  } else {
    s.kick_intensity = c.number("shape.ik", 25.0);
  }
  s.pixel_count = static_cast<int>(c.number("shape.pixels", 640));
  s.window_factor = c.number("shape.window_factor", 4.0);
  s.grid.samples = static_cast<std::size_t>(c.number("shape.samples", 1048576));
  s.grid.half_span_fs = c.number("shape.half_span_fs", 40000.0);
  s.spot_diameter_um = c.number("shape.spot_um", 20.0);
  s.energy_budget_mj = c.number("shape.budget_mj", 10.0);
  s.centrifugal = c.flag("run.centrifugal", true);
  s.kt_over_b = resolve_kt(ctx);
  s.fold_m = c.flag("ensemble.fold_m", false);
  s.settings = resolve_settings(ctx);
  s.j_max = resolve_trace_options(ctx).j_max;
  const auto r = run_shaper_pipeline(s);

  auto m = manifest_base(ctx);
  m["intensities_tw_cm2"] = {{"ramp", s.ramp_intensity}, {"kick", s.kick_intensity}};
  m["durations_fs"] = {{"ramp", s.ramp_fwhm_fs}, {"kick", s.kick_fwhm_fs}};
  m["zeta"] = zeta_from_kick(s.kick_intensity, s.kick_fwhm_fs, EnvelopeShape::Gaussian, ctx.spec);
  m["gamma"] = gamma_from_intensity(s.ramp_intensity, ctx.spec);
  m["summary"] = {{"max_value", r.maximum.value},
                  {"t_max_over_Trot", r.maximum.t_max / units::kRotationalPeriod},
                  {"j_max_used", r.j_max_used}};
  m["feasibility"] = {{"feasible", r.feasibility.feasible},
                      {"required_energy_mj", r.feasibility.required_energy_mj},
                      {"budget_mj", r.feasibility.budget_mj},
                      {"spot_diameter_um", s.spot_diameter_um}};
  json bad = json::array();
  for (const auto& w : r.feasibility.offending) bad.push_back({w.omega_lo, w.omega_hi});
  m["feasibility"]["offending_rad_per_fs"] = bad;
  const auto stride = static_cast<std::size_t>(c.number("shape.field_stride", 16));
  m["field_file"] = "field.csv";
  m["field_stride"] = stride;
  io::write_spectral(ctx.out, "spectrum_target", r.spectrum);
  io::write_spectral(ctx.out, "spectrum_shaped", r.shaped);
  io::write_time_field(ctx.out / "field.csv", r.field, stride);
  io::write_json(ctx.out / "shape.json", m);
  std::cout << "max <cos^2> " << r.maximum.value << " at t/T_rot " << r.maximum.t_max / units::kRotationalPeriod
            << "; required input energy " << r.feasibility.required_energy_mj << " mJ\n";
  return 0;
}

int cmd_list_presets() {
  for (const auto& p : figure_presets())
    std::cout << p.name << " (" << p.command << "): " << p.description << "\n    expected: " << p.headline << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotational alignment and orientation by adiabatic ramps and kicks"};
  app.require_subcommand(1);

  struct Flags {
    std::string preset, molecule, config, out = "out";
    std::optional<double> gamma, zeta, tau_a, tau_k, kelvin, kt;
    std::optional<int> jmax;
    std::optional<double> tol;
    bool fit = false;
  } f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", f.preset, "figure preset (see list-presets)");
    sub->add_option("--config", f.config, "key = value configuration file with [sections]");
    sub->add_option("--molecule", f.molecule, "molecule preset name");
    sub->add_option("--gamma", f.gamma, "ramp strength gamma");
    sub->add_option("--zeta", f.zeta, "kick strength zeta");
    sub->add_option("--tau-a", f.tau_a, "ramp FWHM in units of T_rot");
    sub->add_option("--tau-k", f.tau_k, "kick FWHM in units of T_rot (0: impulsive)");
    auto* k = sub->add_option("--temp-kelvin", f.kelvin, "temperature in K");
    sub->add_option("--kt-over-b", f.kt, "normalized temperature kT/B")->excludes(k);
    sub->add_option("--jmax", f.jmax, "initial basis cutoff J_max");
    sub->add_option("--tol", f.tol, "integrator tolerance");
    sub->add_option("--out", f.out, "output directory");
  };
  auto* simulate = app.add_subcommand("simulate", "alignment trace for a ramp + kick program");
  auto* sweep = app.add_subcommand("sweep", "contour of max alignment over a parameter grid");
  auto* optimline = app.add_subcommand("optimline", "(zeta, gamma) sweep with optimum-line and saturation fits");
  auto* shape = app.add_subcommand("shape", "spectral shaping pipeline and complete-model simulation");
  auto* orient = app.add_subcommand("orient", "orientation by a half-cycle pulse on a field ramp");
  auto* list = app.add_subcommand("list-presets", "list figure presets");
  for (auto* s : {simulate, sweep, optimline, shape, orient}) add_common(s);
  sweep->add_flag("--fit", f.fit, "fit the optimum line and saturation curve");
  (void)list;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Context ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    if (ctx.command == "list-presets") return cmd_list_presets();
    if (!f.preset.empty()) {
      const auto& p = find_preset(f.preset);
      const bool compatible = p.command == ctx.command || (ctx.command == "optimline" && p.name == "fig2");
      if (!compatible) throw ConfigError("preset '" + p.name + "' belongs to the '" + p.command + "' command");
      ctx.cfg.set("run.preset", p.name);
      for (const auto& [k, v] : p.entries) ctx.cfg.set(k, v);
    }
    if (!f.config.empty()) ctx.cfg.load_file(f.config);
    auto put = [&](const std::string& key, const std::optional<double>& v) {
      if (v) ctx.cfg.set(key, io::num(*v));
    };
    if (!f.molecule.empty()) ctx.cfg.set("run.molecule", f.molecule);
    put("pulse.gamma", f.gamma);
    put("pulse.zeta", f.zeta);
    put("pulse.tau_a", f.tau_a);
    put("pulse.tau_k", f.tau_k);
    if (f.kelvin) {
      ctx.cfg.set("ensemble.temp_kelvin", io::num(*f.kelvin));
      ctx.cfg.set("ensemble.kt_over_b", "");
    }
    if (f.kt) {
      ctx.cfg.set("ensemble.kt_over_b", io::num(*f.kt));
      ctx.cfg.set("ensemble.temp_kelvin", "");
    }
    if (f.jmax) ctx.cfg.set("settings.jmax", std::to_string(*f.jmax));
    put("settings.tol", f.tol);
    if (f.fit) ctx.cfg.set("sweep.fit", "true");
    ctx.out = f.out;
    ctx.spec = resolve_molecule(ctx);

    if (ctx.command == "simulate") return cmd_simulate(ctx);
    if (ctx.command == "sweep") return cmd_sweep(ctx, f.fit);
    if (ctx.command == "optimline") {
      if (ctx.cfg.str("sweep.kind", "zeta_gamma") != "zeta_gamma")
        throw ConfigError("optimline needs a zeta_gamma sweep");
      return run_zeta_gamma(ctx, true);
    }
    if (ctx.command == "shape") return cmd_shape(ctx);
    if (ctx.command == "orient") return cmd_orient(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const IntegrationFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

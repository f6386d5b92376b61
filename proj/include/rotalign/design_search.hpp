#pragma once

// Parameter sweeps over (zeta, gamma) and (tau_a, gamma), the optimum-gamma
// line and the saturation-curve fit.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotalign/observables.hpp"
#include "rotalign/parallel.hpp"
#include "rotalign/propagator.hpp"
#include "rotalign/pulses.hpp"

namespace rotalign {

enum class RampMode { Adiabatic, FixedTau };

/// Ramp FWHM used by RampMode::Adiabatic.
inline constexpr double kAdiabaticRampFwhm = 2.0 * units::kRotationalPeriod;

struct Axis {
  std::string name;
  std::string units;
  std::vector<double> values;
};

struct CellFailure {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

/// values(i, j) = log10(1 - max alignment) at (axis1[i], axis2[j]).
struct ContourData {
  Axis axis1;
  Axis axis2;
  Eigen::MatrixXd values;
  Eigen::MatrixXd t_max;
  double kt_over_b = 0.0;
  std::map<std::string, double> fixed;
  std::string model;  // "impulsive" or "finite"
  std::vector<CellFailure> failures;

  double alignment(std::size_t i, std::size_t j) const { return 1.0 - std::pow(10.0, values(i, j)); }
  bool failed(std::size_t i, std::size_t j) const { return std::isnan(values(i, j)); }
};

struct SweepOptions {
  PropagationSettings settings;
  int j_max = 64;
  double d_over_b = 0.0;
  bool fold_m = false;  // members (J, m) and (J, -m) both propagated
  unsigned workers = 0;
  double edge_population = 1e-10;
  int j_max_limit = 512;
};

namespace detail {

inline void check_grid(const std::vector<double>& g, const char* what) {
  if (g.empty()) throw std::domain_error(std::string(what) + ": empty grid");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw std::domain_error(std::string(what) + ": grid not ascending");
}

inline double edge_population(const Wavepacket& w) {
  double e = 0.0;
  for (int j = std::max(w.basis.j_min(), w.basis.j_max - 3); j <= w.basis.j_max; ++j) e += w.population(j);
  return e;
}

// One gamma (row of cells sharing a ramp): the ramp is integrated once per
// member and each zeta applies its kick at the ramp peak.
class RampRow {
 public:
  RampRow(const ThermalEnsemble& ens, double gamma, double tau, const SweepOptions& opt)
      : ens_(ens), gamma_(gamma), tau_(tau), opt_(opt) {
    for (std::size_t i = 0; i < ens.members.size(); ++i)
      if (ens.members[i].weight > 0.0) active_.push_back(i);
    states_.resize(active_.size());
  }

  TraceMaximum cell(double zeta) {
    FreeEnsemble free;
    free.time = 0.0;
    free.d_over_b = opt_.d_over_b;
    for (std::size_t k = 0; k < active_.size(); ++k) {
      const auto& m = ens_.members[active_[k]];
      int j_max = states_[k] ? states_[k]->basis.j_max : std::max(opt_.j_max, m.j + 16);
      for (;;) {
        if (!states_[k] || states_[k]->basis.j_max != j_max) states_[k] = ramp_state(m, j_max);
        auto kicked = apply_impulsive_kick(*states_[k], zeta);
        if (edge_population(kicked) <= opt_.edge_population || j_max >= opt_.j_max_limit) {
          free.states.push_back(std::move(kicked));
          break;
        }
        j_max = std::min(2 * j_max, opt_.j_max_limit);
      }
      free.weights.push_back(m.weight);
    }
    return free.maximize({0.0, units::kRotationalPeriod}, opt_.settings.sample_dt);
  }

 private:
  Wavepacket ramp_state(const EnsembleMember& m, int j_max) const {
    auto psi = Wavepacket::basis_state(BasisSpec{j_max, m.m}, m.j);
    if (gamma_ == 0.0) return psi;
    PulseProgram ramp;
    ramp.segments.push_back(PulseSegment::adiabatic_ramp(gamma_, tau_, 0.0, Truncation::AtPeak));
    ramp.t_start = ramp.segments[0].support().start;
    ramp.t_end = 0.0;
    return propagate_to(psi, ramp, opt_.settings, ramp.t_start, 0.0, opt_.d_over_b);
  }

  const ThermalEnsemble& ens_;
  double gamma_;
  double tau_;
  const SweepOptions& opt_;
  std::vector<std::size_t> active_;
  std::vector<std::optional<Wavepacket>> states_;
};

// Rows are (gamma, tau) pairs; row_cells(r) returns the zeta values for row r.
template <typename RowSpec>
void run_rows(const std::vector<RowSpec>& rows, const ThermalEnsemble& ens, const SweepOptions& opt,
              ContourData& out) {
  std::vector<std::vector<std::pair<std::size_t, TraceMaximum>>> results(rows.size());
  std::vector<std::vector<CellFailure>> failures(rows.size());
  parallel_for(
      rows.size(),
      [&](std::size_t r) {
        const auto& spec = rows[r];
        try {
          RampRow row(ens, spec.gamma, spec.tau, opt);
          for (const auto& [cell, zeta] : spec.cells) {
            try {
              results[r].push_back({cell, row.cell(zeta)});
            } catch (const std::exception& e) {
              failures[r].push_back({0, cell, e.what()});
            }
          }
        } catch (const std::exception& e) {
          for (const auto& [cell, zeta] : spec.cells) failures[r].push_back({0, cell, e.what()});
        }
      },
      opt.workers ? opt.workers : worker_count());
  const auto cols = static_cast<std::size_t>(out.values.cols());
  std::size_t ok = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [cell, m] : results[r]) {
      out.values(cell / cols, cell % cols) = std::log10(1.0 - m.value);
      out.t_max(cell / cols, cell % cols) = m.t_max;
      ++ok;
    }
    for (auto f : failures[r]) {
      const std::size_t cell = f.col;
      f.row = cell / cols;
      f.col = cell % cols;
      out.failures.push_back(std::move(f));
    }
  }
  if (ok == 0) throw IntegrationFailure("sweep: every cell failed");
}

struct RowSpec {
  double gamma;
  double tau;
  std::vector<std::pair<std::size_t, double>> cells;  // (flat index, zeta)
};

}  // namespace detail

/// Max post-pulse alignment over a (zeta, gamma) grid: impulsive kick zeta at
/// the peak of a ramp of strength gamma truncated at the kick.
inline ContourData sweep_zeta_gamma(const std::vector<double>& zeta_grid, const std::vector<double>& gamma_grid,
                                    double kt_over_b, const RotorSpec& spec, RampMode mode = RampMode::Adiabatic,
                                    double tau_a = kAdiabaticRampFwhm, const SweepOptions& opt = {}) {
  detail::check_grid(zeta_grid, "sweep_zeta_gamma");
  detail::check_grid(gamma_grid, "sweep_zeta_gamma");
  for (double z : zeta_grid)
    if (z < 0.0) throw std::domain_error("sweep_zeta_gamma: zeta must be >= 0");
  if (gamma_grid.front() < 0.0) throw std::domain_error("sweep_zeta_gamma: gamma must be >= 0");
  const double tau = mode == RampMode::Adiabatic ? kAdiabaticRampFwhm : tau_a;
  if (!(tau > 0.0)) throw std::domain_error("sweep_zeta_gamma: tau_a must be > 0");
  const auto ens = thermal_weights(kt_over_b, spec, -1, opt.fold_m);

  ContourData out;
  out.axis1 = {"zeta", "dimensionless", zeta_grid};
  out.axis2 = {"gamma", "dimensionless", gamma_grid};
  const auto n1 = zeta_grid.size(), n2 = gamma_grid.size();
  out.values = Eigen::MatrixXd::Constant(n1, n2, std::numeric_limits<double>::quiet_NaN());
  out.t_max = out.values;
  out.kt_over_b = kt_over_b;
  out.fixed["tau_a"] = tau;
  out.model = "impulsive";
  std::vector<detail::RowSpec> rows;
  for (std::size_t j = 0; j < n2; ++j) {
    detail::RowSpec r{gamma_grid[j], tau, {}};
    for (std::size_t i = 0; i < n1; ++i) r.cells.push_back({i * n2 + j, zeta_grid[i]});
    rows.push_back(std::move(r));
  }
  detail::run_rows(rows, ens, opt, out);
  return out;
}

/// Max post-pulse alignment over a (tau_a, gamma) grid at fixed zeta.
inline ContourData sweep_tau_gamma(const std::vector<double>& tau_grid, const std::vector<double>& gamma_grid,
                                   double zeta, double kt_over_b, const RotorSpec& spec,
                                   const SweepOptions& opt = {}) {
  detail::check_grid(tau_grid, "sweep_tau_gamma");
  detail::check_grid(gamma_grid, "sweep_tau_gamma");
  if (!(tau_grid.front() > 0.0)) throw std::domain_error("sweep_tau_gamma: tau_a must be > 0");
  if (gamma_grid.front() < 0.0) throw std::domain_error("sweep_tau_gamma: gamma must be >= 0");
  if (zeta < 0.0) throw std::domain_error("sweep_tau_gamma: zeta must be >= 0");
  const auto ens = thermal_weights(kt_over_b, spec, -1, opt.fold_m);

  ContourData out;
  out.axis1 = {"tau_a", "T_rot", {}};
  for (double t : tau_grid) out.axis1.values.push_back(t / units::kRotationalPeriod);
  out.axis2 = {"gamma", "dimensionless", gamma_grid};
  const auto n1 = tau_grid.size(), n2 = gamma_grid.size();
  out.values = Eigen::MatrixXd::Constant(n1, n2, std::numeric_limits<double>::quiet_NaN());
  out.t_max = out.values;
  out.kt_over_b = kt_over_b;
  out.fixed["zeta"] = zeta;
  out.model = "impulsive";
  std::vector<detail::RowSpec> rows;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) rows.push_back({gamma_grid[j], tau_grid[i], {{i * n2 + j, zeta}}});
  detail::run_rows(rows, ens, opt, out);
  return out;
}

// ---------------------------------------------------------------------------
// Fits

enum class FitModel { Line, SaturationExponential };

inline std::string to_string(FitModel m) { return m == FitModel::Line ? "line" : "saturation_exponential"; }

struct FitResult {
  FitModel model = FitModel::Line;
  std::vector<double> parameters;  // (slope, intercept) or (a, b, c)
  double residual_rms = 0.0;
  std::string fit_range;
  std::vector<std::pair<double, double>> points;  // data used by the fit
  std::vector<std::string> warnings;
  std::optional<double> threshold;  // smallest zeta with an interior optimum (line fits)
};

/// Least squares line y = slope x + intercept (normal equations).
inline FitResult fit_line(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw std::domain_error("fit_line: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 1e-12 * n * sxx)) throw std::domain_error("fit_line: degenerate abscissae");
  FitResult f;
  f.model = FitModel::Line;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / n;
  f.parameters = {slope, intercept};
  double ss = 0.0;
  for (auto [x, y] : pts) ss += std::pow(y - slope * x - intercept, 2);
  f.residual_rms = std::sqrt(ss / n);
  f.points = pts;
  f.fit_range = "x in [" + std::to_string(pts.front().first) + ", " + std::to_string(pts.back().first) + "]";
  return f;
}

namespace detail {

// Vertex of the parabola through three points (x0 < x1 < x2).
inline double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d0 = (y1 - y0) / (x1 - x0), d1 = (y2 - y1) / (x2 - x1);
  const double a = (d1 - d0) / (x2 - x0);
  if (a == 0.0) return x1;
  return std::clamp(0.5 * (x0 + x1) - d0 / (2.0 * a), x0, x2);
}

// First interior local maximum of the alignment (minimum of the stored
// log10(1 - max)) that also beats the strongest ramp of the grid, if any.
// Later local maxima are ripples of a not fully adiabatic ramp.
inline std::optional<std::size_t> interior_optimum(const ContourData& c, std::size_t i) {
  const auto n = static_cast<std::size_t>(c.values.cols());
  const double last = c.values(i, n - 1);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double v = c.values(i, j), l = c.values(i, j - 1), r = c.values(i, j + 1);
    if (std::isnan(v) || std::isnan(l) || std::isnan(r)) continue;
    if (v <= l && v < r) return v < last ? std::optional<std::size_t>(j) : std::nullopt;
  }
  return std::nullopt;
}

// Alignment margin of the first interior local maximum over the last column.
inline std::optional<double> optimum_margin(const ContourData& c, std::size_t i) {
  const auto n = static_cast<std::size_t>(c.values.cols());
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double v = c.values(i, j), l = c.values(i, j - 1), r = c.values(i, j + 1);
    if (std::isnan(v) || std::isnan(l) || std::isnan(r)) continue;
    if (v <= l && v < r) return c.alignment(i, j) - c.alignment(i, n - 1);
  }
  return std::nullopt;
}

}  // namespace detail

/// Per-zeta optimum gamma (interior maximum refined by a parabola through the
/// three best cells), then a least-squares line over zeta in [zeta_min, zeta_max].
/// The threshold is the zeta above which every row has an interior optimum,
/// interpolated where the optimum margin crosses zero.
inline FitResult optimal_gamma_line(const ContourData& c, double zeta_min = 3.8,
                                    double zeta_max = std::numeric_limits<double>::infinity()) {
  const auto& z = c.axis1.values;
  const auto& g = c.axis2.values;
  if (g.size() < 3) throw std::domain_error("optimal_gamma_line: need at least three gamma values");
  std::vector<std::pair<double, double>> pts;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < zeta_min - 1e-12 || z[i] > zeta_max + 1e-12) continue;
    const auto j = detail::interior_optimum(c, i);
    if (!j) {
      warnings.push_back("no interior optimum at zeta=" + std::to_string(z[i]));
      continue;
    }
    const double v = detail::parabola_vertex(g[*j - 1], c.values(i, *j - 1), g[*j], c.values(i, *j), g[*j + 1],
                                             c.values(i, *j + 1));
    pts.push_back({z[i], v});
  }
  if (pts.size() < 2)
    throw std::domain_error("optimal_gamma_line: fewer than two zeta values with an interior optimum");
  auto f = fit_line(pts);
  f.warnings = std::move(warnings);
  std::optional<std::size_t> first;
  for (std::size_t i = z.size(); i-- > 0;) {
    if (!detail::interior_optimum(c, i)) break;
    first = i;
  }
  if (first) {
    if (*first == 0) {
      f.threshold = z[0];
    } else {
      const auto below = detail::optimum_margin(c, *first - 1);
      const auto above = detail::optimum_margin(c, *first);
      if (below && above && *above > *below)
        f.threshold = z[*first - 1] + (z[*first] - z[*first - 1]) * (-*below) / (*above - *below);
      else
        f.threshold = 0.5 * (z[*first - 1] + z[*first]);
    }
  }
  f.fit_range = "zeta in [" + std::to_string(pts.front().first) + ", " + std::to_string(pts.back().first) + "]";
  return f;
}

/// Fits 1 - v = a exp(-b sqrt(zeta) + c zeta) by linear regression of
/// log(1 - v) on (1, sqrt(zeta), zeta). With include_linear = false, c = 0.
inline FitResult fit_saturation_curve(const std::vector<std::pair<double, double>>& pts,
                                      bool include_linear = true) {
  const int p = include_linear ? 3 : 2;
  if (pts.size() < 4) throw std::domain_error("fit_saturation_curve: need at least four points");
  Eigen::MatrixXd x(pts.size(), p);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [zeta, v] = pts[i];
    if (!(v < 1.0) || zeta < 0.0) throw std::domain_error("fit_saturation_curve: need zeta >= 0 and value < 1");
    x(i, 0) = 1.0;
    x(i, 1) = std::sqrt(zeta);
    if (include_linear) x(i, 2) = zeta;
    y[i] = std::log(1.0 - v);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) throw std::domain_error("fit_saturation_curve: degenerate design matrix");
  const Eigen::VectorXd beta = qr.solve(y);
  FitResult f;
  f.model = FitModel::SaturationExponential;
  f.parameters = {std::exp(beta[0]), -beta[1], include_linear ? beta[2] : 0.0};
  f.residual_rms = std::sqrt((x * beta - y).squaredNorm() / static_cast<double>(pts.size()));
  f.points = pts;
  f.fit_range = "zeta in [" + std::to_string(pts.front().first) + ", " + std::to_string(pts.back().first) + "]";
  return f;
}

/// Points (zeta, alignment) along the optimum line: the best cell per row.
inline std::vector<std::pair<double, double>> optimum_alignments(const ContourData& c, double zeta_min,
                                                                 double zeta_max) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < c.axis1.values.size(); ++i) {
    const double z = c.axis1.values[i];
    if (z < zeta_min - 1e-12 || z > zeta_max + 1e-12) continue;
    double best = -1.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(c.values.cols()); ++j)
      if (!c.failed(i, j)) best = std::max(best, c.alignment(i, j));
    if (best >= 0.0) pts.push_back({z, best});
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Kick trains

struct KickTrainReport {
  std::vector<double> zetas;
  double prescribed_gamma = 0.0;
  double prescribed_alignment = 0.0;
  std::vector<double> scan_gammas;
  std::vector<double> scan_alignments;
  double best_scan_alignment = 0.0;
  bool in_top_decile = false;
};

/// gamma_opt = 7 * sum(zeta) + 21.
inline double prescribed_train_gamma(const std::vector<double>& zetas) {
  double s = 0.0;
  for (double z : zetas) s += z;
  return 7.0 * s + 21.0;
}

/// Max post-pulse alignment for kicks at t = k T_rot (k = 0, 1, ...) on a ramp
/// of strength gamma truncated at the first kick.
inline double kick_train_alignment(const std::vector<double>& zetas, double gamma, const ThermalEnsemble& ens,
                                   const SweepOptions& opt = {}) {
  if (zetas.empty()) throw std::domain_error("kick train: empty train");
  std::vector<Impulse> kicks;
  for (std::size_t k = 0; k < zetas.size(); ++k)
    kicks.push_back({static_cast<double>(k) * units::kRotationalPeriod, zetas[k]});
  const auto program = make_combined_program(gamma, kAdiabaticRampFwhm, PulseSegment::kick_train(kicks));
  TraceOptions t;
  t.j_max = opt.j_max;
  t.d_over_b = opt.d_over_b;
  t.workers = opt.workers;
  t.edge_population = opt.edge_population;
  t.j_max_limit = opt.j_max_limit;
  return postpulse_maximum(ens, program, opt.settings, ObservableKind::Alignment, t).maximum.value;
}

/// Compares the prescription gamma = 7 sum(zeta) + 21 against a local scan
/// gamma in prescription * [0.5, 1.5].
inline KickTrainReport kick_train_check(const std::vector<double>& zetas, double kt_over_b, const RotorSpec& spec,
                                        const SweepOptions& opt = {}, int scan_points = 11) {
  if (zetas.empty()) throw std::domain_error("kick_train_check: empty train");
  if (scan_points < 2) throw std::domain_error("kick_train_check: need at least two scan points");
  const auto ens = thermal_weights(kt_over_b, spec, -1, opt.fold_m);
  KickTrainReport r;
  r.zetas = zetas;
  r.prescribed_gamma = prescribed_train_gamma(zetas);
  r.prescribed_alignment = kick_train_alignment(zetas, r.prescribed_gamma, ens, opt);
  for (int k = 0; k < scan_points; ++k) {
    const double g = r.prescribed_gamma * (0.5 + static_cast<double>(k) / (scan_points - 1));
    r.scan_gammas.push_back(g);
    r.scan_alignments.push_back(kick_train_alignment(zetas, g, ens, opt));
  }
  auto sorted = r.scan_alignments;
  std::sort(sorted.begin(), sorted.end());
  r.best_scan_alignment = sorted.back();
  const auto decile = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(sorted.size() - 1)));
  r.in_top_decile = r.prescribed_alignment >= sorted[decile];
  return r;
}

}  // namespace rotalign

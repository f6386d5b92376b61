#pragma once

// Spectral-domain synthesis of the ramp + kick field from a transform-limited
// input pulse: target envelope, Fourier decomposition, SLM pixelization,
// reconstruction and the input energy budget.
//
// Envelopes are complex, carrier removed, in units of sqrt(TW/cm^2) so that
// |E(t)|^2 is the intensity. With E(t) = (1/2pi) int dw A(w) exp(i(wt + phi(w))),
// the spectrum is A exp(i phi) = int dt E(t) exp(-i w t).

#include <fftw3.h>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotalign/observables.hpp"
#include "rotalign/pulses.hpp"
#include "rotalign/rotor_core.hpp"

namespace rotalign {

struct TimeField {
  double t0_fs = 0.0;  // time of sample 0
  double dt_fs = 1.0;
  std::vector<Complex> envelope;
  double carrier_nm = 800.0;

  std::size_t size() const { return envelope.size(); }
  double time(std::size_t n) const { return t0_fs + static_cast<double>(n) * dt_fs; }
  double intensity(std::size_t n) const { return std::norm(envelope[n]); }

  /// Time-integrated intensity (TW/cm^2 fs).
  double fluence() const {
    double s = 0.0;
    for (const auto& e : envelope) s += std::norm(e);
    return s * dt_fs;
  }
};

struct SpectralWindow {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
};

struct SpectralField {
  double omega0 = 0.0;  // rad/fs, relative to the carrier
  double domega = 1.0;
  std::vector<double> amplitude;
  std::vector<double> phase;  // unwrapped
  double t0_fs = 0.0;         // time origin of the transform
  double carrier_nm = 800.0;
  std::optional<int> pixel_count;
  std::optional<SpectralWindow> window;

  std::size_t size() const { return amplitude.size(); }
  double omega(std::size_t k) const { return omega0 + static_cast<double>(k) * domega; }
  /// Window covering every grid cell.
  SpectralWindow full_window() const {
    return {omega0 - 0.5 * domega, omega(size() - 1) + 0.5 * domega};
  }
  /// (1/2pi) int |A|^2 dw, equal to the time-domain fluence.
  double energy() const {
    double s = 0.0;
    for (double a : amplitude) s += a * a;
    return s * domega / (2.0 * units::kPi);
  }
};

struct GridSpec {
  std::size_t samples = std::size_t{1} << 20;
  double half_span_fs = 40000.0;
};

/// Grid of `samples` points t_n = -half_span + n dt, dt = 2 half_span / samples.
inline TimeField make_time_field(const GridSpec& grid, double carrier_nm = 800.0) {
  if (grid.samples < 2 || !(grid.half_span_fs > 0.0)) throw std::domain_error("TimeField: invalid grid");
  TimeField f;
  f.dt_fs = 2.0 * grid.half_span_fs / static_cast<double>(grid.samples);
  f.t0_fs = -grid.half_span_fs;
  f.envelope.assign(grid.samples, Complex(0.0, 0.0));
  f.carrier_nm = carrier_nm;
  return f;
}

inline constexpr double kMinSamplesPerKick = 16.0;
inline constexpr double kEdgeAmplitude = 1e-4;

/// Adds a real Gaussian field envelope with peak intensity `intensity` and
/// intensity FWHM `fwhm_fs` (field FWHM = sqrt(2) * fwhm_fs).
inline void add_gaussian(TimeField& f, double intensity, double fwhm_fs, double center_fs) {
  const double amp = std::sqrt(intensity);
  const double k = 2.0 * std::log(2.0) / (fwhm_fs * fwhm_fs);
  for (std::size_t n = 0; n < f.size(); ++n) {
    const double x = f.time(n) - center_fs;
    f.envelope[n] += amp * std::exp(-k * x * x);
  }
}

/// Coherent sum of the ramp and kick field envelopes (zero relative phase).
/// Segments are in reduced units; `spec` converts them to TW/cm^2 and fs.
inline TimeField synthesize_target_field(const PulseSegment& ramp, const PulseSegment& kick, const RotorSpec& spec,
                                         double carrier_nm = 800.0, const GridSpec& grid = {}) {
  auto f = make_time_field(grid, carrier_nm);
  const bool has_ramp = ramp.peak_coupling > 0.0;
  const bool has_kick = kick.peak_coupling > 0.0;
  if (kick.is_impulsive() || ramp.is_impulsive() || kick.drives_dipole() || ramp.drives_dipole())
    throw std::domain_error("synthesize_target_field: needs finite laser segments");
  if (has_ramp && has_kick && std::abs(ramp.center - kick.center) > 1e-12)
    throw std::domain_error("synthesize_target_field: kick must arrive at the ramp peak");
  const double center = has_kick ? kick.center : ramp.center;
  if (has_kick) {
    const double tau_k = fs_from_reduced_time(kick.fwhm, spec);
    if (tau_k / f.dt_fs < kMinSamplesPerKick)
      throw std::domain_error("synthesize_target_field: grid too coarse, " + std::to_string(tau_k / f.dt_fs) +
                              " samples per kick FWHM (need >= 16)");
    add_gaussian(f, intensity_from_gamma(kick.peak_coupling, spec), tau_k, fs_from_reduced_time(center, spec));
  }
  if (has_ramp)
    add_gaussian(f, intensity_from_gamma(ramp.peak_coupling, spec), fs_from_reduced_time(ramp.fwhm, spec),
                 fs_from_reduced_time(center, spec));
  double peak = 0.0;
  for (const auto& e : f.envelope) peak = std::max(peak, std::abs(e));
  if (peak > 0.0 && std::max(std::abs(f.envelope.front()), std::abs(f.envelope.back())) > kEdgeAmplitude * peak)
    throw std::domain_error("synthesize_target_field: time span does not cover the ramp");
  return f;
}

// ---------------------------------------------------------------------------
// Transforms

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place unnormalized DFT; sign = FFTW_FORWARD (exp(-i)) or FFTW_BACKWARD.
inline void dft(std::vector<Complex>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

inline std::vector<double> unwrap(const std::vector<double>& wrapped) {
  std::vector<double> out(wrapped.size());
  double offset = 0.0;
  for (std::size_t k = 0; k < wrapped.size(); ++k) {
    if (k > 0) {
      const double d = wrapped[k] - wrapped[k - 1];
      offset -= 2.0 * units::kPi * std::round(d / (2.0 * units::kPi));
    }
    out[k] = wrapped[k] + offset;
  }
  return out;
}

}  // namespace detail

/// Fourier spectrum of the envelope on w_k = (k - N/2) 2pi / (N dt).
inline SpectralField spectral_decompose(const TimeField& field) {
  const std::size_t n = field.size();
  if (n < 2) throw std::domain_error("spectral_decompose: need at least two samples");
  std::vector<Complex> data = field.envelope;
  detail::dft(data, FFTW_FORWARD);
  SpectralField s;
  s.domega = 2.0 * units::kPi / (static_cast<double>(n) * field.dt_fs);
  const auto half = static_cast<long>(n / 2);
  s.omega0 = -static_cast<double>(half) * s.domega;
  s.t0_fs = field.t0_fs;
  s.carrier_nm = field.carrier_nm;
  s.amplitude.resize(n);
  std::vector<double> wrapped(n);
  for (std::size_t k = 0; k < n; ++k) {
    // fftshift: output index k holds frequency index k - half.
    const auto src = static_cast<std::size_t>((static_cast<long>(k) - half + static_cast<long>(n)) % static_cast<long>(n));
    const double w = s.omega(k);
    const Complex c = field.dt_fs * data[src] * std::polar(1.0, -w * field.t0_fs);
    s.amplitude[k] = std::abs(c);
    wrapped[k] = std::arg(c);
  }
  s.phase = detail::unwrap(wrapped);
  return s;
}

/// Inverse transform back onto the time grid the spectrum was taken from.
inline TimeField reconstruct_time_field(const SpectralField& s) {
  const std::size_t n = s.size();
  if (n < 2 || s.phase.size() != n) throw std::domain_error("reconstruct_time_field: invalid spectrum");
  for (double a : s.amplitude)
    if (!(a >= 0.0)) throw std::domain_error("reconstruct_time_field: negative amplitude");
  TimeField f;
  f.dt_fs = 2.0 * units::kPi / (static_cast<double>(n) * s.domega);
  f.t0_fs = s.t0_fs;
  f.carrier_nm = s.carrier_nm;
  std::vector<Complex> data(n);
  const auto half = static_cast<long>(n / 2);
  for (std::size_t k = 0; k < n; ++k) {
    const auto dst = static_cast<std::size_t>((static_cast<long>(k) - half + static_cast<long>(n)) % static_cast<long>(n));
    const double w = s.omega(k);
    data[dst] = std::polar(s.amplitude[k], s.phase[k]) * std::polar(1.0, w * s.t0_fs);
  }
  detail::dft(data, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(n) * f.dt_fs);
  f.envelope.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.envelope[i] = data[i] * scale;
  return f;
}

/// Piecewise-constant amplitude and phase over `pixel_count` equal bins of
/// `window` (per-pixel means); zero amplitude outside the window.
inline SpectralField pixelate(const SpectralField& s, int pixel_count, SpectralWindow window) {
  if (pixel_count < 1) throw std::domain_error("pixelate: pixel_count must be >= 1");
  const auto full = s.full_window();
  const double slack = 1e-9 * s.domega;
  if (!(window.omega_hi > window.omega_lo) || window.omega_lo < full.omega_lo - slack ||
      window.omega_hi > full.omega_hi + slack)
    throw std::domain_error("pixelate: window outside the frequency grid");
  SpectralField out = s;
  out.pixel_count = pixel_count;
  out.window = window;
  const double width = (window.omega_hi - window.omega_lo) / pixel_count;
  std::vector<int> bin(s.size(), -1);
  std::vector<double> asum(pixel_count, 0.0), psum(pixel_count, 0.0);
  std::vector<int> count(pixel_count, 0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double w = s.omega(k);
    if (w < window.omega_lo || w >= window.omega_hi) continue;
    const int b = std::min(pixel_count - 1, static_cast<int>(std::floor((w - window.omega_lo) / width)));
    bin[k] = b;
    asum[b] += s.amplitude[k];
    psum[b] += s.phase[k];
    ++count[b];
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (bin[k] < 0) {
      out.amplitude[k] = 0.0;
      out.phase[k] = 0.0;
    } else {
      out.amplitude[k] = asum[bin[k]] / count[bin[k]];
      out.phase[k] = psum[bin[k]] / count[bin[k]];
    }
  }
  return out;
}

/// Window centred on the carrier, `factor` times the spectral intensity FWHM
/// of a Gaussian pulse of intensity FWHM tau_fs (dw = 4 ln2 / tau).
inline SpectralWindow default_pixel_window(double kick_fwhm_fs, double factor = 4.0) {
  const double fwhm = 4.0 * std::log(2.0) / kick_fwhm_fs;
  return {-0.5 * factor * fwhm, 0.5 * factor * fwhm};
}

// ---------------------------------------------------------------------------
// Energy budget

struct FeasibilityReport {
  bool feasible = true;
  double required_energy_mj = 0.0;
  double budget_mj = 0.0;
  double input_energy_mj = 0.0;
  double spot_area_cm2 = 0.0;
  std::vector<SpectralWindow> offending;  // frequencies needing gain at the budget
};

/// Fluence (TW/cm^2 fs) -> energy (mJ) on a flat-top disk of the given diameter.
inline double energy_mj(double fluence_tw_fs_per_cm2, double spot_diameter_um) {
  const double r_cm = 0.5 * spot_diameter_um * 1e-4;
  return fluence_tw_fs_per_cm2 * 1e12 * 1e-15 * units::kPi * r_cm * r_cm * 1e3;
}

/// Attenuation-only check: the input, scaled to the energy budget, must satisfy
/// A_target(w) <= A_input(w) wherever the target is non-negligible
/// (A_target > 1e-6 max A_target).
inline FeasibilityReport feasibility_check(const SpectralField& target, const TimeField& input_ftl,
                                           double energy_budget_mj, double spot_diameter_um) {
  if (!(energy_budget_mj > 0.0) || !(spot_diameter_um > 0.0))
    throw std::domain_error("feasibility_check: budget and spot must be positive");
  FeasibilityReport r;
  r.budget_mj = energy_budget_mj;
  const double rad = 0.5 * spot_diameter_um * 1e-4;
  r.spot_area_cm2 = units::kPi * rad * rad;
  const auto input = spectral_decompose(input_ftl);
  r.input_energy_mj = energy_mj(input_ftl.fluence(), spot_diameter_um);
  if (!(r.input_energy_mj > 0.0)) throw std::domain_error("feasibility_check: input pulse has no energy");
  double tmax = 0.0;
  for (double a : target.amplitude) tmax = std::max(tmax, a);
  if (tmax == 0.0) return r;  // nothing to synthesize
  // Interpolate the input spectrum onto the target grid.
  auto input_at = [&](double w) {
    const double x = (w - input.omega0) / input.domega;
    if (x < 0.0 || x > static_cast<double>(input.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= input.size()) return input.amplitude[i];
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * input.amplitude[i] + f * input.amplitude[i + 1];
  };
  double ratio2 = 0.0;
  std::vector<double> need(target.size(), 0.0);
  for (std::size_t k = 0; k < target.size(); ++k) {
    if (target.amplitude[k] <= 1e-6 * tmax) continue;
    const double a = input_at(target.omega(k));
    need[k] = a > 0.0 ? std::pow(target.amplitude[k] / a, 2) : std::numeric_limits<double>::infinity();
    ratio2 = std::max(ratio2, need[k]);
  }
  r.required_energy_mj = r.input_energy_mj * ratio2;
  r.feasible = r.required_energy_mj <= energy_budget_mj;
  const double limit = energy_budget_mj / r.input_energy_mj;
  std::optional<SpectralWindow> run;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const bool bad = need[k] > limit;
    if (bad && !run) run = SpectralWindow{target.omega(k), target.omega(k)};
    if (bad) run->omega_hi = target.omega(k);
    if (!bad && run) {
      r.offending.push_back(*run);
      run.reset();
    }
  }
  if (run) r.offending.push_back(*run);
  return r;
}

// ---------------------------------------------------------------------------
// Propagation source built from a sampled envelope

/// gamma(t) = gamma_from_intensity(|E(t)|^2), interpolated by a cubic
/// B-spline on the envelope grid (converted to reduced time).
class SampledEnvelope {
 public:
  SampledEnvelope(const TimeField& field, const RotorSpec& spec) {
    if (field.size() < 4) throw std::domain_error("SampledEnvelope: need at least four samples");
    const double scale = gamma_from_intensity(1.0, spec);
    std::vector<double> g(field.size());
    for (std::size_t n = 0; n < field.size(); ++n) g[n] = scale * field.intensity(n);
    t0_ = reduced_time_from_fs(field.t0_fs, spec);
    dt_ = reduced_time_from_fs(field.dt_fs, spec);
    t1_ = t0_ + dt_ * static_cast<double>(field.size() - 1);
    spline_ = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(g.begin(), g.end(),
                                                                                          t0_, dt_);
    peak_ = *std::max_element(g.begin(), g.end());
  }

  TimeInterval span() const { return {t0_, t1_}; }
  std::vector<Impulse> impulses() const { return {}; }
  std::vector<FieldPiece> pieces() const { return {FieldPiece{t0_, t1_, {0}}}; }
  Coupling coupling_on(const FieldPiece&, double t) const {
    return {std::max(0.0, (*spline_)(std::clamp(t, t0_, t1_))), 0.0};
  }
  double peak_gamma() const { return peak_; }

  /// A quarter of the half-maximum width of the tallest feature; used as the
  /// maximum integrator step so that no feature is stepped over.
  double suggested_max_step() const {
    const auto n = static_cast<std::size_t>(std::llround((t1_ - t0_) / dt_)) + 1;
    std::size_t ip = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (*spline_)(t0_ + dt_ * static_cast<double>(i));
      if (v > best) {
        best = v;
        ip = i;
      }
    }
    std::size_t lo = ip, hi = ip;
    while (lo > 0 && (*spline_)(t0_ + dt_ * static_cast<double>(lo)) > 0.5 * best) --lo;
    while (hi + 1 < n && (*spline_)(t0_ + dt_ * static_cast<double>(hi)) > 0.5 * best) ++hi;
    return std::max(dt_, 0.25 * dt_ * static_cast<double>(hi - lo));
  }

 private:
  double t0_ = 0.0, dt_ = 1.0, t1_ = 0.0, peak_ = 0.0;
  std::shared_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline_;
};

/// Sampled source extended by `tail` of field-free time past the grid.
struct ExtendedSource {
  SampledEnvelope field;
  double t_end;

  TimeInterval span() const { return {field.span().start, t_end}; }
  std::vector<Impulse> impulses() const { return {}; }
  std::vector<FieldPiece> pieces() const { return field.pieces(); }
  Coupling coupling_on(const FieldPiece& p, double t) const { return field.coupling_on(p, t); }
};

// ---------------------------------------------------------------------------
// End-to-end pipeline: target -> spectrum -> pixels -> field -> rotor

struct ShaperConfig {
  RotorSpec spec;
  double ramp_intensity = 2.5;  // TW/cm^2
  double ramp_fwhm_fs = 10000.0;
  double kick_intensity = 25.0;
  double kick_fwhm_fs = 200.0;
  double carrier_nm = 800.0;
  int pixel_count = 640;  // 0: no pixelization
  double window_factor = 4.0;
  GridSpec grid;
  double kt_over_b = 0.0;
  bool fold_m = false;
  bool centrifugal = true;
  PropagationSettings settings;
  int j_max = 64;
  unsigned workers = 0;
  double spot_diameter_um = 20.0;
  double energy_budget_mj = 10.0;
};

struct ShaperResult {
  TimeField target;
  SpectralField spectrum;
  SpectralField shaped;
  TimeField field;
  FeasibilityReport feasibility;
  TraceMaximum maximum;  // reduced time, kick at t = 0
  int j_max_used = 0;
};

/// Transform-limited Gaussian input (unit peak intensity) on the given grid.
inline TimeField ftl_input(double fwhm_fs, double carrier_nm, const GridSpec& grid) {
  auto f = make_time_field(grid, carrier_nm);
  add_gaussian(f, 1.0, fwhm_fs, 0.0);
  return f;
}

inline ShaperResult run_shaper_pipeline(const ShaperConfig& cfg, bool simulate = true) {
  const auto& spec = cfg.spec;
  ShaperResult r;
  const auto ramp = PulseSegment::adiabatic_ramp(gamma_from_intensity(cfg.ramp_intensity, spec),
                                                 reduced_time_from_fs(cfg.ramp_fwhm_fs, spec), 0.0,
                                                 Truncation::None);
  const auto kick = PulseSegment::finite_kick(gamma_from_intensity(cfg.kick_intensity, spec),
                                              reduced_time_from_fs(cfg.kick_fwhm_fs, spec), 0.0);
  r.target = synthesize_target_field(ramp, kick, spec, cfg.carrier_nm, cfg.grid);
  r.spectrum = spectral_decompose(r.target);
  r.shaped = cfg.pixel_count > 0
                 ? pixelate(r.spectrum, cfg.pixel_count, default_pixel_window(cfg.kick_fwhm_fs, cfg.window_factor))
                 : r.spectrum;
  r.field = reconstruct_time_field(r.shaped);
  r.feasibility = feasibility_check(r.spectrum, ftl_input(cfg.kick_fwhm_fs, cfg.carrier_nm, cfg.grid),
                                    cfg.energy_budget_mj, cfg.spot_diameter_um);
  if (!simulate) return r;

  SampledEnvelope env(r.field, spec);
  const double field_end = env.span().end;
  ExtendedSource source{env, field_end + units::kRotationalPeriod};
  auto settings = cfg.settings;
  settings.max_step = std::min(settings.max_step, env.suggested_max_step());
  TraceOptions opt;
  opt.j_max = cfg.j_max;
  opt.d_over_b = cfg.centrifugal ? spec.d_over_b() : 0.0;
  opt.workers = cfg.workers;
  const auto ens = thermal_weights(cfg.kt_over_b, spec, -1, cfg.fold_m);
  // Post-pulse window: from the kick peak to one period after the field.
  const auto res = postpulse_maximum(ens, source, settings, {0.0, source.t_end}, field_end,
                                     ObservableKind::Alignment, opt);
  r.maximum = res.maximum;
  r.j_max_used = res.j_max_used;
  return r;
}

}  // namespace rotalign

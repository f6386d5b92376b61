#pragma once

// Pulse programs in reduced units (hbar = B = 1, T_rot = pi).
//
// Laser segments drive the polarizability channel gamma(t) = E(t)^2 da / 4B;
// half-cycle pulses and DC ramps drive the dipole channel w_mu(t) = mu E(t) / B.
// Finite segments share the profile exp(-4 ln2 ((t - t0) / fwhm)^2): for laser
// segments this is the intensity envelope (fwhm = intensity FWHM), for dipole
// segments it is the field envelope (fwhm = field FWHM). Profiles are cut to
// zero beyond kSupportHalfWidth * fwhm from the center, where they are below
// 1e-19 of the peak.
//
// An impulsive kick of strength zeta is the delta-function limit of a laser
// segment with integral of gamma(t) dt = 2 zeta.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rotalign/rotor_core.hpp"
#include "rotalign/units.hpp"

namespace rotalign {

inline constexpr double kSupportHalfWidth = 4.0;

// Integral of exp(-4 ln2 x^2) dx.
inline const double kGaussianArea = std::sqrt(units::kPi / (4.0 * std::log(2.0)));

enum class SegmentKind { AdiabaticRamp, FiniteKick, ImpulsiveKick, KickTrain, HalfCyclePulse, DCRamp };
enum class Truncation { None, AtPeak };
enum class EnvelopeShape { Gaussian, Sech2, FlatTop };

inline std::string to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::AdiabaticRamp: return "AdiabaticRamp";
    case SegmentKind::FiniteKick: return "FiniteKick";
    case SegmentKind::ImpulsiveKick: return "ImpulsiveKick";
    case SegmentKind::KickTrain: return "KickTrain";
    case SegmentKind::HalfCyclePulse: return "HalfCyclePulse";
    case SegmentKind::DCRamp: return "DCRamp";
  }
  return "?";
}

inline SegmentKind segment_kind_from_string(std::string_view s) {
  for (auto k : {SegmentKind::AdiabaticRamp, SegmentKind::FiniteKick, SegmentKind::ImpulsiveKick,
                 SegmentKind::KickTrain, SegmentKind::HalfCyclePulse, SegmentKind::DCRamp})
    if (to_string(k) == s) return k;
  throw std::domain_error("unknown segment kind '" + std::string(s) + "'");
}

inline std::string to_string(Truncation t) { return t == Truncation::AtPeak ? "at_peak" : "none"; }

inline Truncation truncation_from_string(std::string_view s) {
  if (s == "at_peak") return Truncation::AtPeak;
  if (s == "none") return Truncation::None;
  throw std::domain_error("unknown truncation '" + std::string(s) + "'");
}

inline EnvelopeShape envelope_shape_from_string(std::string_view s) {
  if (s == "gaussian" || s == "Gaussian") return EnvelopeShape::Gaussian;
  if (s == "sech2" || s == "Sech2") return EnvelopeShape::Sech2;
  if (s == "flattop" || s == "FlatTop") return EnvelopeShape::FlatTop;
  throw std::domain_error("unknown envelope shape '" + std::string(s) + "'");
}

/// Integral of the normalized intensity envelope over all time, per unit FWHM.
inline double fluence_duration_factor(EnvelopeShape shape) {
  switch (shape) {
    case EnvelopeShape::Gaussian: return kGaussianArea;
    case EnvelopeShape::Sech2: return 1.0 / std::acosh(std::sqrt(2.0));  // 2 / (2 acosh sqrt2)
    case EnvelopeShape::FlatTop: return 1.0;
  }
  throw std::domain_error("unknown envelope shape");
}

struct Coupling {
  double gamma = 0.0;
  double omega_mu = 0.0;

  Coupling& operator+=(const Coupling& o) {
    gamma += o.gamma;
    omega_mu += o.omega_mu;
    return *this;
  }
  bool is_zero() const { return gamma == 0.0 && omega_mu == 0.0; }
};

struct Impulse {
  double time = 0.0;
  double zeta = 0.0;
};

struct TimeInterval {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
  bool contains(double t) const { return t >= start && t <= end; }
};

struct PulseSegment {
  SegmentKind kind = SegmentKind::AdiabaticRamp;
  double peak_coupling = 0.0;
  double fwhm = 1.0;
  double center = 0.0;
  Truncation truncation = Truncation::None;
  double zeta = 0.0;
  std::vector<Impulse> train;

  static PulseSegment adiabatic_ramp(double gamma, double fwhm, double center = 0.0,
                                     Truncation trunc = Truncation::AtPeak) {
    return {SegmentKind::AdiabaticRamp, gamma, fwhm, center, trunc, 0.0, {}};
  }
  static PulseSegment finite_kick(double gamma_peak, double fwhm, double center = 0.0) {
    return {SegmentKind::FiniteKick, gamma_peak, fwhm, center, Truncation::None, 0.0, {}};
  }
  /// Gaussian kick with the fluence of an impulsive kick of strength zeta.
  static PulseSegment finite_kick_from_zeta(double zeta, double fwhm, double center = 0.0) {
    return finite_kick(2.0 * zeta / (fwhm * kGaussianArea), fwhm, center);
  }
  static PulseSegment impulsive_kick(double zeta, double center = 0.0) {
    return {SegmentKind::ImpulsiveKick, 0.0, 0.0, center, Truncation::None, zeta, {}};
  }
  static PulseSegment kick_train(std::vector<Impulse> kicks) {
    PulseSegment s{SegmentKind::KickTrain, 0.0, 0.0, 0.0, Truncation::None, 0.0, std::move(kicks)};
    if (!s.train.empty()) s.center = s.train.front().time;
    return s;
  }
  static PulseSegment half_cycle_pulse(double omega_mu, double fwhm, double center = 0.0) {
    return {SegmentKind::HalfCyclePulse, omega_mu, fwhm, center, Truncation::None, 0.0, {}};
  }
  static PulseSegment dc_ramp(double omega_mu, double fwhm, double center = 0.0,
                              Truncation trunc = Truncation::AtPeak) {
    return {SegmentKind::DCRamp, omega_mu, fwhm, center, trunc, 0.0, {}};
  }

  bool is_impulsive() const {
    return kind == SegmentKind::ImpulsiveKick || kind == SegmentKind::KickTrain;
  }
  bool drives_dipole() const {
    return kind == SegmentKind::HalfCyclePulse || kind == SegmentKind::DCRamp;
  }

  void validate() const {
    if (is_impulsive()) {
      if (kind == SegmentKind::ImpulsiveKick && !(zeta >= 0.0))
        throw std::domain_error("ImpulsiveKick: zeta must be >= 0");
      if (kind == SegmentKind::KickTrain) {
        if (train.empty()) throw std::domain_error("KickTrain: empty train");
        for (const auto& k : train)
          if (!(k.zeta >= 0.0)) throw std::domain_error("KickTrain: zeta must be >= 0");
        for (std::size_t i = 1; i < train.size(); ++i) {
          const double periods = (train[i].time - train[0].time) / units::kRotationalPeriod;
          if (!(periods > 0.5) || std::abs(periods - std::round(periods)) * units::kRotationalPeriod > 1e-9)
            throw std::domain_error("KickTrain: kicks must be spaced by whole rotational periods");
        }
      }
      return;
    }
    if (!(peak_coupling >= 0.0)) throw std::domain_error(to_string(kind) + ": peak coupling must be >= 0");
    if (!(fwhm > 0.0)) throw std::domain_error(to_string(kind) + ": fwhm must be > 0");
  }

  std::vector<Impulse> impulses() const {
    if (kind == SegmentKind::ImpulsiveKick) return {{center, zeta}};
    if (kind == SegmentKind::KickTrain) return train;
    return {};
  }

  /// Interval outside which the segment contributes exactly zero.
  TimeInterval support() const {
    if (is_impulsive()) return {center, center};
    const double half = kSupportHalfWidth * fwhm;
    return {center - half, truncation == Truncation::AtPeak ? center : center + half};
  }

  /// Gaussian profile ignoring truncation and support cut.
  double smooth_value(double t) const {
    if (is_impulsive()) return 0.0;
    const double x = (t - center) / fwhm;
    return peak_coupling * std::exp(-4.0 * std::log(2.0) * x * x);
  }

  double value(double t) const {
    if (is_impulsive()) return 0.0;
    const auto sup = support();
    if (t < sup.start || t > sup.end) return 0.0;
    return smooth_value(t);
  }

  Coupling coupling_smooth(double t) const {
    const double v = smooth_value(t);
    return drives_dipole() ? Coupling{0.0, v} : Coupling{v, 0.0};
  }

  Coupling coupling(double t) const {
    const double v = value(t);
    return drives_dipole() ? Coupling{0.0, v} : Coupling{v, 0.0};
  }

  /// Integral over time of the coupling, honoring truncation.
  double area() const {
    if (is_impulsive()) return 0.0;
    const double full = peak_coupling * fwhm * kGaussianArea;
    return truncation == Truncation::AtPeak ? 0.5 * full : full;
  }
};

/// Interval on which the field may be nonzero, with the segments active there.
struct FieldPiece {
  double start = 0.0;
  double end = 0.0;
  std::vector<std::size_t> active;
};

struct PulseProgram {
  std::vector<PulseSegment> segments;
  double t_start = 0.0;
  double t_end = units::kRotationalPeriod;

  void validate() const {
    if (!(t_end >= t_start)) throw std::domain_error("PulseProgram: t_end precedes t_start");
    for (const auto& s : segments) s.validate();
    auto kicks = impulses();
    for (std::size_t i = 1; i < kicks.size(); ++i)
      if (kicks[i].time == kicks[i - 1].time)
        throw std::domain_error("PulseProgram: overlapping impulsive kicks at t=" +
                                std::to_string(kicks[i].time));
    for (const auto& k : kicks)
      if (k.time < t_start || k.time > t_end)
        throw std::domain_error("PulseProgram: impulsive kick outside program span");
  }

  TimeInterval span() const { return {t_start, t_end}; }

  /// Impulsive kicks sorted by time.
  std::vector<Impulse> impulses() const {
    std::vector<Impulse> out;
    for (const auto& s : segments)
      for (const auto& k : s.impulses()) out.push_back(k);
    std::stable_sort(out.begin(), out.end(),
                     [](const Impulse& a, const Impulse& b) { return a.time < b.time; });
    return out;
  }

  /// Time of the last kick (impulsive or finite), the reference for post-pulse windows.
  std::optional<double> last_kick_time() const {
    std::optional<double> t;
    for (const auto& s : segments) {
      if (s.kind == SegmentKind::ImpulsiveKick || s.kind == SegmentKind::FiniteKick ||
          s.kind == SegmentKind::HalfCyclePulse)
        t = std::max(t.value_or(s.center), s.center);
      if (s.kind == SegmentKind::KickTrain)
        for (const auto& k : s.train) t = std::max(t.value_or(k.time), k.time);
    }
    return t;
  }

  /// Latest time at which any finite segment is nonzero, or t_start if none.
  double field_end() const {
    double end = t_start;
    for (const auto& s : segments)
      if (!s.is_impulsive()) end = std::max(end, std::min(s.support().end, t_end));
    return end;
  }

  /// Field-carrying intervals between consecutive breakpoints (support edges,
  /// truncation points, impulse times).
  std::vector<FieldPiece> pieces() const {
    std::vector<double> cuts{t_start, t_end};
    for (const auto& s : segments) {
      if (s.is_impulsive()) {
        for (const auto& k : s.impulses()) cuts.push_back(k.time);
        continue;
      }
      const auto sup = s.support();
      cuts.push_back(sup.start);
      cuts.push_back(sup.end);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<FieldPiece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (a < t_start || b > t_end || !(b > a)) continue;
      FieldPiece piece{a, b, {}};
      for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& s = segments[k];
        if (s.is_impulsive() || s.peak_coupling == 0.0) continue;
        const auto sup = s.support();
        if (sup.start < b && sup.end > a) piece.active.push_back(k);
      }
      if (!piece.active.empty()) out.push_back(std::move(piece));
    }
    return out;
  }

  /// Smooth continuation of the field on a piece (valid on the closed piece).
  Coupling coupling_on(const FieldPiece& piece, double t) const {
    Coupling c;
    for (auto k : piece.active) c += segments[k].coupling_smooth(t);
    return c;
  }
};

/// Instantaneous couplings (gamma, w_mu) at reduced time t.
inline Coupling envelope_eval(const PulseProgram& program, double t) {
  if (t < program.t_start || t > program.t_end)
    throw std::domain_error("envelope_eval: t outside program span");
  Coupling c;
  for (const auto& s : program.segments) c += s.coupling(t);
  return c;
}

// ---------------------------------------------------------------------------
// Laboratory-unit conversions

/// Dimensionless gamma = E^2 da / 4B for a peak intensity in TW/cm^2.
inline double gamma_from_intensity(double intensity_tw_cm2, const RotorSpec& spec) {
  if (intensity_tw_cm2 < 0.0) throw std::domain_error("gamma_from_intensity: negative intensity");
  const double e2 = units::field_squared_from_intensity(units::tw_per_cm2_to_si(intensity_tw_cm2));
  const double da = units::polarizability_si(spec.polarizability_anisotropy * units::kAngstrom3);
  return e2 * da / (4.0 * units::wavenumber_to_joule(spec.rotational_constant_b));
}

inline double intensity_from_gamma(double gamma, const RotorSpec& spec) {
  return gamma / gamma_from_intensity(1.0, spec);
}

/// Kick strength zeta = F da / 8 hbar with F = E^2 * (integral of the
/// normalized intensity envelope).
inline double zeta_from_kick(double intensity_tw_cm2, double fwhm_fs, EnvelopeShape shape,
                             const RotorSpec& spec) {
  if (intensity_tw_cm2 < 0.0) throw std::domain_error("zeta_from_kick: negative intensity");
  if (!(fwhm_fs > 0.0)) throw std::domain_error("zeta_from_kick: fwhm must be > 0");
  const double e2 = units::field_squared_from_intensity(units::tw_per_cm2_to_si(intensity_tw_cm2));
  const double da = units::polarizability_si(spec.polarizability_anisotropy * units::kAngstrom3);
  const double fluence_time = fwhm_fs * units::fs * fluence_duration_factor(shape);
  return e2 * fluence_time * da / (8.0 * units::kHbar);
}

inline double zeta_from_kick(double intensity_tw_cm2, double fwhm_fs, std::string_view shape,
                             const RotorSpec& spec) {
  return zeta_from_kick(intensity_tw_cm2, fwhm_fs, envelope_shape_from_string(shape), spec);
}

/// w_mu = mu E / B for a field in kV/cm.
inline double omega_mu_from_field(double field_kv_cm, const RotorSpec& spec) {
  if (field_kv_cm < 0.0) throw std::domain_error("omega_mu_from_field: negative field");
  return spec.dipole_moment * units::kDebye * units::kv_per_cm_to_si(field_kv_cm) /
         units::wavenumber_to_joule(spec.rotational_constant_b);
}

inline double reduced_time_from_fs(double t_fs, const RotorSpec& spec) {
  return units::seconds_to_reduced(t_fs * units::fs, spec.rotational_constant_b);
}

inline double fs_from_reduced_time(double t, const RotorSpec& spec) {
  return units::reduced_to_seconds(t, spec.rotational_constant_b) / units::fs;
}

inline double kt_over_b_from_kelvin(double kelvin, const RotorSpec& spec) {
  if (kelvin < 0.0) throw std::domain_error("temperature must be >= 0 K");
  return units::kBoltzmannWavenumber * kelvin / spec.rotational_constant_b;
}

// ---------------------------------------------------------------------------
// Closed-form estimates

/// Adiabatic high-field limit 1 - 1/sqrt(gamma).
inline double adiabatic_alignment_estimate(double gamma) {
  if (!(gamma > 1.0)) throw std::domain_error("adiabatic_alignment_estimate: requires gamma > 1");
  return 1.0 - 1.0 / std::sqrt(gamma);
}

inline constexpr double kKickSaturation = 0.92;

/// Kick-only growth c_s - (c_s - 1/3) exp(-zeta^{3/2}).
inline double kick_saturation_estimate(double zeta) {
  if (zeta < 0.0) throw std::domain_error("kick_saturation_estimate: zeta must be >= 0");
  return kKickSaturation - (kKickSaturation - 1.0 / 3.0) * std::exp(-std::pow(zeta, 1.5));
}

// ---------------------------------------------------------------------------
// Program construction

/// Ramp of strength gamma and FWHM tau_a peaking at t = 0, with `kick`
/// (impulsive, finite or a train) starting at t = 0. The window extends one
/// rotational period past the end of the field.
inline PulseProgram make_combined_program(double gamma, double tau_a, const PulseSegment& kick,
                                          Truncation truncation = Truncation::AtPeak) {
  if (gamma < 0.0) throw std::domain_error("make_combined_program: gamma must be >= 0");
  kick.validate();
  if (kick.center != 0.0)
    throw std::domain_error("make_combined_program: kick must arrive at the ramp peak (t = 0)");
  PulseProgram p;
  double start = 0.0;
  if (gamma > 0.0) {
    if (!(tau_a > 0.0)) throw std::domain_error("make_combined_program: tau_a must be > 0");
    auto ramp = PulseSegment::adiabatic_ramp(gamma, tau_a, 0.0, truncation);
    start = ramp.support().start;
    p.segments.push_back(ramp);
  }
  p.segments.push_back(kick);
  if (!kick.is_impulsive()) start = std::min(start, kick.support().start);
  double end = 0.0;
  for (const auto& s : p.segments) {
    if (s.is_impulsive())
      for (const auto& k : s.impulses()) end = std::max(end, k.time);
    else
      end = std::max(end, s.support().end);
  }
  p.t_start = start;
  p.t_end = end + units::kRotationalPeriod;
  p.validate();
  return p;
}

/// Dipole ramp (w_mu peak, FWHM tau_a, truncated at its peak t = 0) followed by
/// a half-cycle pulse centred at t = 0. The window extends one rotational
/// period past the end of the half-cycle pulse.
inline PulseProgram make_orientation_program(double omega_hcp, double tau_hcp, double omega_ramp, double tau_ramp,
                                             Truncation truncation = Truncation::AtPeak) {
  PulseProgram p;
  const auto hcp = PulseSegment::half_cycle_pulse(omega_hcp, tau_hcp, 0.0);
  hcp.validate();
  p.segments.push_back(hcp);
  double start = hcp.support().start;
  if (omega_ramp > 0.0) {
    const auto ramp = PulseSegment::dc_ramp(omega_ramp, tau_ramp, 0.0, truncation);
    ramp.validate();
    p.segments.push_back(ramp);
    start = std::min(start, ramp.support().start);
  }
  p.t_start = start;
  double end = 0.0;
  for (const auto& s : p.segments) end = std::max(end, s.support().end);
  p.t_end = end + units::kRotationalPeriod;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Text format, one entry per line:
//
//   t_start = -25.1327
//   t_end = 3.14159
//   segment = AdiabaticRamp peak=142 fwhm=6.28319 center=0 truncation=at_peak
//   segment = ImpulsiveKick zeta=11 center=0
//   segment = KickTrain kicks=5.5@0,5.5@3.14159265358979
//
// Blank lines and lines starting with '#' are ignored.

namespace detail {

inline std::string fmt_exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("program line " + std::to_string(line) + ": bad number '" +
                             std::string(s) + "'");
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline void write_program(std::ostream& out, const PulseProgram& p) {
  using detail::fmt_exact;
  out << "t_start = " << fmt_exact(p.t_start) << "\n";
  out << "t_end = " << fmt_exact(p.t_end) << "\n";
  for (const auto& s : p.segments) {
    out << "segment = " << to_string(s.kind);
    switch (s.kind) {
      case SegmentKind::ImpulsiveKick:
        out << " zeta=" << fmt_exact(s.zeta) << " center=" << fmt_exact(s.center);
        break;
      case SegmentKind::KickTrain: {
        out << " kicks=";
        for (std::size_t i = 0; i < s.train.size(); ++i)
          out << (i ? "," : "") << fmt_exact(s.train[i].zeta) << "@" << fmt_exact(s.train[i].time);
        break;
      }
      default:
        out << " peak=" << fmt_exact(s.peak_coupling) << " fwhm=" << fmt_exact(s.fwhm)
            << " center=" << fmt_exact(s.center) << " truncation=" << to_string(s.truncation);
    }
    out << "\n";
  }
}

inline std::string program_to_string(const PulseProgram& p) {
  std::ostringstream out;
  write_program(out, p);
  return out.str();
}

inline PulseProgram read_program(std::istream& in) {
  using detail::parse_double;
  using detail::trim;
  PulseProgram p;
  p.segments.clear();
  bool have_start = false, have_end = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("program line " + std::to_string(line) + ": expected key = value");
    auto key = trim(text.substr(0, eq));
    auto value = trim(text.substr(eq + 1));
    if (key == "t_start") {
      p.t_start = parse_double(value, line);
      have_start = true;
    } else if (key == "t_end") {
      p.t_end = parse_double(value, line);
      have_end = true;
    } else if (key == "segment") {
      auto sp = value.find(' ');
      PulseSegment s;
      try {
        s.kind = segment_kind_from_string(value.substr(0, sp));
      } catch (const std::domain_error& e) {
        throw std::runtime_error("program line " + std::to_string(line) + ": " + e.what());
      }
      std::string_view rest = sp == std::string_view::npos ? "" : value.substr(sp + 1);
      while (!rest.empty()) {
        rest = trim(rest);
        auto end = rest.find(' ');
        auto tok = rest.substr(0, end);
        rest = end == std::string_view::npos ? "" : rest.substr(end + 1);
        if (tok.empty()) continue;
        auto e2 = tok.find('=');
        if (e2 == std::string_view::npos)
          throw std::runtime_error("program line " + std::to_string(line) + ": bad field '" +
                                   std::string(tok) + "'");
        auto k = tok.substr(0, e2);
        auto v = tok.substr(e2 + 1);
        if (k == "peak") s.peak_coupling = parse_double(v, line);
        else if (k == "fwhm") s.fwhm = parse_double(v, line);
        else if (k == "center") s.center = parse_double(v, line);
        else if (k == "zeta") s.zeta = parse_double(v, line);
        else if (k == "truncation") s.truncation = truncation_from_string(v);
        else if (k == "kicks") {
          while (!v.empty()) {
            auto comma = v.find(',');
            auto item = v.substr(0, comma);
            v = comma == std::string_view::npos ? "" : v.substr(comma + 1);
            auto at = item.find('@');
            if (at == std::string_view::npos)
              throw std::runtime_error("program line " + std::to_string(line) +
                                       ": kick must be zeta@time");
            s.train.push_back({parse_double(item.substr(at + 1), line),
                               parse_double(item.substr(0, at), line)});
          }
          if (!s.train.empty()) s.center = s.train.front().time;
        } else {
          throw std::runtime_error("program line " + std::to_string(line) + ": unknown field '" +
                                   std::string(k) + "'");
        }
      }
      p.segments.push_back(std::move(s));
    } else {
      throw std::runtime_error("program line " + std::to_string(line) + ": unknown key '" +
                               std::string(key) + "'");
    }
  }
  if (!have_start || !have_end) throw std::runtime_error("program: t_start and t_end are required");
  p.validate();
  return p;
}

inline PulseProgram program_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_program(in);
}

}  // namespace rotalign

#pragma once

// Time evolution of a fixed-m wavepacket under a field source.
//
// A field source describes the drive piecewise:
//
//   TimeInterval span() const
//   std::vector<Impulse> impulses() const          // sorted delta kicks
//   std::vector<FieldPiece> pieces() const         // intervals with nonzero field
//   Coupling coupling_on(const FieldPiece&, double t) const
//
// `coupling_on` must be smooth on the closed piece; breakpoints of the drive
// (truncations, support edges) are piece boundaries. PulseProgram models this
// directly; tests and the shaper provide their own sources.
//
// Field pieces are integrated with an adaptive Runge-Kutta-Fehlberg 7(8) pair
// in the interaction picture of the free rotor, for the gauge-shifted
// Hamiltonian H' = H + gamma + w_mu. The interaction picture removes the
// stiffness of the high-J diagonal; the shift removes the fast global phase of
// strongly dressed states and is integrated alongside and restored. Field-free stretches use the analytic phase factors and impulsive
// kicks apply exp(2 i zeta cos^2) exactly.

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rotalign/pulses.hpp"
#include "rotalign/rotor_core.hpp"

namespace rotalign {

struct PropagationSettings {
  double tolerance = 1e-9;
  double max_step = std::numeric_limits<double>::infinity();
  double sample_dt = units::kRotationalPeriod / 2000.0;

  void validate() const {
    if (!(tolerance > 0.0 && tolerance <= 1e-6))
      throw std::domain_error("PropagationSettings: tolerance must lie in (0, 1e-6]");
    if (!(sample_dt > 0.0)) throw std::domain_error("PropagationSettings: sample_dt must be > 0");
    if (!(max_step > 0.0)) throw std::domain_error("PropagationSettings: max_step must be > 0");
  }
};

// Fraction of `tolerance` granted to each step's local error, so that the
// accumulated norm drift of a run stays within 10 x tolerance.
inline constexpr double kLocalErrorFraction = 1e-3;

class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Impulsive kicks

/// Cache of exp(2 i zeta cos^2) per (basis, zeta). The cos^2 matrix is block
/// diagonal in J parity; each block is diagonalized separately so that
/// cross-parity entries of the propagator are exact zeros.
class KickCache {
 public:
  using Matrix = Eigen::MatrixXcd;

  std::shared_ptr<const Matrix> get(const BasisSpec& basis, double zeta) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(basis.j_max, basis.m, zeta);
    if (auto it = kicks_.find(key); it != kicks_.end()) return it->second;
    auto u = std::make_shared<const Matrix>(build(eigensystem(basis), zeta));
    const std::size_t bytes = static_cast<std::size_t>(u->size()) * sizeof(Complex);
    if (bytes_ + bytes > capacity_bytes_) {
      kicks_.clear();
      bytes_ = 0;
    }
    kicks_.emplace(key, u);
    bytes_ += bytes;
    return u;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return kicks_.size();
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    kicks_.clear();
    eigen_.clear();
    bytes_ = 0;
  }

  /// Kick matrices are dropped wholesale once their total size would exceed this.
  void set_capacity(std::size_t bytes) {
    std::lock_guard<std::mutex> lock(mutex_);
    capacity_bytes_ = bytes;
  }

 private:
  struct Block {
    std::vector<int> index;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  struct Eigensystem {
    int n = 0;
    std::vector<Block> blocks;
  };

  const Eigensystem& eigensystem(const BasisSpec& basis) {
    const auto key = std::make_pair(basis.j_max, basis.m);
    if (auto it = eigen_.find(key); it != eigen_.end()) return it->second;
    const Eigen::MatrixXd c = cos2_operator(basis).to_dense();
    Eigensystem sys;
    sys.n = basis.size();
    for (int parity = 0; parity < 2; ++parity) {
      Block b;
      for (int i = parity; i < sys.n; i += 2) b.index.push_back(i);
      if (b.index.empty()) continue;
      const int k = static_cast<int>(b.index.size());
      Eigen::MatrixXd sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) sub(r, s) = c(b.index[r], b.index[s]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
      b.values = es.eigenvalues();
      b.vectors = es.eigenvectors();
      sys.blocks.push_back(std::move(b));
    }
    return eigen_.emplace(key, std::move(sys)).first->second;
  }

  static Matrix build(const Eigensystem& sys, double zeta) {
    Matrix u = Matrix::Zero(sys.n, sys.n);
    for (const auto& b : sys.blocks) {
      const int k = static_cast<int>(b.index.size());
      Eigen::VectorXcd phase(k);
      for (int i = 0; i < k; ++i) phase[i] = std::polar(1.0, 2.0 * zeta * b.values[i]);
      const Matrix block = b.vectors.cast<Complex>() * phase.asDiagonal() *
                           b.vectors.transpose().cast<Complex>();
      for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) u(b.index[r], b.index[s]) = block(r, s);
    }
    return u;
  }

  mutable std::mutex mutex_;
  std::map<std::tuple<int, int, double>, std::shared_ptr<const Matrix>> kicks_;
  std::map<std::pair<int, int>, Eigensystem> eigen_;
  std::size_t bytes_ = 0;
  std::size_t capacity_bytes_ = std::size_t{256} << 20;
};

inline KickCache& default_kick_cache() {
  static KickCache cache;
  return cache;
}

/// Applies exp(2 i zeta cos^2(theta)), the propagator of -2 zeta delta(t) cos^2.
inline Wavepacket apply_impulsive_kick(const Wavepacket& state, double zeta,
                                       KickCache& cache = default_kick_cache()) {
  if (zeta < 0.0) throw std::domain_error("apply_impulsive_kick: zeta must be >= 0");
  if (zeta == 0.0) return state;
  const auto u = cache.get(state.basis, zeta);
  return Wavepacket{state.basis, (*u) * state.amplitudes};
}

/// Field-free flight: c_J -> exp(-i E_J dt) c_J.
inline Wavepacket free_evolve(const Wavepacket& state, double dt, double d_over_b) {
  Wavepacket out = state;
  for (int i = 0; i < state.basis.size(); ++i) {
    const double e = rotational_energy(state.basis.j_at(i), d_over_b);
    out.amplitudes[i] *= std::polar(1.0, -std::remainder(e * dt, 2.0 * units::kPi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Propagation

using Observer = std::function<void(double, const Wavepacket&)>;

namespace detail {

using OdeState = std::vector<Complex>;

// Right-hand side in the interaction picture y = exp(i E (t - t_ref)) c of the
// gauge-shifted Hamiltonian, augmented with the integral of the shift.
struct InteractionSystem {
  Eigen::VectorXd energy;
  bool integer_energies = false;  // rigid rotor: phases by recurrence
  int j_min = 0;
  double t_ref = 0.0;
  SymmetricBand cos2;
  SymmetricBand cos1;
  std::function<Coupling(double)> coupling;

  // p_i = exp(-i E_i (t - t_ref)).
  void phases(double t, std::vector<Complex>& p) const {
    const int n = static_cast<int>(energy.size());
    const double s = t - t_ref;
    if (!integer_energies) {
      for (int i = 0; i < n; ++i) p[i] = std::polar(1.0, -energy[i] * s);
      return;
    }
    // E_{J+1} - E_J = 2 (J + 1)
    const Complex u = std::polar(1.0, -2.0 * s);
    Complex step = std::polar(1.0, -2.0 * (j_min + 1) * s);
    p[0] = std::polar(1.0, -energy[0] * s);
    for (int i = 1; i < n; ++i) {
      p[i] = p[i - 1] * step;
      step *= u;
    }
  }

  void operator()(const OdeState& x, OdeState& dxdt, double t) const {
    thread_local std::vector<Complex> p, z;
    const int n = static_cast<int>(energy.size());
    p.resize(n);
    z.resize(n);
    const Coupling c = coupling(t);
    const double shift = c.gamma + c.omega_mu;
    phases(t, p);
    for (int i = 0; i < n; ++i) z[i] = p[i] * x[i];
    for (int i = 0; i < n; ++i) {
      Complex h = (shift - c.gamma * cos2.diag[i]) * z[i];
      if (c.gamma != 0.0) {
        if (i + 2 < n) h -= c.gamma * cos2.off2[i] * z[i + 2];
        if (i >= 2) h -= c.gamma * cos2.off2[i - 2] * z[i - 2];
      }
      if (c.omega_mu != 0.0) {
        if (i + 1 < n) h -= c.omega_mu * cos1.off1[i] * z[i + 1];
        if (i >= 1) h -= c.omega_mu * cos1.off1[i - 1] * z[i - 1];
      }
      h *= std::conj(p[i]);
      dxdt[i] = Complex(h.imag(), -h.real());  // -i h
    }
    dxdt[n] = Complex(shift, 0.0);
  }
};

/// Sample times start + k dt within [start, end].
struct SampleClock {
  double start = 0.0;
  double end = 0.0;
  double dt = 1.0;
  long next = 0;

  double time(long k) const { return start + static_cast<double>(k) * dt; }
  bool pending() const { return time(next) <= end + 1e-12 * std::max(1.0, std::abs(end)); }
  double next_time() const { return time(next); }
};

}  // namespace detail

/// Evolves `state`, given at time `state_time`, through `source` up to
/// `window.end`, calling `observe` at window.start + k * sample_dt. The state
/// reported at a kick time is the post-kick state. Returns the final state.
template <typename Source>
Wavepacket propagate(const Wavepacket& state, const Source& source, const PropagationSettings& settings,
                     TimeInterval window, const Observer& observe, double state_time,
                     double d_over_b = 0.0, KickCache& cache = default_kick_cache()) {
  namespace ode = boost::numeric::odeint;
  settings.validate();
  state.basis.validate();
  if (std::abs(state.norm() - 1.0) > 1e-10) throw std::domain_error("propagate: state not normalized");
  if (window.end < window.start) throw std::domain_error("propagate: empty window");
  if (state_time > window.start) throw std::domain_error("propagate: window starts before the state time");
  if (window.end > source.span().end + 1e-12 || state_time < source.span().start - 1e-12)
    throw std::domain_error("propagate: span outside the field source");

  const BasisSpec basis = state.basis;
  const int n = basis.size();
  const Eigen::VectorXd energy = rotational_energies(basis, d_over_b);
  const SymmetricBand c2 = cos2_operator(basis);
  const SymmetricBand c1 = cos_operator(basis);
  const auto impulses = source.impulses();
  const auto pieces = source.pieces();

  detail::SampleClock clock{window.start, window.end, settings.sample_dt, 0};
  Wavepacket current = state;
  double t = state_time;
  const auto same_time = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
  };

  auto check_norm = [&] {
    const double drift = std::abs(current.norm() - 1.0);
    if (drift > 10.0 * settings.tolerance)
    {
      char msg[128];
      std::snprintf(msg, sizeof msg, "propagate: norm drift %.3g at t=%.9g exceeds 10 x tolerance", drift, t);
      throw IntegrationFailure(msg);
    }
  };

  std::size_t next_impulse = 0;
  while (next_impulse < impulses.size() && impulses[next_impulse].time < t) ++next_impulse;
  std::size_t piece_index = 0;
  while (piece_index < pieces.size() && pieces[piece_index].end <= t) ++piece_index;
  while (clock.pending() && clock.next_time() < t && !same_time(clock.next_time(), t)) ++clock.next;

  for (;;) {
    while (next_impulse < impulses.size() && same_time(impulses[next_impulse].time, t)) {
      current = apply_impulsive_kick(current, impulses[next_impulse].zeta, cache);
      ++next_impulse;
    }
    if (clock.pending() && same_time(clock.next_time(), t)) {
      if (observe) observe(clock.next_time(), current);
      ++clock.next;
    }
    if (t >= window.end || same_time(t, window.end)) break;

    const double next_kick = next_impulse < impulses.size() ? impulses[next_impulse].time
                                                            : std::numeric_limits<double>::infinity();
    while (piece_index < pieces.size() && pieces[piece_index].end <= t) ++piece_index;
    const bool in_piece = piece_index < pieces.size() && pieces[piece_index].start <= t;

    if (!in_piece) {
      double target = std::min(window.end, next_kick);
      if (piece_index < pieces.size()) target = std::min(target, pieces[piece_index].start);
      while (clock.pending() && clock.next_time() < target && !same_time(clock.next_time(), target)) {
        if (observe) observe(clock.next_time(), free_evolve(current, clock.next_time() - t, d_over_b));
        ++clock.next;
      }
      current = free_evolve(current, target - t, d_over_b);
      t = target;
      continue;
    }

    const FieldPiece& piece = pieces[piece_index];
    const double stop = std::min({piece.end, next_kick, window.end});
    detail::InteractionSystem sys{energy, d_over_b == 0.0, basis.j_min(), t, c2, c1,
                                  [&source, &piece](double tt) { return source.coupling_on(piece, tt); }};
    detail::OdeState x(n + 1);
    for (int i = 0; i < n; ++i) x[i] = current.amplitudes[i];
    x[n] = 0.0;
    std::vector<Complex> phase(n);
    auto restore = [&](const detail::OdeState& y, double when) {
      Wavepacket w{basis, Eigen::VectorXcd(n)};
      sys.phases(when, phase);
      const Complex gauge = std::polar(1.0, y[n].real());
      for (int i = 0; i < n; ++i) w.amplitudes[i] = y[i] * phase[i] * gauge;
      return w;
    };

    using Stepper = ode::runge_kutta_fehlberg78<detail::OdeState>;
    const double local = settings.tolerance * kLocalErrorFraction;
    auto stepper = ode::make_controlled<Stepper>(local, local);
    double dt_try = std::min({settings.max_step, stop - t, 1e-3});
    while (t < stop && !same_time(t, stop)) {
      double target = stop;
      if (clock.pending() && clock.next_time() > t && clock.next_time() < target &&
          !same_time(clock.next_time(), target))
        target = clock.next_time();
      const double h_full = std::min(dt_try, settings.max_step);
      const bool clamped = target - t <= h_full;
      double h = clamped ? target - t : h_full;
      const double t_before = t;
      if (stepper.try_step(sys, x, t, h) == ode::fail) {
        dt_try = h;
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
          throw IntegrationFailure("propagate: step size underflow at t=" + std::to_string(t));
        continue;
      }
      dt_try = clamped ? std::max(h, dt_try) : h;
      if (clamped) t = target;
      (void)t_before;
      if (clamped && target < stop && clock.pending() && same_time(clock.next_time(), t)) {
        if (observe) observe(clock.next_time(), restore(x, t));
        ++clock.next;
      }
    }
    current = restore(x, stop);
    t = stop;
    check_norm();
  }
  check_norm();
  return current;
}

/// Propagates from the source start and samples over `window`.
template <typename Source>
Wavepacket propagate(const Wavepacket& state, const Source& source, const PropagationSettings& settings,
                     TimeInterval window, const Observer& observe, double d_over_b = 0.0) {
  return propagate(state, source, settings, window, observe, source.span().start, d_over_b);
}

struct TimedWavepacket {
  double time;
  Wavepacket state;
};

/// Collects the sampled wavepackets over `window`.
template <typename Source>
std::vector<TimedWavepacket> propagate_samples(const Wavepacket& state, const Source& source,
                                               const PropagationSettings& settings, TimeInterval window,
                                               double d_over_b = 0.0) {
  std::vector<TimedWavepacket> out;
  propagate(state, source, settings, window,
            [&](double t, const Wavepacket& w) { out.push_back({t, w}); }, source.span().start, d_over_b);
  return out;
}

/// State at time `t` (no sampling).
template <typename Source>
Wavepacket propagate_to(const Wavepacket& state, const Source& source, const PropagationSettings& settings,
                        double from, double to, double d_over_b = 0.0) {
  PropagationSettings s = settings;
  s.sample_dt = std::max(to - from, 1.0) * 2.0;
  return propagate(state, source, s, TimeInterval{to, to}, Observer{}, from, d_over_b);
}

}  // namespace rotalign

#pragma once

// Thermal ensembles, expectation values, ensemble traces and target states.

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotalign/parallel.hpp"
#include "rotalign/propagator.hpp"
#include "rotalign/pulses.hpp"
#include "rotalign/rotor_core.hpp"

namespace rotalign {

enum class ObservableKind { Alignment, Orientation };

inline std::string to_string(ObservableKind k) {
  return k == ObservableKind::Alignment ? "alignment" : "orientation";
}

// ---------------------------------------------------------------------------
// Thermal ensembles

struct EnsembleMember {
  int j = 0;
  int m = 0;
  double weight = 0.0;
};

struct ThermalEnsemble {
  std::vector<EnsembleMember> members;
  double normalized_temperature = 0.0;  // kT / B
  bool folded = false;                  // members carry m >= 0 with doubled weight

  double total_weight() const {
    double s = 0.0;
    for (const auto& m : members) s += m.weight;
    return s;
  }
  int max_j() const {
    int j = 0;
    for (const auto& m : members) j = std::max(j, m.j);
    return j;
  }
  std::string describe() const {
    return "kT/B=" + std::to_string(normalized_temperature) + " members=" +
           std::to_string(members.size()) + (folded ? " (m folded)" : "");
  }
};

inline constexpr double kThermalTailBound = 1e-8;

namespace detail {

inline double level_weight(const RotorSpec& spec, int j, double kt) {
  return spec.spin_weight(j) * std::exp(-rotational_energy(j, 0.0) / kt);
}

}  // namespace detail

/// Smallest J cutoff whose omitted Boltzmann tail is below kThermalTailBound.
inline int required_thermal_cutoff(double kt_over_b, const RotorSpec& spec) {
  if (kt_over_b <= 0.0) return 1;
  double total = 0.0;
  std::vector<double> level;
  for (int j = 0;; ++j) {
    const double w = (2 * j + 1) * detail::level_weight(spec, j, kt_over_b);
    level.push_back(w);
    total += w;
    if (j > 2 && (2 * j + 1) * std::exp(-rotational_energy(j, 0.0) / kt_over_b) < 1e-30 * total) break;
  }
  double tail = 0.0;
  for (int j = static_cast<int>(level.size()) - 1; j >= 0; --j) {
    if ((tail + level[j]) / total >= kThermalTailBound) return j;
    tail += level[j];
  }
  return 0;
}

/// Boltzmann ensemble over (J, m), weight ~ g(J parity) exp(-J(J+1) / (kT/B)).
/// A negative cutoff selects the minimal cutoff meeting the tail bound.
inline ThermalEnsemble thermal_weights(double kt_over_b, const RotorSpec& spec, int cutoff = -1,
                                       bool fold_m = false) {
  spec.validate();
  if (kt_over_b < 0.0) throw std::domain_error("thermal_weights: kT/B must be >= 0");
  ThermalEnsemble ens;
  ens.normalized_temperature = kt_over_b;
  ens.folded = fold_m;
  if (kt_over_b == 0.0) {
    // Lowest level allowed by the nuclear-spin statistics.
    const int j0 = spec.spin_weight_even > 0.0 ? 0 : 1;
    const int mmin = fold_m ? 0 : -j0;
    for (int m = mmin; m <= j0; ++m) {
      const double w = (fold_m && m > 0) ? 2.0 : 1.0;
      ens.members.push_back({j0, m, w / (2 * j0 + 1)});
    }
    return ens;
  }
  const int needed = required_thermal_cutoff(kt_over_b, spec);
  if (cutoff < 0) cutoff = needed;
  if (cutoff < needed)
    throw std::domain_error("thermal_weights: cutoff J=" + std::to_string(cutoff) +
                            " leaves a tail above 1e-8; required cutoff J=" + std::to_string(needed));
  double z = 0.0;
  for (int j = 0; j <= cutoff; ++j) {
    const double w = detail::level_weight(spec, j, kt_over_b);
    for (int m = fold_m ? 0 : -j; m <= j; ++m) {
      const double mult = (fold_m && m > 0) ? 2.0 : 1.0;
      ens.members.push_back({j, m, mult * w});
      z += mult * w;
    }
  }
  for (auto& m : ens.members) m.weight /= z;
  return ens;
}

// ---------------------------------------------------------------------------
// Expectation values

inline double expectation(const Wavepacket& state, ObservableKind kind) {
  const auto op = kind == ObservableKind::Alignment ? cos2_operator(state.basis) : cos_operator(state.basis);
  return op.quadratic_form(state.amplitudes);
}

struct AlignmentTrace {
  std::vector<double> times;
  std::vector<double> values;
  ObservableKind observable_kind = ObservableKind::Alignment;
  std::string provenance;
};

struct TraceOptions {
  int j_max = 64;
  double d_over_b = 0.0;
  unsigned workers = 0;        // 0: worker_count()
  double edge_population = 1e-10;  // basis doubling threshold on the top levels
  int j_max_limit = 512;
};

namespace detail {

struct MemberRun {
  std::vector<double> values;
  Wavepacket final_state;  // at window.end
  int j_max_used = 0;
};

// Propagates one basis state and records the observable, doubling the basis
// while the top four levels carry more than `edge_population`.
template <typename Source>
MemberRun run_member(const EnsembleMember& member, const Source& source, const PropagationSettings& settings,
                     TimeInterval window, ObservableKind kind, const TraceOptions& opt) {
  int j_max = std::max(opt.j_max, member.j + 4);
  for (;;) {
    const BasisSpec basis{j_max, member.m};
    const auto op = kind == ObservableKind::Alignment ? cos2_operator(basis) : cos_operator(basis);
    MemberRun run;
    run.j_max_used = j_max;
    double edge = 0.0;
    auto edge_of = [&](const Wavepacket& w) {
      double e = 0.0;
      for (int j = std::max(basis.j_min(), j_max - 3); j <= j_max; ++j) e += w.population(j);
      return e;
    };
    run.final_state = propagate(Wavepacket::basis_state(basis, member.j), source, settings, window,
              [&](double, const Wavepacket& w) {
                run.values.push_back(op.quadratic_form(w.amplitudes));
                edge = std::max(edge, edge_of(w));
              },
              source.span().start, opt.d_over_b);
    edge = std::max(edge, edge_of(run.final_state));
    if (edge <= opt.edge_population || j_max >= opt.j_max_limit) return run;
    j_max = std::min(2 * j_max, opt.j_max_limit);
  }
}

}  // namespace detail

/// Weighted ensemble average of the observable, sampled every settings.sample_dt
/// over `window`. Members run independently; the reduction order is the member
/// order, so results do not depend on the worker count.
template <typename Source>
AlignmentTrace trace_alignment(const ThermalEnsemble& ensemble, const Source& source,
                               const PropagationSettings& settings, TimeInterval window,
                               ObservableKind kind = ObservableKind::Alignment, const TraceOptions& opt = {}) {
  if (ensemble.members.empty()) throw std::domain_error("trace_alignment: empty ensemble");
  std::vector<detail::MemberRun> runs(ensemble.members.size());
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < ensemble.members.size(); ++i)
    if (ensemble.members[i].weight > 0.0) active.push_back(i);
  parallel_for(
      active.size(),
      [&](std::size_t k) {
        const auto& m = ensemble.members[active[k]];
        try {
          runs[active[k]] = detail::run_member(m, source, settings, window, kind, opt);
        } catch (const std::exception& e) {
          throw IntegrationFailure("member (J=" + std::to_string(m.j) + ", m=" + std::to_string(m.m) +
                                   "): " + e.what());
        }
      },
      opt.workers ? opt.workers : worker_count());

  AlignmentTrace trace;
  trace.observable_kind = kind;
  trace.provenance = ensemble.describe();
  std::size_t samples = runs[active.front()].values.size();
  trace.values.assign(samples, 0.0);
  for (auto i : active) {
    const auto& v = runs[i].values;
    if (v.size() != samples) throw std::logic_error("trace_alignment: inconsistent sample counts");
    for (std::size_t s = 0; s < samples; ++s) trace.values[s] += ensemble.members[i].weight * v[s];
  }
  trace.times.resize(samples);
  for (std::size_t s = 0; s < samples; ++s) trace.times[s] = window.start + static_cast<double>(s) * settings.sample_dt;
  return trace;
}

/// Post-pulse search window: one rotational period starting at the last kick
/// (or at the end of the field when there is no kick), extended to cover the
/// tail of a finite kick.
inline TimeInterval postpulse_window(const PulseProgram& program) {
  const double field_end = program.field_end();
  const auto kick = program.last_kick_time();
  double start = kick ? *kick : field_end;
  for (const auto& k : program.impulses()) start = std::max(start, k.time);
  const double end = std::max(start, field_end) + units::kRotationalPeriod;
  return {start, std::min(end, program.t_end)};
}

struct TraceMaximum {
  double t_max = 0.0;
  double value = 0.0;
};

/// Global maximum over the window (earliest sample on ties), refined by the
/// parabola through the bracketing samples.
inline TraceMaximum find_max(const AlignmentTrace& trace, TimeInterval window) {
  const auto& t = trace.times;
  const auto& v = trace.values;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.start - 1e-12 || t[i] > window.end + 1e-12) continue;
    if (!best || v[i] > v[*best]) best = i;
  }
  if (!best) throw std::domain_error("find_max: empty window");
  const std::size_t i = *best;
  TraceMaximum out{t[i], v[i]};
  if (i == 0 || i + 1 >= t.size()) return out;
  if (t[i - 1] < window.start - 1e-12 || t[i + 1] > window.end + 1e-12) return out;
  const double y0 = v[i - 1], y1 = v[i], y2 = v[i + 1];
  const double denom = y0 - 2.0 * y1 + y2;
  if (!(denom < 0.0)) return out;
  const double h = t[i + 1] - t[i];
  const double shift = 0.5 * (y0 - y2) / denom;  // in units of h, within [-1/2, 1/2]
  out.t_max = t[i] + shift * h;
  out.value = y1 - 0.25 * (y0 - y2) * shift;
  return out;
}

// ---------------------------------------------------------------------------
// Field-free ensembles: after the last pulse every member evolves analytically,
// so the observable can be evaluated (and maximized) at arbitrary times.

struct FreeEnsemble {
  std::vector<Wavepacket> states;  // at `time`
  std::vector<double> weights;
  double time = 0.0;
  double d_over_b = 0.0;
  ObservableKind kind = ObservableKind::Alignment;

  double value_at(double t) const { return value_at(t, operators()); }

  std::vector<SymmetricBand> operators() const {
    std::vector<SymmetricBand> ops;
    for (const auto& s : states)
      ops.push_back(kind == ObservableKind::Alignment ? cos2_operator(s.basis) : cos_operator(s.basis));
    return ops;
  }

  double value_at(double t, const std::vector<SymmetricBand>& ops) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i)
      acc += weights[i] * ops[i].quadratic_form(free_evolve(states[i], t - time, d_over_b).amplitudes);
    return acc;
  }

  /// Samples every dt over the window, then refines the best sample with Brent's method.
  TraceMaximum maximize(TimeInterval window, double dt) const {
    if (!(window.end >= window.start)) throw std::domain_error("FreeEnsemble: empty window");
    const auto n = static_cast<std::size_t>(std::floor((window.end - window.start) / dt + 1e-9)) + 1;
    const auto ops = operators();
    std::vector<double> v(n);
    for (std::size_t s = 0; s < n; ++s) v[s] = value_at(window.start + static_cast<double>(s) * dt, ops);
    std::size_t best = 0;
    for (std::size_t s = 1; s < n; ++s)
      if (v[s] > v[best]) best = s;
    const double t0 = window.start + static_cast<double>(best) * dt;
    TraceMaximum out{t0, v[best]};
    const double lo = std::max(window.start, t0 - dt), hi = std::min(window.end, t0 + dt);
    if (hi > lo) {
      auto r = boost::math::tools::brent_find_minima([&](double t) { return -value_at(t, ops); }, lo, hi, 40);
      if (-r.second > out.value) out = {r.first, -r.second};
    }
    return out;
  }
};

struct PostPulseResult {
  TraceMaximum maximum;
  FreeEnsemble free;     // member states at the start of field-free flight
  AlignmentTrace trace;  // sampled over the requested trace span
  int j_max_used = 0;
};

/// Samples the ensemble observable over `trace_span` and finds its maximum over
/// `window`, where the source is field-free from `t_free` on. Before t_free
/// the members are integrated; afterwards they evolve analytically and the
/// maximum is refined by Brent's method.
template <typename Source>
PostPulseResult analyze_run(const ThermalEnsemble& ensemble, const Source& source, const PropagationSettings& settings,
                            TimeInterval trace_span, TimeInterval window, double t_free,
                            ObservableKind kind = ObservableKind::Alignment, const TraceOptions& opt = {}) {
  if (ensemble.members.empty()) throw std::domain_error("analyze_run: empty ensemble");
  if (!(window.end >= window.start)) throw std::domain_error("analyze_run: empty window");
  if (trace_span.start > window.start || trace_span.end < window.end)
    throw std::domain_error("analyze_run: trace span must cover the window");
  t_free = std::clamp(t_free, trace_span.start, trace_span.end);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < ensemble.members.size(); ++i)
    if (ensemble.members[i].weight > 0.0) active.push_back(i);
  std::vector<detail::MemberRun> runs(active.size());
  const TimeInterval sampled{trace_span.start, t_free};
  parallel_for(
      active.size(),
      [&](std::size_t k) {
        const auto& m = ensemble.members[active[k]];
        try {
          runs[k] = detail::run_member(m, source, settings, sampled, kind, opt);
        } catch (const std::exception& e) {
          throw IntegrationFailure("member (J=" + std::to_string(m.j) + ", m=" + std::to_string(m.m) +
                                   "): " + e.what());
        }
      },
      opt.workers ? opt.workers : worker_count());

  PostPulseResult out;
  out.free.time = t_free;
  out.free.d_over_b = opt.d_over_b;
  out.free.kind = kind;
  auto& trace = out.trace;
  trace.observable_kind = kind;
  trace.provenance = ensemble.describe();
  trace.values.assign(runs.front().values.size(), 0.0);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const double w = ensemble.members[active[k]].weight;
    for (std::size_t s = 0; s < trace.values.size(); ++s) trace.values[s] += w * runs[k].values[s];
    out.free.states.push_back(runs[k].final_state);
    out.free.weights.push_back(w);
    out.j_max_used = std::max(out.j_max_used, runs[k].j_max_used);
  }
  const auto head = trace.values.size();
  for (std::size_t s = 0; s < head; ++s) trace.times.push_back(trace_span.start + static_cast<double>(s) * settings.sample_dt);
  // Continue the sample grid through the field-free part.
  const auto ops = out.free.operators();
  for (auto s = static_cast<long>(head);; ++s) {
    const double t = trace_span.start + static_cast<double>(s) * settings.sample_dt;
    if (t > trace_span.end + 1e-12 * std::max(1.0, std::abs(trace_span.end))) break;
    trace.times.push_back(t);
    trace.values.push_back(out.free.value_at(t, ops));
  }

  std::optional<TraceMaximum> best;
  const auto sampled_in = [&](double lo, double hi) {
    for (std::size_t s = 0; s < head; ++s)
      if (trace.times[s] >= lo - 1e-12 && trace.times[s] <= hi + 1e-12) return true;
    return false;
  };
  if (window.start <= t_free && sampled_in(window.start, std::min(window.end, t_free))) {
    AlignmentTrace head_trace;
    head_trace.times.assign(trace.times.begin(), trace.times.begin() + static_cast<long>(head));
    head_trace.values.assign(trace.values.begin(), trace.values.begin() + static_cast<long>(head));
    best = find_max(head_trace, {window.start, std::min(window.end, t_free)});
  }
  if (window.end > t_free) {
    const auto tail = out.free.maximize({std::max(t_free, window.start), window.end}, settings.sample_dt);
    if (!best || tail.value > best->value) best = tail;
  }
  if (!best) throw std::domain_error("analyze_run: window holds no sample");
  out.maximum = *best;
  return out;
}

/// Maximum over `window` only (the trace covers the window).
template <typename Source>
PostPulseResult postpulse_maximum(const ThermalEnsemble& ensemble, const Source& source,
                                  const PropagationSettings& settings, TimeInterval window, double t_free,
                                  ObservableKind kind = ObservableKind::Alignment, const TraceOptions& opt = {}) {
  return analyze_run(ensemble, source, settings, window, window, t_free, kind, opt);
}

/// Field-free time of a program: after the field and the last impulsive kick.
inline double field_free_from(const PulseProgram& program) {
  double t_free = program.field_end();
  for (const auto& k : program.impulses()) t_free = std::max(t_free, k.time);
  return t_free;
}

/// Post-pulse maximum for a pulse program: window from postpulse_window, field-free
/// after the field end and the last impulsive kick.
inline PostPulseResult postpulse_maximum(const ThermalEnsemble& ensemble, const PulseProgram& program,
                                         const PropagationSettings& settings,
                                         ObservableKind kind = ObservableKind::Alignment,
                                         const TraceOptions& opt = {}) {
  return postpulse_maximum(ensemble, program, settings, postpulse_window(program), field_free_from(program), kind,
                           opt);
}

// ---------------------------------------------------------------------------
// Target states: top eigenvector of cos^2 over the first N even-J, m = 0 levels.

struct TargetState {
  int dimension_n = 1;
  Eigen::VectorXd amplitudes;  // over J = 0, 2, ..., 2(N-1)
  double eigenvalue = 1.0 / 3.0;

  /// Embedded as a wavepacket on the m = 0 basis with the given j_max.
  Wavepacket as_wavepacket(int j_max) const {
    if (j_max < 2 * (dimension_n - 1)) throw std::domain_error("TargetState: basis too small");
    Wavepacket w{BasisSpec{j_max, 0}, Eigen::VectorXcd::Zero(j_max + 1)};
    for (int k = 0; k < dimension_n; ++k) w.amplitudes[2 * k] = amplitudes[k];
    return w;
  }
};

inline TargetState target_state(int dimension_n) {
  if (dimension_n < 1) throw std::domain_error("target_state: N must be >= 1");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dimension_n, dimension_n);
  for (int k = 0; k < dimension_n; ++k) {
    c(k, k) = cos2_matrix_element(2 * k, 0, 2 * k);
    if (k + 1 < dimension_n) c(k, k + 1) = c(k + 1, k) = cos2_matrix_element(2 * k, 0, 2 * k + 2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  TargetState out;
  out.dimension_n = dimension_n;
  out.eigenvalue = es.eigenvalues()[dimension_n - 1];
  out.amplitudes = es.eigenvectors().col(dimension_n - 1);
  if (out.amplitudes[0] < 0.0) out.amplitudes = -out.amplitudes;
  return out;
}

struct TargetProjection {
  int best_n = 0;
  double overlap = 0.0;
  double leakage = 0.0;  // population outside the even-J, m = 0 sector
};

/// max over N in [n_min, n_max] of |<psi_N|phi>|^2.
inline TargetProjection project_on_target(const Wavepacket& state, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw std::domain_error("project_on_target: empty N range");
  TargetProjection out;
  if (state.basis.m != 0) {
    out.leakage = 1.0;
    return out;
  }
  double even = 0.0;
  for (int j = 0; j <= state.basis.j_max; j += 2) even += state.population(j);
  out.leakage = std::max(0.0, state.amplitudes.squaredNorm() - even);
  for (int n = n_min; n <= n_max; ++n) {
    const auto target = target_state(n);
    Complex acc = 0.0;
    for (int k = 0; k < n && 2 * k <= state.basis.j_max; ++k) acc += target.amplitudes[k] * state.amplitudes[2 * k];
    const double overlap = std::norm(acc);
    if (overlap > out.overlap) {
      out.overlap = overlap;
      out.best_n = n;
    }
  }
  return out;
}

}  // namespace rotalign

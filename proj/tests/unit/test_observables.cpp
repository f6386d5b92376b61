#include <gtest/gtest.h>

#include "../oracles.hpp"

using namespace rotalign;

namespace {

PulseProgram field_free(double length) {
  PulseProgram p;
  p.t_start = 0.0;
  p.t_end = length;
  return p;
}

double weight_of(const ThermalEnsemble& e, int j, int m) {
  for (const auto& x : e.members)
    if (x.j == j && x.m == m) return x.weight;
  return -1.0;
}

}  // namespace

TEST(Thermal, BoltzmannRatiosAndSpinStatistics) {
  const auto co2 = presets::co2();
  const auto e = thermal_weights(50.0, co2);
  EXPECT_NEAR(e.total_weight(), 1.0, 1e-14);
  EXPECT_NEAR(weight_of(e, 2, 1) / weight_of(e, 0, 0), std::exp(-6.0 / 50.0), 1e-14);
  EXPECT_NEAR(weight_of(e, 10, -3) / weight_of(e, 0, 0), std::exp(-110.0 / 50.0), 1e-13);
  EXPECT_EQ(weight_of(e, 3, 0), 0.0);
  const auto n2 = thermal_weights(7.0, presets::n2());
  EXPECT_NEAR(weight_of(n2, 1, 0) / weight_of(n2, 0, 0), 0.5 * std::exp(-2.0 / 7.0), 1e-14);
}

TEST(Thermal, ZeroTemperatureUsesLowestAllowedLevel) {
  const auto e = thermal_weights(0.0, presets::co2());
  ASSERT_EQ(e.members.size(), 1u);
  EXPECT_EQ(e.members[0].j, 0);
  const auto o2 = thermal_weights(0.0, presets::o2());
  ASSERT_EQ(o2.members.size(), 3u);
  for (const auto& m : o2.members) {
    EXPECT_EQ(m.j, 1);
    EXPECT_NEAR(m.weight, 1.0 / 3.0, 1e-15);
  }
  EXPECT_NEAR(thermal_weights(0.0, presets::o2(), -1, true).total_weight(), 1.0, 1e-15);
}

TEST(Thermal, CutoffBoundsTheTail) {
  const auto co2 = presets::co2();
  const int needed = required_thermal_cutoff(50.0, co2);
  double tail = 0.0, total = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double w = co2.spin_weight(j) * (2 * j + 1) * std::exp(-j * (j + 1) / 50.0);
    total += w;
    if (j > needed) tail += w;
  }
  EXPECT_LT(tail / total, kThermalTailBound);
  try {
    thermal_weights(50.0, co2, needed - 4);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("required cutoff J=" + std::to_string(needed)), std::string::npos);
  }
  EXPECT_THROW(thermal_weights(-1.0, co2), std::domain_error);
}

TEST(Thermal, FoldingMatchesEnumeration) {
  const auto co2 = presets::co2();
  const auto p = make_combined_program(40.0, 0.4, PulseSegment::finite_kick_from_zeta(3.0, 0.03));
  PropagationSettings s;
  s.sample_dt = 0.01;
  TraceOptions o;
  o.j_max = 32;
  const auto a = trace_alignment(thermal_weights(6.0, co2, -1, false), p, s, p.span(), ObservableKind::Alignment, o);
  const auto b = trace_alignment(thermal_weights(6.0, co2, -1, true), p, s, p.span(), ObservableKind::Alignment, o);
  ASSERT_EQ(a.values.size(), b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-10);
}

TEST(Trace, FieldFreeThermalTraceIsOneThird) {
  for (bool fold : {false, true}) {
    const auto e = thermal_weights(50.0, presets::co2(), -1, fold);
    PropagationSettings s;
    s.sample_dt = units::kPi / 50.0;
    const auto t = trace_alignment(e, field_free(units::kPi), s, {0.0, units::kPi});
    for (double v : t.values) EXPECT_NEAR(v, 1.0 / 3.0, 1e-10);
  }
  const auto o = trace_alignment(thermal_weights(5.0, presets::kcl()), field_free(1.0), PropagationSettings{},
                                 {0.0, 1.0}, ObservableKind::Orientation);
  for (double v : o.values) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Trace, RevivalPeriodicity) {
  const auto p = make_combined_program(60.0, units::kPi, PulseSegment::impulsive_kick(5.0));
  for (double kt : {0.0, 5.0}) {
    const auto r = postpulse_maximum(thermal_weights(kt, presets::co2(), -1, true), p, PropagationSettings{});
    for (double t : {0.05, 0.4, 1.3, 2.9})
      EXPECT_NEAR(r.free.value_at(t), r.free.value_at(t + units::kRotationalPeriod), 1e-9);
  }
}

TEST(Trace, BitIdenticalAcrossRerunsAndWorkers) {
  const auto p = make_combined_program(40.0, units::kPi, PulseSegment::impulsive_kick(4.0));
  const auto e = thermal_weights(8.0, presets::co2(), -1, true);
  TraceOptions one, many;
  one.workers = 1;
  many.workers = 4;
  const auto a = analyze_run(e, p, PropagationSettings{}, p.span(), postpulse_window(p), 0.0,
                             ObservableKind::Alignment, one);
  const auto b = analyze_run(e, p, PropagationSettings{}, p.span(), postpulse_window(p), 0.0,
                             ObservableKind::Alignment, many);
  const auto c = analyze_run(e, p, PropagationSettings{}, p.span(), postpulse_window(p), 0.0,
                             ObservableKind::Alignment, many);
  EXPECT_EQ(a.trace.values, b.trace.values);
  EXPECT_EQ(b.trace.values, c.trace.values);
  EXPECT_EQ(a.maximum.value, c.maximum.value);
  EXPECT_EQ(a.maximum.t_max, c.maximum.t_max);
}

TEST(Trace, BasisGrowsWhenEdgeIsPopulated) {
  const auto p = make_combined_program(0.0, 1.0, PulseSegment::impulsive_kick(11.0));
  TraceOptions o;
  o.j_max = 8;
  const auto r = postpulse_maximum(thermal_weights(0.0, presets::co2()), p, PropagationSettings{},
                                   ObservableKind::Alignment, o);
  EXPECT_GT(r.j_max_used, 8);
  EXPECT_GT(r.maximum.value, 0.85);
  EXPECT_LT(r.maximum.value, 1.0);
}

TEST(Trace, AnalyticTailMatchesIntegratedTrace) {
  const auto p = make_combined_program(50.0, 1.0, PulseSegment::impulsive_kick(3.0));
  const auto e = thermal_weights(2.0, presets::co2(), -1, true);
  PropagationSettings s;
  const auto integrated = trace_alignment(e, p, s, p.span());
  const auto mixed = analyze_run(e, p, s, p.span(), postpulse_window(p), field_free_from(p));
  ASSERT_EQ(integrated.values.size(), mixed.trace.values.size());
  for (std::size_t i = 0; i < integrated.values.size(); ++i)
    EXPECT_NEAR(integrated.values[i], mixed.trace.values[i], 1e-7);
}

TEST(FindMax, ParabolaRefinement) {
  AlignmentTrace t;
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.1 * i;
    t.times.push_back(x);
    t.values.push_back(0.9 - 3.0 * (x - 1.234) * (x - 1.234));
  }
  const auto m = find_max(t, {0.0, 2.0});
  EXPECT_NEAR(m.t_max, 1.234, 1e-12);
  EXPECT_NEAR(m.value, 0.9, 1e-12);
  const auto edge = find_max(t, {1.5, 2.0});
  EXPECT_DOUBLE_EQ(edge.t_max, 1.5);
  EXPECT_THROW(find_max(t, {5.0, 6.0}), std::domain_error);
}

TEST(Window, PostPulse) {
  const auto p = make_combined_program(142.0, 2.0 * units::kPi, PulseSegment::impulsive_kick(11.0));
  const auto w = postpulse_window(p);
  EXPECT_DOUBLE_EQ(w.start, 0.0);
  EXPECT_DOUBLE_EQ(w.end, units::kPi);
  const auto q = make_combined_program(0.0, 1.0, PulseSegment::finite_kick_from_zeta(2.0, 0.1));
  EXPECT_DOUBLE_EQ(postpulse_window(q).start, 0.0);
  EXPECT_DOUBLE_EQ(postpulse_window(q).end, 0.4 + units::kPi);
}

TEST(Target, EigenstatesOfTruncatedCos2) {
  EXPECT_NEAR(target_state(1).eigenvalue, 1.0 / 3.0, 1e-15);
  double prev = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const auto t = target_state(n);
    EXPECT_GT(t.eigenvalue, prev);
    prev = t.eigenvalue;
    EXPECT_NEAR(t.amplitudes.norm(), 1.0, 1e-13);
    const auto w = t.as_wavepacket(2 * n + 4);
    EXPECT_NEAR(expectation(w, ObservableKind::Alignment), t.eigenvalue, 1e-12);
  }
  const auto w = target_state(13).as_wavepacket(40);
  const auto pr = project_on_target(w, 1, 20);
  EXPECT_EQ(pr.best_n, 13);
  EXPECT_NEAR(pr.overlap, 1.0, 1e-12);
  EXPECT_NEAR(pr.leakage, 0.0, 1e-15);
  EXPECT_THROW(target_state(0), std::domain_error);
}

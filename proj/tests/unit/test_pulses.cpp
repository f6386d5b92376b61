#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <sstream>

#include "rotalign/rotalign.hpp"

using namespace rotalign;

namespace {
double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}
}  // namespace

TEST(Segments, FiniteKickCarriesTwiceZeta) {
  for (double zeta : {1.0, 11.0, 22.0})
    for (double fwhm : {0.005 * units::kPi, 0.05}) {
      const auto k = PulseSegment::finite_kick_from_zeta(zeta, fwhm);
      const auto sup = k.support();
      EXPECT_NEAR(integrate([&](double t) { return k.value(t); }, sup.start, sup.end), 2.0 * zeta, 1e-9 * zeta);
      EXPECT_NEAR(k.area(), 2.0 * zeta, 1e-12 * zeta);
    }
}

TEST(Segments, SupportAndTruncation) {
  const auto r = PulseSegment::adiabatic_ramp(142.0, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(r.support().start, 1.0 - 8.0);
  EXPECT_DOUBLE_EQ(r.support().end, 1.0);
  EXPECT_DOUBLE_EQ(r.value(1.0), 142.0);
  EXPECT_EQ(r.value(1.0 + 1e-9), 0.0);
  EXPECT_NEAR(r.value(0.0), 71.0, 1e-12);  // half maximum one half-width before the peak
  const auto full = PulseSegment::adiabatic_ramp(142.0, 2.0, 1.0, Truncation::None);
  EXPECT_DOUBLE_EQ(full.support().end, 9.0);
  EXPECT_NEAR(full.area(), 2.0 * r.area(), 1e-12);
}

TEST(Segments, Validation) {
  EXPECT_THROW(PulseSegment::adiabatic_ramp(-1.0, 1.0).validate(), std::domain_error);
  EXPECT_THROW(PulseSegment::finite_kick(1.0, 0.0).validate(), std::domain_error);
  EXPECT_THROW(PulseSegment::impulsive_kick(-2.0).validate(), std::domain_error);
  EXPECT_THROW(PulseSegment::kick_train({{0.0, 1.0}, {1.0, 1.0}}).validate(), std::domain_error);
  EXPECT_NO_THROW(PulseSegment::kick_train({{0.0, 1.0}, {units::kPi, 1.0}}).validate());
  EXPECT_THROW(make_combined_program(10.0, 1.0, PulseSegment::impulsive_kick(1.0, 0.5)), std::domain_error);
  EXPECT_THROW(make_combined_program(-10.0, 1.0, PulseSegment::impulsive_kick(1.0)), std::domain_error);
}

TEST(Programs, CombinedProgramLayout) {
  const auto p = make_combined_program(142.0, 2.0 * units::kPi, PulseSegment::impulsive_kick(11.0));
  EXPECT_DOUBLE_EQ(p.t_start, -8.0 * units::kPi);
  EXPECT_DOUBLE_EQ(p.t_end, units::kPi);
  EXPECT_DOUBLE_EQ(*p.last_kick_time(), 0.0);
  EXPECT_DOUBLE_EQ(p.field_end(), 0.0);
  EXPECT_EQ(p.impulses().size(), 1u);
  EXPECT_DOUBLE_EQ(envelope_eval(p, 0.0).gamma, 142.0);
  EXPECT_THROW(envelope_eval(p, 10.0), std::domain_error);
}

TEST(Programs, OrientationProgram) {
  const auto p = make_orientation_program(30.0, 0.05, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(p.t_start, -2.0);
  EXPECT_DOUBLE_EQ(p.t_end, 0.2 + units::kPi);
  const auto c = envelope_eval(p, 0.0);
  EXPECT_DOUBLE_EQ(c.gamma, 0.0);
  EXPECT_DOUBLE_EQ(c.omega_mu, 32.0);
  EXPECT_DOUBLE_EQ(envelope_eval(p, 0.1).omega_mu, PulseSegment::half_cycle_pulse(30.0, 0.05).value(0.1));
}

TEST(Programs, TextRoundTrip) {
  auto p = make_combined_program(142.0, 2.0 * units::kPi, PulseSegment::finite_kick_from_zeta(11.0, 0.0157),
                                 Truncation::None);
  p.segments.push_back(PulseSegment::kick_train({{units::kPi, 2.5}, {2.0 * units::kPi, 1.0 / 3.0}}));
  p.t_end = 10.0;
  const auto text = program_to_string(p);
  const auto q = program_from_string(text);
  EXPECT_EQ(program_to_string(q), text);
  ASSERT_EQ(q.segments.size(), p.segments.size());
  EXPECT_EQ(q.segments[1].peak_coupling, p.segments[1].peak_coupling);
  EXPECT_EQ(q.segments[2].train[1].zeta, 1.0 / 3.0);
  EXPECT_EQ(q.t_start, p.t_start);
}

TEST(Programs, TextErrorsNameTheLine) {
  try {
    program_from_string("t_start = 0\nt_end = 1\nsegment = Bogus peak=1\n");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(program_from_string("t_start = x\n"), std::exception);
}

TEST(Conversions, Co2Calibration) {
  const auto co2 = presets::co2();
  EXPECT_NEAR(gamma_from_intensity(2.5, co2), 142.0, 1e-9);
  EXPECT_NEAR(intensity_from_gamma(568.0, co2), 10.0, 1e-9);
  EXPECT_NEAR(kt_over_b_from_kelvin(30.0, co2), 0.6950 * 30.0 / 0.3902, 1e-12);
  EXPECT_NEAR(co2.rotational_period_seconds() * 1e12, 42.7, 0.1);
  EXPECT_NEAR(presets::kcl().rotational_period_seconds() * 1e12, 128.0, 0.1);
  const double t = reduced_time_from_fs(10000.0, co2);
  EXPECT_NEAR(fs_from_reduced_time(t, co2), 10000.0, 1e-9);
  EXPECT_NEAR(t / units::kPi, 10000.0 / 42742.7, 1e-4);
}

TEST(Conversions, KickFluenceScalesLinearly) {
  const auto co2 = presets::co2();
  const double z = zeta_from_kick(25.0, 200.0, EnvelopeShape::Gaussian, co2);
  EXPECT_NEAR(zeta_from_kick(50.0, 200.0, "gaussian", co2), 2.0 * z, 1e-12 * z);
  EXPECT_NEAR(zeta_from_kick(25.0, 400.0, EnvelopeShape::Gaussian, co2), 2.0 * z, 1e-12 * z);
  // A Gaussian kick of this fluence in reduced units carries the same 2 zeta.
  const double tau = reduced_time_from_fs(200.0, co2);
  const auto k = PulseSegment::finite_kick(gamma_from_intensity(25.0, co2), tau);
  EXPECT_NEAR(k.area(), 2.0 * z, 1e-9 * z);
  EXPECT_THROW(zeta_from_kick(-1.0, 200.0, EnvelopeShape::Gaussian, co2), std::domain_error);
}

TEST(Estimates, ClosedForms) {
  EXPECT_NEAR(adiabatic_alignment_estimate(5680.0), 1.0 - 1.0 / std::sqrt(5680.0), 1e-15);
  EXPECT_DOUBLE_EQ(kick_saturation_estimate(0.0), 1.0 / 3.0);
  EXPECT_NEAR(kick_saturation_estimate(30.0), 0.92, 1e-12);
  EXPECT_THROW(adiabatic_alignment_estimate(0.5), std::domain_error);
}

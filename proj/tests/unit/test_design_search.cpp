#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"

using namespace rotalign;

namespace {

// log10(1 - max) with an exact parabolic minimum at gamma = 7 zeta + 21.
ContourData synthetic_contour() {
  ContourData c;
  for (int z = 0; z <= 25; ++z) c.axis1.values.push_back(z);
  for (int g = 0; g <= 400; g += 10) c.axis2.values.push_back(g);
  c.axis1.name = "zeta";
  c.axis2.name = "gamma";
  c.values.resize(26, 41);
  for (int i = 0; i < 26; ++i)
    for (int j = 0; j < 41; ++j) {
      const double g = 10.0 * j, g0 = 7.0 * i + 21.0;
      c.values(i, j) = -1.0 - 0.05 * i + 1e-5 * (g - g0) * (g - g0);
    }
  return c;
}

}  // namespace

TEST(FitLine, MatchesClosedFormOracle) {
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 3.0);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 30; ++i) pts.push_back({0.7 * i, 7.0 * 0.7 * i + 21.0 + noise(rng)});
  const auto f = fit_line(pts);
  const auto [slope, intercept] = oracle::line_fit(pts);
  EXPECT_NEAR(f.parameters[0], slope, 1e-9);
  EXPECT_NEAR(f.parameters[1], intercept, 1e-9);
  EXPECT_GE(f.residual_rms, 0.0);
  EXPECT_THROW(fit_line({{1.0, 2.0}, {1.0, 3.0}}), std::domain_error);
}

TEST(OptimumLine, RecoversExactParabola) {
  const auto c = synthetic_contour();
  const auto f = optimal_gamma_line(c, 4.0);
  EXPECT_NEAR(f.parameters[0], 7.0, 1e-9);
  EXPECT_NEAR(f.parameters[1], 21.0, 1e-9);
  EXPECT_LT(f.residual_rms, 1e-9);
  EXPECT_TRUE(f.warnings.empty());
}

TEST(OptimumLine, ThresholdWhereInteriorOptimumAppears) {
  auto c = synthetic_contour();
  // Rows below zeta = 4 get monotone gamma dependence (best at the strongest ramp).
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 41; ++j) c.values(i, j) = -1.0 - 0.002 * j;
  const auto f = optimal_gamma_line(c, 0.0);
  ASSERT_TRUE(f.threshold.has_value());
  EXPECT_GE(*f.threshold, 3.0);
  EXPECT_LE(*f.threshold, 4.0);
  EXPECT_EQ(f.warnings.size(), 4u);
  for (int i = 0; i < 26; ++i)
    for (int j = 0; j < 41; ++j) c.values(i, j) = -1.0 - 0.002 * j;
  EXPECT_THROW(optimal_gamma_line(c), std::domain_error);
}

TEST(Saturation, ExactRecovery) {
  std::vector<std::pair<double, double>> pts;
  for (double z = 4.0; z <= 25.0; z += 1.0) pts.push_back({z, 1.0 - 0.2 * std::exp(-1.2 * std::sqrt(z) + 0.053 * z)});
  const auto f = fit_saturation_curve(pts);
  EXPECT_NEAR(f.parameters[0], 0.2, 1e-9);
  EXPECT_NEAR(f.parameters[1], 1.2, 1e-9);
  EXPECT_NEAR(f.parameters[2], 0.053, 1e-9);
  EXPECT_LT(f.residual_rms, 1e-9);
}

TEST(Saturation, FreeModelNeverWorseThanPureExponential) {
  std::mt19937 rng(3);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<std::pair<double, double>> pts;
  for (double z = 5.0; z <= 22.0; z += 1.0)
    pts.push_back({z, 1.0 - 0.3 * std::exp(-1.5 * std::sqrt(z) + 0.09 * z + noise(rng))});
  EXPECT_LE(fit_saturation_curve(pts).residual_rms, fit_saturation_curve(pts, false).residual_rms + 1e-15);
}

TEST(Saturation, RejectsDegenerateInput) {
  EXPECT_THROW(fit_saturation_curve({{1, 0.5}, {2, 0.6}, {3, 0.7}}), std::domain_error);
  EXPECT_THROW(fit_saturation_curve({{4, 0.5}, {4, 0.6}, {4, 0.7}, {4, 0.8}}), std::domain_error);
  EXPECT_THROW(fit_saturation_curve({{1, 0.5}, {2, 0.6}, {3, 1.0}, {4, 0.8}}), std::domain_error);
}

TEST(Sweep, ZeroRampRowEqualsKickOnly) {
  const auto co2 = presets::co2();
  SweepOptions o;
  o.workers = 2;
  const std::vector<double> zetas{0.0, 2.0, 5.0};
  const auto c = sweep_zeta_gamma(zetas, {0.0, 60.0}, 0.0, co2, RampMode::Adiabatic, 0.0, o);
  EXPECT_TRUE(c.failures.empty());
  EXPECT_NEAR(c.alignment(0, 0), 1.0 / 3.0, 1e-12);
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    const auto p = make_combined_program(0.0, 1.0, PulseSegment::impulsive_kick(zetas[i]));
    const auto r = postpulse_maximum(thermal_weights(0.0, co2), p, o.settings);
    EXPECT_NEAR(c.alignment(i, 0), r.maximum.value, 1e-8) << "zeta=" << zetas[i];
  }
  // Ramp cell against a direct simulation of the same program.
  const auto p = make_combined_program(60.0, kAdiabaticRampFwhm, PulseSegment::impulsive_kick(5.0));
  const auto r = postpulse_maximum(thermal_weights(0.0, co2), p, o.settings);
  EXPECT_NEAR(c.alignment(2, 1), r.maximum.value, 1e-7);
}

TEST(Sweep, TauAxisInRotationalPeriods) {
  const auto c = sweep_tau_gamma({0.25 * units::kPi, units::kPi}, {50.0}, 3.0, 0.0, presets::co2());
  EXPECT_DOUBLE_EQ(c.axis1.values[0], 0.25);
  EXPECT_EQ(c.axis1.units, "T_rot");
  EXPECT_EQ(c.fixed.at("zeta"), 3.0);
  EXPECT_FALSE(c.failed(1, 0));
}

TEST(Sweep, GridValidation) {
  const auto co2 = presets::co2();
  EXPECT_THROW(sweep_zeta_gamma({}, {1.0}, 0.0, co2), std::domain_error);
  EXPECT_THROW(sweep_zeta_gamma({2.0, 1.0}, {1.0}, 0.0, co2), std::domain_error);
  EXPECT_THROW(sweep_zeta_gamma({-1.0}, {1.0}, 0.0, co2), std::domain_error);
  EXPECT_THROW(sweep_tau_gamma({0.0}, {1.0}, 1.0, 0.0, co2), std::domain_error);
}

TEST(Sweep, PerCellFailuresAreRecorded) {
  const auto ens = thermal_weights(0.0, presets::co2());
  SweepOptions o;
  ContourData c;
  c.values = Eigen::MatrixXd::Constant(1, 2, std::numeric_limits<double>::quiet_NaN());
  c.t_max = c.values;
  std::vector<detail::RowSpec> rows{{0.0, 1.0, {{0, 2.0}, {1, -1.0}}}};
  detail::run_rows(rows, ens, o, c);
  EXPECT_FALSE(c.failed(0, 0));
  EXPECT_TRUE(c.failed(0, 1));
  ASSERT_EQ(c.failures.size(), 1u);
  EXPECT_EQ(c.failures[0].col, 1u);
  std::vector<detail::RowSpec> bad{{0.0, 1.0, {{0, -2.0}, {1, -1.0}}}};
  EXPECT_THROW(detail::run_rows(bad, ens, o, c), IntegrationFailure);
}

TEST(KickTrain, PrescriptionAndReport) {
  EXPECT_DOUBLE_EQ(prescribed_train_gamma({5.0, 6.0}), 98.0);
  SweepOptions o;
  const auto r = kick_train_check({2.0, 2.0}, 0.0, presets::co2(), o, 3);
  EXPECT_EQ(r.scan_gammas.size(), 3u);
  EXPECT_DOUBLE_EQ(r.scan_gammas[1], r.prescribed_gamma);
  EXPECT_NEAR(r.scan_alignments[1], r.prescribed_alignment, 1e-12);
  EXPECT_GE(r.best_scan_alignment, r.prescribed_alignment);
}

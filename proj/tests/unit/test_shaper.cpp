#include <gtest/gtest.h>

#include <random>

#include "rotalign/rotalign.hpp"

using namespace rotalign;

namespace {

TimeField random_field(std::size_t n, unsigned seed) {
  TimeField f = make_time_field(GridSpec{n, 500.0});
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  for (auto& e : f.envelope) e = Complex(d(rng), d(rng));
  return f;
}

double fwhm_of(const std::vector<double>& x, const std::vector<double>& y) {
  const auto peak = std::max_element(y.begin(), y.end()) - y.begin();
  const double half = 0.5 * y[peak];
  auto cross = [&](long i, long step) {
    while (y[i + step] > half) i += step;
    const double f = (y[i] - half) / (y[i] - y[i + step]);
    return x[i] + f * (x[i + step] - x[i]);
  };
  return cross(peak, 1) - cross(peak, -1);
}

}  // namespace

TEST(Spectrum, Parseval) {
  for (std::size_t n : {1024u, 4096u, 6000u}) {
    const auto f = random_field(n, 11);
    const auto s = spectral_decompose(f);
    EXPECT_NEAR(s.energy() / f.fluence(), 1.0, 1e-10);
  }
}

TEST(Spectrum, RoundTripIsIdentity) {
  const auto f = random_field(2048, 5);
  const auto g = reconstruct_time_field(spectral_decompose(f));
  ASSERT_EQ(g.size(), f.size());
  EXPECT_NEAR(g.t0_fs, f.t0_fs, 1e-12);
  EXPECT_NEAR(g.dt_fs, f.dt_fs, 1e-12);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(g.envelope[i] - f.envelope[i]));
  EXPECT_LT(err, 1e-12);
}

TEST(Spectrum, GaussianTimeBandwidthProduct) {
  auto f = make_time_field(GridSpec{1u << 16, 4000.0});
  add_gaussian(f, 3.0, 200.0, 150.0);
  std::vector<double> t, it;
  for (std::size_t n = 0; n < f.size(); ++n) {
    t.push_back(f.time(n));
    it.push_back(f.intensity(n));
  }
  EXPECT_NEAR(fwhm_of(t, it), 200.0, 0.01);
  EXPECT_NEAR(*std::max_element(it.begin(), it.end()), 3.0, 1e-6);
  const auto s = spectral_decompose(f);
  std::vector<double> w, sw;
  for (std::size_t k = 0; k < s.size(); ++k) {
    w.push_back(s.omega(k));
    sw.push_back(s.amplitude[k] * s.amplitude[k]);
  }
  const double dnu = fwhm_of(w, sw) / (2.0 * units::kPi);
  EXPECT_NEAR(dnu * 200.0, 0.441, 1e-3);
  // Linear spectral phase from the 150 fs delay.
  const auto mid = s.size() / 2;
  EXPECT_NEAR((s.phase[mid + 10] - s.phase[mid]) / (10 * s.domega), -150.0, 1e-6);
}

TEST(Pixels, OnePixelPerCellIsIdentity) {
  const auto s = spectral_decompose(random_field(512, 2));
  const auto p = pixelate(s, static_cast<int>(s.size()), s.full_window());
  EXPECT_EQ(p.amplitude, s.amplitude);
  EXPECT_EQ(p.phase, s.phase);
  EXPECT_EQ(*p.pixel_count, 512);
}

TEST(Pixels, PiecewiseConstantMeansAndZeroOutside) {
  const auto s = spectral_decompose(random_field(1000, 3));
  const SpectralWindow win{s.omega(100) - 0.5 * s.domega, s.omega(899) + 0.5 * s.domega};
  const auto p = pixelate(s, 8, win);  // 100 cells per pixel
  for (std::size_t k = 0; k < 100; ++k) EXPECT_EQ(p.amplitude[k], 0.0);
  for (std::size_t k = 900; k < 1000; ++k) EXPECT_EQ(p.amplitude[k], 0.0);
  for (int b = 0; b < 8; ++b) {
    double mean = 0.0;
    for (int k = 0; k < 100; ++k) mean += s.amplitude[100 + 100 * b + k];
    mean /= 100.0;
    for (int k = 0; k < 100; ++k) {
      EXPECT_NEAR(p.amplitude[100 + 100 * b + k], mean, 1e-12);
      EXPECT_EQ(p.phase[100 + 100 * b + k], p.phase[100 + 100 * b]);
    }
  }
  EXPECT_THROW(pixelate(s, 0, win), std::domain_error);
  EXPECT_THROW(pixelate(s, 4, {0.0, 1e9}), std::domain_error);
}

TEST(Pixels, DefaultWindowScalesWithKick) {
  const auto w = default_pixel_window(200.0, 4.0);
  EXPECT_NEAR(w.omega_hi - w.omega_lo, 4.0 * 4.0 * std::log(2.0) / 200.0, 1e-15);
  EXPECT_DOUBLE_EQ(w.omega_lo, -w.omega_hi);
}

TEST(Feasibility, EnergyAndTrivialCases) {
  EXPECT_NEAR(energy_mj(1000.0, 20.0), units::kPi * 1e-3, 1e-15);  // 1 J/cm^2 on pi 1e-6 cm^2
  const GridSpec grid{1u << 14, 2000.0};
  const auto input = ftl_input(100.0, 800.0, grid);
  const auto own = feasibility_check(spectral_decompose(input), input, 10.0, 20.0);
  EXPECT_NEAR(own.required_energy_mj, own.input_energy_mj, 1e-9 * own.input_energy_mj);
  EXPECT_TRUE(own.feasible);
  EXPECT_TRUE(own.offending.empty());
  auto wide = make_time_field(grid);
  add_gaussian(wide, 4.0, 50.0, 0.0);  // broader spectrum than the input
  const auto r = feasibility_check(spectral_decompose(wide), input, 1e-9, 20.0);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.offending.empty());
  const auto empty = feasibility_check(spectral_decompose(make_time_field(grid)), input, 1.0, 20.0);
  EXPECT_EQ(empty.required_energy_mj, 0.0);
  EXPECT_THROW(feasibility_check(spectral_decompose(wide), input, 0.0, 20.0), std::domain_error);
}

TEST(Synthesis, TargetFieldAndSampledEnvelope) {
  const auto co2 = presets::co2();
  const GridSpec grid{1u << 16, 40000.0};
  const auto ramp = PulseSegment::adiabatic_ramp(142.0, reduced_time_from_fs(10000.0, co2), 0.0, Truncation::None);
  const auto kick = PulseSegment::finite_kick(gamma_from_intensity(25.0, co2), reduced_time_from_fs(200.0, co2));
  const auto f = synthesize_target_field(ramp, kick, co2, 800.0, grid);
  const auto mid = f.size() / 2;
  EXPECT_NEAR(f.time(mid), 0.0, 1e-9);
  EXPECT_NEAR(f.intensity(mid), std::pow(std::sqrt(2.5) + std::sqrt(25.0), 2), 1e-9);
  const SampledEnvelope env(f, co2);
  for (std::size_t n : {mid - 500, mid, mid + 37})
    EXPECT_NEAR(env.coupling_on(env.pieces()[0], reduced_time_from_fs(f.time(n), co2)).gamma,
                gamma_from_intensity(f.intensity(n), co2), 1e-6 * env.peak_gamma());
  EXPECT_LT(env.suggested_max_step(), reduced_time_from_fs(200.0, co2));
  EXPECT_THROW(synthesize_target_field(ramp, PulseSegment::impulsive_kick(3.0), co2, 800.0, grid), std::domain_error);
  EXPECT_THROW(synthesize_target_field(ramp, kick, co2, 800.0, GridSpec{1u << 12, 40000.0}), std::domain_error);
  EXPECT_THROW(synthesize_target_field(ramp, kick, co2, 800.0, GridSpec{1u << 16, 5000.0}), std::domain_error);
}

TEST(Pipeline, SpectralStagesWithoutSimulation) {
  ShaperConfig c;
  c.spec = presets::co2();
  c.grid = GridSpec{1u << 17, 40000.0};
  const auto r = run_shaper_pipeline(c, false);
  EXPECT_NEAR(r.spectrum.energy() / r.target.fluence(), 1.0, 1e-10);
  EXPECT_EQ(*r.shaped.pixel_count, 640);
  EXPECT_LE(r.field.fluence(), r.target.fluence() * (1.0 + 1e-9));
  EXPECT_GT(r.field.fluence(), 0.9 * r.target.fluence());
  EXPECT_GT(r.feasibility.required_energy_mj, 2.5);
  EXPECT_LT(r.feasibility.required_energy_mj, 10.0);
}

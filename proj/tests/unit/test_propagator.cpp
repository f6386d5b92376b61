#include <gtest/gtest.h>

#include "../oracles.hpp"

using namespace rotalign;

TEST(Kick, MatchesDenseExponential) {
  for (int m : {0, 1, 4})
    for (double zeta : {0.3, 11.0, 22.0}) {
      const BasisSpec basis{30, m};
      KickCache cache;
      Eigen::VectorXcd psi = Eigen::VectorXcd::Random(basis.size());
      psi.normalize();
      const auto got = apply_impulsive_kick(Wavepacket{basis, psi}, zeta, cache);
      const Eigen::VectorXcd want = oracle::dense_kick(basis, zeta) * psi;
      EXPECT_LT((got.amplitudes - want).cwiseAbs().maxCoeff(), 1e-10) << "m=" << m << " zeta=" << zeta;
    }
}

TEST(Kick, PreservesParityAndNorm) {
  const BasisSpec basis{40, 0};
  const auto w = apply_impulsive_kick(Wavepacket::basis_state(basis, 0), 11.0);
  EXPECT_NEAR(w.norm(), 1.0, 1e-13);
  for (int j = 1; j <= 40; j += 2) EXPECT_EQ(w.population(j), 0.0);
  EXPECT_THROW(apply_impulsive_kick(w, -1.0), std::domain_error);
}

TEST(Kick, CacheIsBounded) {
  KickCache cache;
  cache.set_capacity(3 * 41 * 41 * sizeof(Complex));
  for (int k = 1; k <= 10; ++k) cache.get(BasisSpec{40, 0}, 0.5 * k);
  EXPECT_LE(cache.size(), 3u);
  EXPECT_GE(cache.size(), 1u);
}

TEST(FreeEvolution, PhasesAndRevival) {
  const BasisSpec basis{20, 0};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Random(basis.size());
  psi.normalize();
  const Wavepacket w{basis, psi};
  const auto back = free_evolve(w, units::kRotationalPeriod, 0.0);
  EXPECT_LT((back.amplitudes - psi).cwiseAbs().maxCoeff(), 1e-9);
  const auto half = free_evolve(w, 0.3, 0.0);
  for (int i = 0; i < basis.size(); ++i) {
    const int j = basis.j_at(i);
    EXPECT_NEAR(std::abs(half.amplitudes[i] - psi[i] * std::polar(1.0, -0.3 * j * (j + 1))), 0.0, 1e-12);
  }
}

TEST(Propagate, MatchesDenseTimeOrderedProduct) {
  // Ramp + finite kick + dipole coupling; nothing is impulsive.
  PulseProgram p;
  p.segments.push_back(PulseSegment::adiabatic_ramp(20.0, 0.3, 0.0, Truncation::None));
  p.segments.push_back(PulseSegment::finite_kick(60.0, 0.05, 0.1));
  p.segments.push_back(PulseSegment::half_cycle_pulse(8.0, 0.08, -0.2));
  p.t_start = -1.2;
  p.t_end = 1.2;
  p.validate();
  for (int m : {0, 2}) {
    const BasisSpec basis{8, m};
    const auto psi0 = Wavepacket::basis_state(basis, std::abs(m) + 1);
    PropagationSettings s;
    s.tolerance = 1e-10;
    const auto got = propagate_to(psi0, p, s, p.t_start, p.t_end, 0.002);
    const auto want = oracle::magnus_propagate(psi0.amplitudes, basis, p, p.t_start, p.t_end, 24000, 0.002);
    EXPECT_LT((got.amplitudes - want).cwiseAbs().maxCoeff(), 1e-6) << "m=" << m;
  }
}

TEST(Propagate, ConservesNorm) {
  const auto p = make_combined_program(142.0, 2.0 * units::kPi, PulseSegment::impulsive_kick(11.0));
  PropagationSettings s;
  const auto samples = propagate_samples(Wavepacket::basis_state(BasisSpec{64, 0}, 0), p, s, {-1.0, 0.5});
  ASSERT_FALSE(samples.empty());
  double worst = 0.0;
  for (const auto& x : samples) {
    worst = std::max(worst, std::abs(x.state.norm() - 1.0));
  }
  EXPECT_LT(worst, 1e-8);
  EXPECT_DOUBLE_EQ(samples.front().time, -1.0);
}

TEST(Propagate, ZeroFieldIsFreeEvolution) {
  PulseProgram p;
  p.t_start = 0.0;
  p.t_end = 2.0;
  const BasisSpec basis{10, 1};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Random(basis.size());
  psi.normalize();
  const auto got = propagate_to(Wavepacket{basis, psi}, p, PropagationSettings{}, 0.0, 1.7, 0.01);
  const auto want = free_evolve(Wavepacket{basis, psi}, 1.7, 0.01);
  EXPECT_LT((got.amplitudes - want.amplitudes).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, RejectsBadInput) {
  PulseProgram p;
  p.t_start = 0.0;
  p.t_end = 1.0;
  const auto psi = Wavepacket::basis_state(BasisSpec{4, 0}, 0);
  PropagationSettings s;
  EXPECT_THROW(propagate_to(psi, p, s, 0.0, 2.0), std::domain_error);
  EXPECT_THROW(propagate_to(Wavepacket{psi.basis, 2.0 * psi.amplitudes}, p, s, 0.0, 1.0), std::domain_error);
  s.tolerance = 1e-3;
  EXPECT_THROW(propagate_to(psi, p, s, 0.0, 1.0), std::domain_error);
}

#pragma once

// Independent reference computations for the tests: quadrature matrix
// elements, dense matrix exponentials, a dense Magnus propagator and a
// plain least-squares line.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "rotalign/rotalign.hpp"

namespace oracle {

using rotalign::Complex;

// <J m| cos^p |J' m> = 2 pi int_{-1}^{1} Y_J^m Y_J'^m x^p dx
inline double legendre_element(int j, int m, int jp, int power) {
  auto f = [&](double x) {
    const double th = std::acos(x);
    return boost::math::spherical_harmonic_r<double>(j, m, th, 0.0) *
           boost::math::spherical_harmonic_r<double>(jp, m, th, 0.0) * std::pow(x, power);
  };
  return 2.0 * rotalign::units::kPi * boost::math::quadrature::gauss<double, 64>::integrate(f, -1.0, 1.0);
}

inline Eigen::MatrixXcd dense_kick(const rotalign::BasisSpec& basis, double zeta) {
  const Eigen::MatrixXcd c = rotalign::cos2_operator(basis).to_dense().cast<Complex>();
  const Eigen::MatrixXcd a = Complex(0.0, 2.0 * zeta) * c;
  return a.exp();
}

inline Eigen::MatrixXcd dense_hamiltonian(const rotalign::BasisSpec& basis, const rotalign::PulseProgram& p, double t,
                                          double d_over_b) {
  const auto c = rotalign::envelope_eval(p, t);
  return rotalign::build_hamiltonian(basis, c.gamma, c.omega_mu, d_over_b).to_dense().cast<Complex>();
}

// Fourth-order Magnus steps with fixed h on [t0, t1].
inline Eigen::VectorXcd magnus_propagate(const Eigen::VectorXcd& psi0, const rotalign::BasisSpec& basis,
                                         const rotalign::PulseProgram& p, double t0, double t1, int steps,
                                         double d_over_b = 0.0) {
  const double h = (t1 - t0) / steps;
  const double s3 = std::sqrt(3.0);
  Eigen::VectorXcd psi = psi0;
  const Complex mi(0.0, -1.0);
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const auto h1 = dense_hamiltonian(basis, p, t + h * (0.5 - s3 / 6.0), d_over_b);
    const auto h2 = dense_hamiltonian(basis, p, t + h * (0.5 + s3 / 6.0), d_over_b);
    const Eigen::MatrixXcd omega = mi * (0.5 * h) * (h1 + h2) + (s3 / 12.0) * h * h * (h1 * h2 - h2 * h1);
    psi = omega.exp() * psi;
  }
  return psi;
}

// Least-squares line by the closed-form sums.
inline std::pair<double, double> line_fit(const std::vector<std::pair<double, double>>& pts) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

}  // namespace oracle

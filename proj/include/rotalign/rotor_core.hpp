#pragma once

// Linear rigid rotor in the |J, M> basis at fixed M.
//
// Matrix elements of cos^2(theta) and cos(theta) come from the closed-form
// spherical-harmonic recursions
//
//   cos(theta) |J M> = a(J+1,M) |J+1 M> + a(J,M) |J-1 M>,
//   a(J,M) = sqrt((J^2 - M^2) / ((2J - 1)(2J + 1))),
//
// applied twice for cos^2. The dressed Hamiltonian in units of B is
//
//   H/B = J(J+1) - (D/B) J^2 (J+1)^2 - gamma(t) cos^2(theta) - w_mu(t) cos(theta),
//
// a symmetric band matrix of half-bandwidth 2 (1 when gamma = 0).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rotalign/units.hpp"

namespace rotalign {

using Complex = std::complex<double>;

struct RotorSpec {
  double rotational_constant_b = 1.0;     // cm^-1
  double centrifugal_constant_d = 0.0;    // cm^-1
  double polarizability_anisotropy = 0.0; // angstrom^3
  double dipole_moment = 0.0;             // debye
  double spin_weight_even = 1.0;
  double spin_weight_odd = 1.0;
  std::string label;

  void validate() const {
    if (!(rotational_constant_b > 0.0))
      throw std::domain_error("RotorSpec '" + label + "': rotational constant must be positive");
    if (centrifugal_constant_d < 0.0)
      throw std::domain_error("RotorSpec '" + label + "': centrifugal constant must be >= 0");
    if (dipole_moment < 0.0)
      throw std::domain_error("RotorSpec '" + label + "': dipole moment must be >= 0");
    if (spin_weight_even < 0.0 || spin_weight_odd < 0.0 ||
        !(spin_weight_even + spin_weight_odd > 0.0))
      throw std::domain_error("RotorSpec '" + label + "': spin weights must be >= 0 with a positive sum");
  }

  double d_over_b() const { return centrifugal_constant_d / rotational_constant_b; }

  double rotational_period_seconds() const {
    return units::rotational_period_seconds(rotational_constant_b);
  }

  double spin_weight(int j) const { return (j % 2 == 0) ? spin_weight_even : spin_weight_odd; }
};

/// Truncated rotational basis {|J, m> : |m| <= J <= j_max}.
struct BasisSpec {
  int j_max = 64;
  int m = 0;

  void validate() const {
    if (j_max < 0) throw std::domain_error("BasisSpec: j_max must be >= 0");
    if (std::abs(m) > j_max) throw std::domain_error("BasisSpec: |m| must not exceed j_max");
  }

  int j_min() const { return std::abs(m); }
  int size() const { return j_max - std::abs(m) + 1; }
  int index_of(int j) const { return j - std::abs(m); }
  int j_at(int index) const { return std::abs(m) + index; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

namespace detail {

inline void check_quantum_numbers(int j, int m, int j_prime) {
  if (j < 0 || j_prime < 0)
    throw std::domain_error("matrix element: J must be non-negative");
  if (std::abs(m) > j || std::abs(m) > j_prime)
    throw std::domain_error("matrix element: |m| exceeds J");
}

// Coefficient a(J, M) of the cos(theta) ladder; zero for J <= |M|.
inline double ladder(int j, int m) {
  if (j <= std::abs(m)) return 0.0;
  const double jj = j;
  const double mm = m;
  return std::sqrt((jj * jj - mm * mm) / ((2.0 * jj - 1.0) * (2.0 * jj + 1.0)));
}

}  // namespace detail

/// <j' m| cos(theta) |j m>; nonzero only for j' = j +- 1.
inline double cos_matrix_element(int j, int m, int j_prime) {
  detail::check_quantum_numbers(j, m, j_prime);
  if (j_prime == j + 1) return detail::ladder(j + 1, m);
  if (j_prime == j - 1) return detail::ladder(j, m);
  return 0.0;
}

/// <j' m| cos^2(theta) |j m>; nonzero only for j' in {j, j +- 2}.
inline double cos2_matrix_element(int j, int m, int j_prime) {
  detail::check_quantum_numbers(j, m, j_prime);
  if (j_prime == j) {
    const double up = detail::ladder(j + 1, m);
    const double down = detail::ladder(j, m);
    return up * up + down * down;
  }
  const int lo = std::min(j, j_prime);
  if (std::abs(j_prime - j) == 2) return detail::ladder(lo + 1, m) * detail::ladder(lo + 2, m);
  return 0.0;
}

/// Rotational energy in units of B, with the centrifugal correction.
inline double rotational_energy(int j, double d_over_b) {
  if (j < 0) throw std::domain_error("rotational_energy: J must be >= 0");
  if (d_over_b < 0.0) throw std::domain_error("rotational_energy: D/B must be >= 0");
  const double k = static_cast<double>(j) * (j + 1);
  return k - d_over_b * k * k;
}

/// Real symmetric band matrix with half-bandwidth <= 2, stored by diagonals.
struct SymmetricBand {
  Eigen::VectorXd diag;
  Eigen::VectorXd off1;  // (i, i+1)
  Eigen::VectorXd off2;  // (i, i+2)

  SymmetricBand() = default;
  explicit SymmetricBand(int n)
      : diag(Eigen::VectorXd::Zero(n)),
        off1(Eigen::VectorXd::Zero(std::max(n - 1, 0))),
        off2(Eigen::VectorXd::Zero(std::max(n - 2, 0))) {}

  int size() const { return static_cast<int>(diag.size()); }

  Eigen::MatrixXd to_dense() const {
    const int n = size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = off1[i];
    for (int i = 0; i + 2 < n; ++i) a(i, i + 2) = a(i + 2, i) = off2[i];
    return a;
  }

  // out = A x
  template <typename In, typename Out>
  void apply(const In& x, Out& out) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
      auto acc = diag[i] * x[i];
      if (i + 1 < n) acc += off1[i] * x[i + 1];
      if (i >= 1) acc += off1[i - 1] * x[i - 1];
      if (i + 2 < n) acc += off2[i] * x[i + 2];
      if (i >= 2) acc += off2[i - 2] * x[i - 2];
      out[i] = acc;
    }
  }

  // <x| A |x> for a complex vector; imaginary part vanishes by symmetry.
  double quadratic_form(const Eigen::VectorXcd& x) const {
    const int n = size();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += diag[i] * std::norm(x[i]);
    for (int i = 0; i + 1 < n; ++i) acc += 2.0 * off1[i] * std::real(std::conj(x[i]) * x[i + 1]);
    for (int i = 0; i + 2 < n; ++i) acc += 2.0 * off2[i] * std::real(std::conj(x[i]) * x[i + 2]);
    return acc;
  }
};

inline SymmetricBand cos2_operator(const BasisSpec& basis) {
  basis.validate();
  SymmetricBand op(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const int j = basis.j_at(i);
    op.diag[i] = cos2_matrix_element(j, basis.m, j);
    if (i + 2 < basis.size()) op.off2[i] = cos2_matrix_element(j, basis.m, j + 2);
  }
  return op;
}

inline SymmetricBand cos_operator(const BasisSpec& basis) {
  basis.validate();
  SymmetricBand op(basis.size());
  for (int i = 0; i + 1 < basis.size(); ++i) {
    const int j = basis.j_at(i);
    op.off1[i] = cos_matrix_element(j, basis.m, j + 1);
  }
  return op;
}

inline Eigen::VectorXd rotational_energies(const BasisSpec& basis, double d_over_b) {
  basis.validate();
  Eigen::VectorXd e(basis.size());
  for (int i = 0; i < basis.size(); ++i) e[i] = rotational_energy(basis.j_at(i), d_over_b);
  return e;
}

/// H/B at instantaneous couplings gamma = E^2 da / 4B and w_mu = mu E / B.
inline SymmetricBand build_hamiltonian(const BasisSpec& basis, double gamma_inst,
                                       double omega_mu_inst, double d_over_b) {
  basis.validate();
  if (gamma_inst < 0.0) throw std::domain_error("build_hamiltonian: gamma must be >= 0");
  if (omega_mu_inst < 0.0) throw std::domain_error("build_hamiltonian: omega_mu must be >= 0");
  SymmetricBand h(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const int j = basis.j_at(i);
    h.diag[i] = rotational_energy(j, d_over_b) - gamma_inst * cos2_matrix_element(j, basis.m, j);
    if (i + 1 < basis.size())
      h.off1[i] = -omega_mu_inst * cos_matrix_element(j, basis.m, j + 1);
    if (i + 2 < basis.size())
      h.off2[i] = -gamma_inst * cos2_matrix_element(j, basis.m, j + 2);
  }
  return h;
}

/// Complex amplitudes c_J over a fixed-m basis.
struct Wavepacket {
  BasisSpec basis;
  Eigen::VectorXcd amplitudes;

  static Wavepacket basis_state(const BasisSpec& basis, int j) {
    basis.validate();
    if (j < basis.j_min() || j > basis.j_max)
      throw std::domain_error("Wavepacket: J=" + std::to_string(j) + " outside basis");
    Wavepacket w{basis, Eigen::VectorXcd::Zero(basis.size())};
    w.amplitudes[basis.index_of(j)] = 1.0;
    return w;
  }

  double norm() const { return amplitudes.norm(); }

  double population(int j) const {
    if (j < basis.j_min() || j > basis.j_max) return 0.0;
    return std::norm(amplitudes[basis.index_of(j)]);
  }

  /// Copy into a larger (or equal) basis with the same m.
  Wavepacket embedded(int j_max) const {
    if (j_max < basis.j_max) throw std::domain_error("Wavepacket::embedded: basis can only grow");
    Wavepacket w{BasisSpec{j_max, basis.m}, Eigen::VectorXcd::Zero(j_max - basis.j_min() + 1)};
    w.amplitudes.head(amplitudes.size()) = amplitudes;
    return w;
  }
};

}  // namespace rotalign

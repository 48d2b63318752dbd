#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>

#include "socdw/grid.hpp"

namespace socdw {

/// Two-component wave function on the spatial grid. up/down are the
/// sigma_z = +1 / -1 pseudo-spin components.
struct SpinorField {
  Eigen::VectorXcd up;
  Eigen::VectorXcd down;

  int size() const { return static_cast<int>(up.size()); }
  static SpinorField zero(int n) { return {Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)}; }
};

std::complex<double> inner(const SpinorField& a, const SpinorField& b, double dx);
double norm(const SpinorField& psi, double dx);
SpinorField normalized(const SpinorField& psi, double dx);

/// <sigma_x>/2, <sigma_y>/2, <sigma_z>/2 of a (near) unit-norm field.
std::array<double, 3> spin_expectation(const SpinorField& psi, double dx);

/// Probability of x < 0: trapezoidal quadrature over the left half line with
/// half weight at x = 0, normalized by the total norm. An even density gives
/// exactly 1/2.
double left_probability(const SpinorField& psi, const Grid& grid);

// Symmetries of the static Hamiltonian. P is parity (x -> -x on the periodic
// grid), T is complex conjugation. All three square to the identity and
// together with it form a Klein four-group.
SpinorField apply_pt(const SpinorField& psi);        // psi(x) -> psi*(-x)
SpinorField apply_sigmax_t(const SpinorField& psi);  // psi -> sigma_x psi*
SpinorField apply_sigmax_p(const SpinorField& psi);  // psi(x) -> sigma_x psi(-x)

/// Spectral resampling between symmetric grids of the same extent (zero
/// padding in momentum space); exact for fields band-limited to the coarser
/// grid's momenta.
SpinorField resample(const SpinorField& psi, const Grid& from, const Grid& to);

}  // namespace socdw

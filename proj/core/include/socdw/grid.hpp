#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "socdw/errors.hpp"

namespace socdw {

struct GridSpec {
  double x_min = -12.0;
  double x_max = 12.0;
  int n_points = 1024;

  void validate() const;  // throws ConfigError
};

/// Uniform grid on [x_min, x_max) with the momentum samples of the discrete
/// Fourier transform in FFT order. The domain is symmetric about the origin,
/// so the parity map j -> (n - j) mod n sends grid points to grid points.
struct Grid {
  Eigen::VectorXd x;  // x_j = x_min + j*dx
  Eigen::VectorXd k;  // 0, dk, ..., k_nyq, ..., -dk  (FFT order)
  double dx = 0.0;
  double length = 0.0;
  int n = 0;

  int origin_index() const { return n / 2; }  // x = 0
};

Grid build_grid(const GridSpec& spec);

struct TrapParams {
  double U = 12.0;         // well depth
  double a = 0.5;          // well width
  double d = 2.5;          // well separation
  double omega_rabi = 1.0; // half the Zeeman splitting
  double gamma = 0.0;      // spin-orbit coupling strength
  double f = 0.0;          // depth-modulation amplitude
  double omega_mod = 1.0;  // depth-modulation frequency

  /// Throws ConfigError on hard violations; returns soft warnings.
  std::vector<std::string> validate() const;
};

/// Super-Gaussian single well, -U exp(-x^6/a^6).
double single_well(double x, double U, double a);

/// v_static = V_- + V_+ (even), v_mod = -V_- + V_+ (odd), with
/// V_+- (x) = single_well(x -+ d/2). The instantaneous trap is
/// v_static + f sin(w t) v_mod = (1 - f sin) V_- + (1 + f sin) V_+.
struct PotentialPair {
  Eigen::VectorXd v_static;
  Eigen::VectorXd v_mod;
};

PotentialPair double_well(const Grid& grid, const TrapParams& trap);

}  // namespace socdw

#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <vector>

#include "socdw/stationary.hpp"

namespace socdw {

/// The reduced model i dc/dt = (H0 + Hdelta) c + f sin(w t) V c in the
/// ordering (c1-, c1+, c2-, c2+).
struct FourModeSystem {
  Eigen::Vector4d h0_diag;   // Delta * (-1,-1,1,1)
  Eigen::Matrix4d h_delta;   // block diag(delta1 sx, delta2 sx)
  Eigen::Matrix4d v_mat;     // [[v1 sz, u sz + i w sy], [u sz - i w sy, v2 sz]]
  double f = 0.0;
  double omega = 1.0;

  Eigen::Matrix4d static_part() const {
    Eigen::Matrix4d h = h_delta;
    h.diagonal() += h0_diag;
    return h;
  }
  double period() const { return 2.0 * M_PI / omega; }
};

FourModeSystem assemble(const FourModeCoefficients& coeffs, double f, double omega);

struct ModeTrajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector4cd> c;
  double max_norm_drift = 0.0;
};

/// Classic explicit RK4; throws NumericalError if the norm drifts beyond 1e-6.
ModeTrajectory integrate_modes(const Eigen::Vector4cd& c0, const FourModeSystem& sys,
                               double t_final, double sample_dt = 0.1);

/// Time-ordered propagator over one drive period, with its unitarity defect.
struct Monodromy {
  Eigen::Matrix4cd m;
  double unitarity_residual = 0.0;
};
Monodromy monodromy(const FourModeSystem& sys);

struct FloquetResult {
  std::array<double, 4> phases{};       // lambda = -arg(mu) in (-pi, pi]
  Eigen::Matrix4cd vectors;             // columns follow phases
  double unitarity_residual = 0.0;
  bool degenerate = false;              // eigenvalue collision; tracking ambiguous
};

FloquetResult floquet_phases(const Monodromy& m);

/// Reorders `cur` in place to maximize eigenvector overlap with `prev`
/// (brute force over the 24 permutations).
void match_branches(const Eigen::Matrix4cd& prev_vectors, FloquetResult& cur);

enum class CrossingClass { lower_pair, upper_pair, inter_pair };

struct Crossing {
  double omega = 0.0;
  int branch_a = 0;
  int branch_b = 0;
  CrossingClass cls = CrossingClass::lower_pair;
};

/// Frequencies where two tracked Floquet branches meet (circle distance -> 0),
/// located by sign change plus bisection, with near-tangential minima below
/// 1e-4 accepted as crossings.
std::vector<Crossing> crossing_frequencies(const FourModeCoefficients& coeffs, double f,
                                           double omega_min, double omega_max,
                                           double resolution = 5e-4);

/// Parametric resonance frequencies Delta/n, n = 1..n_max.
std::vector<double> resonance_frequencies(const FourModeCoefficients& coeffs, int n_max);

/// Averaged small-oscillation frequencies at the principal resonance,
/// +-[delta2 +- sqrt(delta2^2 + f^2 w^2)]/2, sorted ascending.
std::array<double, 4> averaged_spectrum(const FourModeCoefficients& coeffs, double f);

/// Running time average of |c1-|^2 + |c2-|^2 along a mode trajectory.
std::vector<double> p_left_fourmode(const ModeTrajectory& traj);

}  // namespace socdw

#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "socdw/grid.hpp"
#include "socdw/spinor.hpp"
#include "socdw/stationary.hpp"

namespace socdw {

struct PropagationConfig {
  double dt = 0.0025;
  double t_final = 1000.0;
  int sample_every = 40;
  double g = 0.0;  // mean-field nonlinearity

  /// Sanity bounds; the kinetic phase bound uses the trap's occupied
  /// momentum scale 3*sqrt(2U) rather than the grid Nyquist, since the
  /// exact exponential kinetic step has no stability limit of its own.
  void validate(const TrapParams& trap) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norm;
  std::vector<double> p_left;
  std::vector<double> p_left_avg;
  std::vector<std::array<double, 3>> spins;
  // Filled only when evolve() was given a stationary set to project on.
  std::vector<std::array<std::complex<double>, 4>> mode_amplitudes;
  std::vector<double> continuum_residual;

  bool has_modes() const { return !mode_amplitudes.empty(); }
};

/// Cumulative trapezoidal mean of p(t'): P(t) = (1/t) int_0^t p dt'.
std::vector<double> running_time_average(const std::vector<double>& times,
                                         const std::vector<double>& p);

struct ModeAmplitudes {
  std::array<std::complex<double>, 4> c{};  // c_{1-}, c_{1+}, c_{2-}, c_{2+}
  double continuum_residual = 0.0;          // 1 - sum |c|^2
};

/// c_{ia}(t) = exp(+i E0 t) <ia|psi> against the set's well basis.
ModeAmplitudes mode_amplitudes(const SpinorField& psi, const StationarySet& modes, double t);

/// Strang split-step propagator for
///   i dPsi/dt = [p^2/2 - gamma sigma_z p + Omega sigma_x + V
///                + f sin(w t) Vmod + g (Psi^dag Psi)] Psi.
/// Momentum half steps apply the exact kinetic phase per spin component;
/// the position step applies the scalar potential phase (modulation
/// evaluated at the step midpoint, density frozen at the step start)
/// together with the exact sigma_x rotation, which commutes with it.
///
/// One instance per thread: it owns FFT plans and work buffers.
class Propagator {
 public:
  Propagator(const Grid& grid, const TrapParams& trap, const PropagationConfig& cfg);
  ~Propagator();
  Propagator(const Propagator&) = delete;
  Propagator& operator=(const Propagator&) = delete;

  /// One Strang step from t to t + dt.
  void step(SpinorField& psi, double t);

  /// Propagates to cfg.t_final, sampling every cfg.sample_every steps
  /// (t = 0 included). If `modes` is given, amplitudes c_{ia}(t) =
  /// exp(i E0 t) <ia|psi> and the continuum residual 1 - sum |c|^2 are
  /// recorded; the set must live on the propagation grid.
  Trajectory evolve(const SpinorField& psi0, const StationarySet* modes = nullptr);

  const Grid& grid() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// c1 |1-> + c2 |2->, normalized. The set must live on the target grid.
SpinorField superposition_input(const StationarySet& set, double c1, double c2);

}  // namespace socdw

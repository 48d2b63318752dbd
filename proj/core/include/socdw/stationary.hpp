#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "socdw/grid.hpp"
#include "socdw/spinor.hpp"

namespace socdw {

/// One bound eigenpair of the static Hamiltonian. pair/member follow the
/// energy ordering e11 <= e12 < e21 <= e22 < 0 (pair = lower/upper doublet,
/// member = lower/upper level within the doublet).
struct EigenState {
  double energy = 0.0;
  SpinorField field;
  int pair = 1;
  int member = 1;
  // After phase fixing the state is PT-invariant; the antiunitary sigma_x T
  // signature s2 = <psi|sigma_x psi*> is then an intrinsic +-1. Within each
  // doublet the two members carry opposite signature.
  double s2 = 1.0;
  double sym_defect = 0.0;  // max_n ||alpha_n psi - s_n psi||
};

/// The four bound states plus the localized well basis |1->,|1+>,|2->,|2+>.
/// Right states are the sigma_x P images of the left ones and pair phases
/// are fixed so the PT swap alpha_1 |i-+> = |i+-> holds with coefficient +1;
/// swap_defect records the residual of that relation.
struct StationarySet {
  Grid grid;
  std::array<EigenState, 4> states;
  std::array<SpinorField, 4> well_basis;
  std::array<double, 2> swap_defect{0.0, 0.0};
  std::array<double, 2> left_mass{0.0, 0.0};
  double E0 = 0.0;
  std::vector<std::string> warnings;

  const SpinorField& mode(int pair, bool right) const {
    return well_basis[2 * (pair - 1) + (right ? 1 : 0)];
  }
};

/// Scalars of the reduced four-mode model, extracted from the energies and
/// from the 4x4 overlap matrix of the modulation potential in the well basis.
struct FourModeCoefficients {
  double Delta = 0.0;   // (e22 + e21 - e12 - e11)/4
  double delta1 = 0.0;  // (e12 - e11)/2
  double delta2 = 0.0;  // (e22 - e21)/2
  double v1 = 0.0;      // <1-|(V+ - V-)|1->
  double v2 = 0.0;      // <2-|(V+ - V-)|2->
  double u = 0.0;       // <1-|(V+ - V-)|2->
  double w = 0.0;       // <1-|(V- - V+)|2+>
  double E0 = 0.0;
  double structure_residual = 0.0;
  Eigen::Matrix4d overlap = Eigen::Matrix4d::Zero();  // raw <ia|Vmod|jb>
};

/// Dense 2n x 2n Hermitian matrix of p^2/2 - gamma sigma_z p + Omega sigma_x
/// + diag(v), with spectral (Fourier) differentiation. Component blocks are
/// stacked [up; down].
Eigen::MatrixXcd discretize_hamiltonian(const Grid& grid, const TrapParams& trap,
                                        const Eigen::VectorXd& v);

double hermiticity_defect(const Eigen::MatrixXcd& H);

/// Lowest four eigenpairs; throws NumericalError unless all lie below the
/// free-dispersion continuum edge with eigen-residual below 1e-8.
std::array<EigenState, 4> bound_states(const Eigen::MatrixXcd& H, const Grid& grid,
                                       const TrapParams& trap);

/// Lowest `count` eigenvalues of the discretized Hamiltonian (no vectors).
Eigen::VectorXd bound_energies(const Grid& grid, const TrapParams& trap, int count = 4);

/// Fixes phases so every state is PT-invariant (||alpha_1 psi - psi|| ~ 0)
/// and records the sigma_x T signature. A doublet closer than
/// 1e-6 * Delta is first rotated to diagonalize sigma_x P inside the
/// degenerate eigenspace.
void symmetry_adapt(std::array<EigenState, 4>& states, const Grid& grid);

struct WellBasis {
  std::array<SpinorField, 4> modes;
  std::array<double, 2> swap_defect{0.0, 0.0};
  std::array<double, 2> left_mass{0.0, 0.0};
  std::vector<std::string> warnings;
};

/// |i-> is the left-localized unit combination of the adapted doublet
/// members, |i+> its sigma_x P mirror.
WellBasis make_well_basis(const std::array<EigenState, 4>& adapted, const Grid& grid);

/// bound_states + symmetry_adapt + make_well_basis for the trap's potential.
StationarySet stationary_set(const Grid& grid, const TrapParams& trap);

/// Spectrally interpolates all fields onto another grid of the same extent
/// (energies and labels are kept). Used to reuse a coarse-grid eigensolve on
/// a finer propagation grid.
StationarySet resample_set(const StationarySet& set, const Grid& to);

FourModeCoefficients four_mode_coefficients(const StationarySet& set,
                                            const PotentialPair& potentials);

struct GapPoint {
  double gamma = 0.0;
  double lower_gap = 0.0;  // |e12 - e11|
  double upper_gap = 0.0;  // |e22 - e21|
};

/// Doublet splittings versus SOC strength; parallel over gamma values.
std::vector<GapPoint> gap_scan(const std::vector<double>& gammas, TrapParams trap,
                               const GridSpec& spec, int workers = 0);

/// Golden-section search for the gamma minimizing one doublet gap
/// (pair = 1 lower, 2 upper).
double refine_gap_minimum(TrapParams trap, const GridSpec& spec, int pair, double gamma_lo,
                          double gamma_hi, double tol = 1e-3);

}  // namespace socdw

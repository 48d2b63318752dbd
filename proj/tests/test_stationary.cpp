#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "socdw/grid.hpp"
#include "socdw/spinor.hpp"
#include "socdw/stationary.hpp"

using namespace socdw;
using std::complex;

namespace {

Grid grid512() {
  GridSpec spec;
  spec.n_points = 512;
  return build_grid(spec);
}

// Test-only oracle: 4th-order finite differences for the scalar double well
// -psi''/2 + V psi = E psi. Independent of the spectral discretization.
Eigen::VectorXd scalar_fd_levels(const TrapParams& trap, int n, int count) {
  const double L = 24.0, dx = L / n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  const double c0 = 5.0 / 2.0, c1 = -4.0 / 3.0, c2 = 1.0 / 12.0;
  for (int j = 0; j < n; ++j) {
    const double x = -12.0 + j * dx;
    H(j, j) = 0.5 * c0 / (dx * dx) + single_well(x - trap.d / 2, trap.U, trap.a) +
              single_well(x + trap.d / 2, trap.U, trap.a);
    H(j, (j + 1) % n) += 0.5 * c1 / (dx * dx);
    H(j, (j - 1 + n) % n) += 0.5 * c1 / (dx * dx);
    H(j, (j + 2) % n) += 0.5 * c2 / (dx * dx);
    H(j, (j - 2 + n) % n) += 0.5 * c2 / (dx * dx);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(count);
}

}  // namespace

TEST_CASE("discretized Hamiltonian is Hermitian and acts exactly on plane waves") {
  const Grid g = grid512();
  TrapParams trap;
  trap.gamma = 0.8;
  trap.omega_rabi = 0.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.n);
  const Eigen::MatrixXcd H = discretize_hamiltonian(g, trap, zero);
  CHECK(hermiticity_defect(H) < 1e-12);

  const int m = 37;  // any non-Nyquist mode
  const double k = g.k[m];
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * g.n);
  for (int j = 0; j < g.n; ++j) psi[j] = std::exp(complex<double>(0.0, k * g.x[j]));
  const Eigen::VectorXcd hpsi = H * psi;
  const double expected = 0.5 * k * k - trap.gamma * k;
  CHECK((hpsi - expected * psi).norm() / psi.norm() < 1e-10);
}

TEST_CASE("gamma=0 decouples into two scalar problems shifted by the Zeeman term") {
  const Grid g = grid512();
  TrapParams trap;
  trap.gamma = 0.0;
  const StationarySet set = stationary_set(g, trap);
  // Pair centers split by exactly 2 Omega, equal intra-pair gaps.
  CHECK(set.states[2].energy - set.states[0].energy ==
        doctest::Approx(2.0 * trap.omega_rabi).epsilon(1e-10));
  CHECK(set.states[3].energy - set.states[2].energy ==
        doctest::Approx(set.states[1].energy - set.states[0].energy).epsilon(1e-8));

  // Scalar finite-difference oracle: same splitting, energies shifted by -Omega.
  const Eigen::VectorXd fd = scalar_fd_levels(trap, 3000, 2);
  CHECK(set.states[0].energy ==
        doctest::Approx(fd[0] - trap.omega_rabi).epsilon(5e-7));
  const double fd_split = fd[1] - fd[0];
  CHECK(set.states[1].energy - set.states[0].energy ==
        doctest::Approx(fd_split).epsilon(2e-3));
  const auto s = spin_expectation(set.states[0].field, g.dx);
  CHECK(s[0] == doctest::Approx(-0.5).epsilon(1e-9));
}

// Frozen by the grid-doubling convergence oracle (n = 512 and n = 1024 agree
// to ~3e-12; values recorded from the n = 512 run).
TEST_CASE("bound state energies at gamma=0.8 match the convergence oracle") {
  const Grid g = grid512();
  TrapParams trap;
  trap.gamma = 0.8;
  const StationarySet set = stationary_set(g, trap);
  const double frozen[4] = {-10.312669364250, -10.312647385898, -8.502246304007,
                            -8.497779355950};
  for (int i = 0; i < 4; ++i) {
    CHECK(set.states[i].energy == doctest::Approx(frozen[i]).epsilon(1e-9));
    CHECK(set.states[i].energy < 0.0);
    CHECK(norm(set.states[i].field, g.dx) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(set.states[0].energy <= set.states[1].energy);
  CHECK(set.states[1].energy < set.states[2].energy);
  CHECK(set.states[2].energy <= set.states[3].energy);
}

TEST_CASE("eigenvalues are stable under grid doubling") {
  TrapParams trap;
  trap.gamma = 0.8;
  GridSpec spec;
  spec.n_points = 512;
  const Eigen::VectorXd coarse = bound_energies(build_grid(spec), trap, 4);
  spec.n_points = 1024;
  const Eigen::VectorXd fine = bound_energies(build_grid(spec), trap, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(coarse[i] - fine[i]) < 1e-8);
}

TEST_CASE("shallow trap reports insufficient bound states") {
  GridSpec spec;
  spec.n_points = 256;
  TrapParams trap;
  trap.U = 0.05;
  CHECK_THROWS_AS(bound_energies(build_grid(spec), trap, 4), NumericalError);
}

TEST_CASE("symmetry adaptation: PT-invariant states with intrinsic signature pattern") {
  const Grid g = grid512();
  TrapParams trap;
  trap.gamma = 0.8;
  const StationarySet set = stationary_set(g, trap);
  for (const EigenState& st : set.states) {
    CHECK(st.sym_defect < 1e-6);
    CHECK(std::abs(std::abs(st.s2) - 1.0) < 1e-6);
    const auto s = spin_expectation(st.field, g.dx);
    CHECK(std::abs(s[1]) < 1e-6);
    CHECK(std::abs(s[2]) < 1e-6);
  }
  // One member of each doublet carries signature -1 (localized combinations
  // could not exist otherwise).
  CHECK(set.states[0].s2 * set.states[1].s2 == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(set.states[2].s2 * set.states[3].s2 == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("well basis: localization, orthonormality, symmetry swaps") {
  const Grid g = grid512();
  TrapParams trap;
  trap.gamma = 0.8;
  const StationarySet set = stationary_set(g, trap);

  CHECK(set.left_mass[0] > 0.99);
  CHECK(set.left_mass[1] > 0.99);
  CHECK(left_probability(set.mode(1, false), g) > 0.99);
  CHECK(left_probability(set.mode(1, true), g) < 0.01);

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const complex<double> gram = inner(set.well_basis[a], set.well_basis[b], g.dx);
      CHECK(std::abs(gram - (a == b ? 1.0 : 0.0)) < 1e-8);
    }

  for (int p = 1; p <= 2; ++p) {
    const SpinorField swapped = apply_sigmax_p(set.mode(p, false));
    CHECK((swapped.up - set.mode(p, true).up).norm() * std::sqrt(g.dx) < 1e-6);
    CHECK((swapped.down - set.mode(p, true).down).norm() * std::sqrt(g.dx) < 1e-6);
    CHECK(set.swap_defect[p - 1] < 1e-6);  // PT swap with coefficient +1
  }
}

TEST_CASE("four-mode coefficients: structure, hierarchy, energy combinations") {
  const Grid g = grid512();
  for (double gamma : {0.8, 1.5}) {
    TrapParams trap;
    trap.gamma = gamma;
    const StationarySet set = stationary_set(g, trap);
    const FourModeCoefficients co = four_mode_coefficients(set, double_well(g, trap));

    const auto& e = set.states;
    CHECK(co.Delta ==
          doctest::Approx(0.25 * (e[3].energy + e[2].energy - e[1].energy - e[0].energy)));
    CHECK(co.Delta > 0.0);
    CHECK(co.delta1 >= 0.0);
    CHECK(co.delta2 >= 0.0);
    CHECK(co.E0 == doctest::Approx(set.E0));

    const double scale =
        std::max({std::abs(co.v1), std::abs(co.v2), std::abs(co.u), std::abs(co.w)});
    CHECK(co.structure_residual < 1e-6 * scale);
    CHECK(std::abs(co.u / co.w) > 1e-4);
    CHECK(std::abs(co.u / co.w) < 1e-2);

    // overlap matrix is real symmetric with the expected block pattern
    CHECK((co.overlap - co.overlap.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(co.overlap(0, 0) == doctest::Approx(-co.overlap(1, 1)));
    CHECK(co.overlap(0, 1) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(co.overlap(0, 3) == doctest::Approx(-co.overlap(1, 2)));
  }
}

TEST_CASE("gamma=0 gaps equal the scalar tunnel splittings") {
  TrapParams trap;
  trap.gamma = 0.0;
  GridSpec spec;
  spec.n_points = 512;
  const auto gaps = gap_scan({0.0}, trap, spec, 1);
  const Eigen::VectorXd fd = scalar_fd_levels(trap, 3000, 2);
  const double scalar_split = fd[1] - fd[0];
  CHECK(gaps[0].lower_gap == doctest::Approx(scalar_split).epsilon(2e-3));
  CHECK(gaps[0].upper_gap == doctest::Approx(scalar_split).epsilon(2e-3));
}

TEST_CASE("well states become stationary at the measured lower-pair collapse") {
  GridSpec spec;
  spec.n_points = 512;
  TrapParams trap;
  // Locate the collapse from the gap table rather than assuming it.
  std::vector<double> gammas;
  for (double g = 0.5; g <= 1.1001; g += 0.05) gammas.push_back(g);
  const auto table = gap_scan(gammas, trap, spec, 0);
  size_t imin = 0;
  for (size_t i = 0; i < table.size(); ++i)
    if (table[i].lower_gap < table[imin].lower_gap) imin = i;
  const double gstar = refine_gap_minimum(trap, spec, 1, table[imin].gamma - 0.05,
                                          table[imin].gamma + 0.05, 1e-4);

  const Grid g = build_grid(spec);
  trap.gamma = gstar;
  const StationarySet set = stationary_set(g, trap);
  const FourModeCoefficients co = four_mode_coefficients(set, double_well(g, trap));
  CHECK(co.delta1 < 1e-4 * co.Delta);

  const Eigen::MatrixXcd H = discretize_hamiltonian(g, trap, double_well(g, trap).v_static);
  for (bool right : {false, true}) {
    const SpinorField& mode = set.mode(1, right);
    Eigen::VectorXcd v(2 * g.n);
    v.head(g.n) = mode.up * std::sqrt(g.dx);
    v.tail(g.n) = mode.down * std::sqrt(g.dx);
    const double e = (v.adjoint() * (H * v))(0).real();
    CHECK((H * v - e * v).norm() < 1e-4);  // near-stationary well state
    CHECK(left_probability(mode, g) > (right ? 0.0 : 0.99));
  }
}

TEST_CASE("eigenvalues are stable when the domain is doubled as well") {
  TrapParams trap;
  trap.gamma = 0.8;
  GridSpec spec;
  spec.n_points = 512;
  const Eigen::VectorXd base = bound_energies(build_grid(spec), trap, 4);
  GridSpec wide;
  wide.x_min = -24.0;
  wide.x_max = 24.0;
  wide.n_points = 1024;  // same spacing, twice the box
  const Eigen::VectorXd wider = bound_energies(build_grid(wide), trap, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(base[i] - wider[i]) < 1e-8);
}

TEST_CASE("eigenstates form an orthonormal set") {
  const Grid g = grid512();
  TrapParams trap;
  trap.gamma = 0.8;
  const StationarySet set = stationary_set(g, trap);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto gram = inner(set.states[a].field, set.states[b].field, g.dx);
      CHECK(std::abs(gram - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
}

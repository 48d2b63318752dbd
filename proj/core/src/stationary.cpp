#include "socdw/stationary.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <complex>
#include <thread>

#include "fft_util.hpp"
#include "workers.hpp"

namespace socdw {

namespace {

using std::complex;
const complex<double> I{0.0, 1.0};

// Circulant matrix of a Fourier multiplier kappa(k): C_{jl} = c[(j-l) mod n]
// with c the inverse DFT of kappa. Exact spectral differentiation on the grid.
Eigen::VectorXcd circulant_kernel(const Eigen::VectorXd& kappa) {
  const int n = static_cast<int>(kappa.size());
  Eigen::VectorXcd c = kappa.cast<complex<double>>();
  detail::fft_inplace(c, FFTW_BACKWARD);
  c /= static_cast<double>(n);
  // Make conjugate pairs exact so the assembled matrix is Hermitian to the bit.
  c[0] = complex<double>(c[0].real(), 0.0);
  for (int r = 1; r <= n / 2; ++r) {
    const complex<double> avg = 0.5 * (c[r] + std::conj(c[n - r]));
    c[r] = avg;
    c[n - r] = std::conj(avg);
  }
  return c;
}

// Minimum of the free spinor dispersion k^2/2 - sqrt(gamma^2 k^2 + Omega^2);
// discrete levels below it are genuinely bound.
double continuum_edge(const TrapParams& trap) {
  const double g2 = trap.gamma * trap.gamma;
  const double om = std::abs(trap.omega_rabi);
  if (g2 <= om || g2 == 0.0) return -om;
  return -0.5 * (g2 + om * om / g2);
}

SpinorField state_from_column(const Eigen::MatrixXcd& vecs, int col, const Grid& grid) {
  const int n = grid.n;
  SpinorField f;
  f.up = vecs.col(col).head(n) / std::sqrt(grid.dx);
  f.down = vecs.col(col).tail(n) / std::sqrt(grid.dx);
  return f;
}

double left_mass(const SpinorField& psi, const Grid& grid) {
  return left_probability(psi, grid);
}

// Picks the larger of the two PT-symmetrization branches; either yields a
// PT-invariant state when psi spans a nondegenerate eigenvector.
SpinorField pt_phase_fix(const SpinorField& psi, double dx) {
  const SpinorField pt = apply_pt(psi);
  SpinorField sum{psi.up + pt.up, psi.down + pt.down};
  SpinorField dif{I * (psi.up - pt.up), I * (psi.down - pt.down)};
  const double ns = norm(sum, dx);
  const double nd = norm(dif, dx);
  if (std::max(ns, nd) < 1e-3)
    throw NumericalError("PT phase fixing degenerate: both symmetrization branches vanish");
  return ns >= nd ? SpinorField{sum.up / ns, sum.down / ns}
                  : SpinorField{dif.up / nd, dif.down / nd};
}

double field_distance(const SpinorField& a, const SpinorField& b, double dx) {
  SpinorField diff{a.up - b.up, a.down - b.down};
  return norm(diff, dx);
}

void rotate_degenerate_pair(EigenState& lo, EigenState& hi, const Grid& grid) {
  // Diagonalize sigma_x P inside the two-dimensional eigenspace; its
  // eigenvalues are -+1 and distinguish the members.
  Eigen::Matrix2cd A;
  const SpinorField* s[2] = {&lo.field, &hi.field};
  for (int m = 0; m < 2; ++m)
    for (int l = 0; l < 2; ++l) A(m, l) = inner(*s[m], apply_sigmax_p(*s[l]), grid.dx);
  A = 0.5 * (A + A.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(A);
  const Eigen::Matrix2cd q = es.eigenvectors();  // ascending: -1 first
  SpinorField a{q(0, 0) * lo.field.up + q(1, 0) * hi.field.up,
                q(0, 0) * lo.field.down + q(1, 0) * hi.field.down};
  SpinorField b{q(0, 1) * lo.field.up + q(1, 1) * hi.field.up,
                q(0, 1) * lo.field.down + q(1, 1) * hi.field.down};
  lo.field = std::move(a);
  hi.field = std::move(b);
}

}  // namespace

Eigen::MatrixXcd discretize_hamiltonian(const Grid& grid, const TrapParams& trap,
                                        const Eigen::VectorXd& v) {
  const int n = grid.n;
  if (static_cast<int>(v.size()) != n)
    throw ConfigError("potential array does not match the grid");

  Eigen::VectorXd kappa_up(n), kappa_dn(n);
  for (int m = 0; m < n; ++m) {
    const double k = grid.k[m];
    const double kin = 0.5 * k * k;
    // The Nyquist mode carries no usable sign for odd derivatives.
    const double soc = (m == n / 2) ? 0.0 : trap.gamma * k;
    kappa_up[m] = kin - soc;
    kappa_dn[m] = kin + soc;
  }
  const Eigen::VectorXcd c_up = circulant_kernel(kappa_up);
  const Eigen::VectorXcd c_dn = circulant_kernel(kappa_dn);

  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const int r = (j - l + n) % n;
      H(j, l) = c_up[r];
      H(n + j, n + l) = c_dn[r];
    }
    H(j, j) += v[j];
    H(n + j, n + j) += v[j];
    H(j, n + j) = trap.omega_rabi;
    H(n + j, j) = trap.omega_rabi;
  }
  return H;
}

double hermiticity_defect(const Eigen::MatrixXcd& H) {
  return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

std::array<EigenState, 4> bound_states(const Eigen::MatrixXcd& H, const Grid& grid,
                                       const TrapParams& trap) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  if (es.eigenvalues()(3) >= continuum_edge(trap))
    throw NumericalError("insufficient bound states: trap supports fewer than four levels below the continuum edge");

  std::array<EigenState, 4> out;
  for (int idx = 0; idx < 4; ++idx) {
    const double e = es.eigenvalues()(idx);
    const double residual = (H * es.eigenvectors().col(idx) - e * es.eigenvectors().col(idx)).norm();
    if (residual > 1e-8)
      throw NumericalError("eigenpair residual " + std::to_string(residual) + " exceeds 1e-8");
    out[idx].energy = e;
    out[idx].field = state_from_column(es.eigenvectors(), idx, grid);
    out[idx].pair = idx / 2 + 1;
    out[idx].member = idx % 2 + 1;
  }
  return out;
}

Eigen::VectorXd bound_energies(const Grid& grid, const TrapParams& trap, int count) {
  const PotentialPair pot = double_well(grid, trap);
  const Eigen::MatrixXcd H = discretize_hamiltonian(grid, trap, pot.v_static);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  if (es.eigenvalues()(count - 1) >= continuum_edge(trap))
    throw NumericalError("insufficient bound states: trap supports fewer than " +
                         std::to_string(count) + " levels below the continuum edge");
  return es.eigenvalues().head(count);
}

void symmetry_adapt(std::array<EigenState, 4>& states, const Grid& grid) {
  const double Delta =
      0.25 * (states[3].energy + states[2].energy - states[1].energy - states[0].energy);
  const double tol_deg = 1e-6 * std::abs(Delta);

  for (int ps = 0; ps < 4; ps += 2) {
    if (states[ps + 1].energy - states[ps].energy < tol_deg)
      rotate_degenerate_pair(states[ps], states[ps + 1], grid);
    for (int m = 0; m < 2; ++m) {
      EigenState& st = states[ps + m];
      st.field = pt_phase_fix(st.field, grid.dx);
      st.s2 = inner(st.field, apply_sigmax_t(st.field), grid.dx).real();
      const double sign = st.s2 >= 0.0 ? 1.0 : -1.0;
      SpinorField a2 = apply_sigmax_t(st.field);
      SpinorField a3 = apply_sigmax_p(st.field);
      a2.up *= sign, a2.down *= sign;
      a3.up *= sign, a3.down *= sign;
      st.sym_defect = std::max({field_distance(apply_pt(st.field), st.field, grid.dx),
                                field_distance(a2, st.field, grid.dx),
                                field_distance(a3, st.field, grid.dx)});
    }
  }
}

WellBasis make_well_basis(const std::array<EigenState, 4>& adapted, const Grid& grid) {
  WellBasis wb;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < 2; ++p) {
    const SpinorField& m1 = adapted[2 * p].field;
    const SpinorField& m2 = adapted[2 * p + 1].field;
    SpinorField plus{inv_sqrt2 * (m1.up + I * m2.up), inv_sqrt2 * (m1.down + I * m2.down)};
    SpinorField minus{inv_sqrt2 * (m1.up - I * m2.up), inv_sqrt2 * (m1.down - I * m2.down)};
    const double lm_plus = left_mass(plus, grid);
    const double lm_minus = left_mass(minus, grid);
    SpinorField left = lm_minus >= lm_plus ? std::move(minus) : std::move(plus);
    const double lm = std::max(lm_plus, lm_minus);
    if (lm < 0.6)
      wb.warnings.push_back("weak localization: pair " + std::to_string(p + 1) +
                            " left mass " + std::to_string(lm));
    SpinorField right = apply_sigmax_p(left);
    // The PT image of |i-> is |i+> up to a phase; absorbing half of that
    // phase into the pair makes the swap carry exactly +1, which also makes
    // every cross-pair matrix element of the (real, odd) modulation
    // potential real.
    const complex<double> s = inner(right, apply_pt(left), grid.dx);
    const complex<double> half_phase = std::exp(I * 0.5 * std::arg(s));
    left.up *= half_phase, left.down *= half_phase;
    right.up *= half_phase, right.down *= half_phase;
    wb.swap_defect[p] = field_distance(apply_pt(left), right, grid.dx);
    wb.left_mass[p] = lm;
    wb.modes[2 * p] = std::move(left);
    wb.modes[2 * p + 1] = std::move(right);
  }
  return wb;
}

StationarySet stationary_set(const Grid& grid, const TrapParams& trap) {
  const PotentialPair pot = double_well(grid, trap);
  const Eigen::MatrixXcd H = discretize_hamiltonian(grid, trap, pot.v_static);
  StationarySet set;
  set.grid = grid;
  set.states = bound_states(H, grid, trap);
  symmetry_adapt(set.states, grid);
  WellBasis wb = make_well_basis(set.states, grid);
  set.well_basis = std::move(wb.modes);
  set.swap_defect = wb.swap_defect;
  set.left_mass = wb.left_mass;
  set.warnings = std::move(wb.warnings);
  for (const EigenState& st : set.states)
    if (st.s2 < 0.0)
      set.warnings.push_back("symmetry signature -1 for state " + std::to_string(st.pair) +
                             std::to_string(st.member));
  set.E0 = 0.25 * (set.states[0].energy + set.states[1].energy + set.states[2].energy +
                   set.states[3].energy);
  return set;
}

StationarySet resample_set(const StationarySet& set, const Grid& to) {
  StationarySet out = set;
  out.grid = to;
  for (auto& st : out.states) {
    st.field = resample(st.field, set.grid, to);
    st.field = normalized(st.field, to.dx);
  }
  for (auto& mode : out.well_basis) {
    mode = resample(mode, set.grid, to);
    mode = normalized(mode, to.dx);
  }
  return out;
}

FourModeCoefficients four_mode_coefficients(const StationarySet& set,
                                            const PotentialPair& potentials) {
  const Grid& grid = set.grid;
  if (potentials.v_mod.size() != grid.n)
    throw ConfigError("potential array does not match the stationary grid");

  Eigen::Matrix4cd Mc;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const SpinorField& fa = set.well_basis[a];
      const SpinorField& fb = set.well_basis[b];
      complex<double> acc = 0.0;
      for (int j = 0; j < grid.n; ++j)
        acc += potentials.v_mod[j] *
               (std::conj(fa.up[j]) * fb.up[j] + std::conj(fa.down[j]) * fb.down[j]);
      Mc(a, b) = acc * grid.dx;
    }
  }
  const double max_imag = Mc.imag().cwiseAbs().maxCoeff();
  const Eigen::Matrix4d M = Mc.real();

  FourModeCoefficients c;
  c.overlap = M;
  c.v1 = M(0, 0);
  c.v2 = M(2, 2);
  c.u = M(0, 2);
  c.w = -M(0, 3);  // <1-|(V- - V+)|2+>
  const double wmat = M(0, 3);

  Eigen::Matrix4d pattern = Eigen::Matrix4d::Zero();
  pattern(0, 0) = c.v1;
  pattern(1, 1) = -c.v1;
  pattern(2, 2) = c.v2;
  pattern(3, 3) = -c.v2;
  pattern(0, 2) = pattern(2, 0) = c.u;
  pattern(1, 3) = pattern(3, 1) = -c.u;
  pattern(0, 3) = pattern(3, 0) = wmat;
  pattern(1, 2) = pattern(2, 1) = -wmat;
  c.structure_residual = std::max((M - pattern).cwiseAbs().maxCoeff(), max_imag);

  const double scale = std::max({std::abs(c.v1), std::abs(c.v2), std::abs(c.u), std::abs(c.w)});
  if (c.structure_residual > 1e-6 * scale)
    throw NumericalError("symmetry-structure violation: overlap matrix residual " +
                         std::to_string(c.structure_residual));

  const auto& e = set.states;
  c.Delta = 0.25 * (e[3].energy + e[2].energy - e[1].energy - e[0].energy);
  c.delta1 = 0.5 * (e[1].energy - e[0].energy);
  c.delta2 = 0.5 * (e[3].energy - e[2].energy);
  c.E0 = set.E0;
  return c;
}

std::vector<GapPoint> gap_scan(const std::vector<double>& gammas, TrapParams trap,
                               const GridSpec& spec, int workers) {
  const Grid grid = build_grid(spec);
  std::vector<GapPoint> out(gammas.size());
  std::atomic<size_t> next{0};
  const int nw = std::min<int>(detail::resolve_workers(workers), std::max<size_t>(gammas.size(), 1));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = next.fetch_add(1); i < gammas.size(); i = next.fetch_add(1)) {
          TrapParams t = trap;
          t.gamma = gammas[i];
          const Eigen::VectorXd e = bound_energies(grid, t, 4);
          out[i] = {gammas[i], std::abs(e[1] - e[0]), std::abs(e[3] - e[2])};
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

double refine_gap_minimum(TrapParams trap, const GridSpec& spec, int pair, double gamma_lo,
                          double gamma_hi, double tol) {
  const Grid grid = build_grid(spec);
  auto gap = [&](double gamma) {
    TrapParams t = trap;
    t.gamma = gamma;
    const Eigen::VectorXd e = bound_energies(grid, t, 4);
    return pair == 1 ? std::abs(e[1] - e[0]) : std::abs(e[3] - e[2]);
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = gamma_lo, b = gamma_hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = gap(x1), f2 = gap(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - phi * (b - a);
      f1 = gap(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + phi * (b - a);
      f2 = gap(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace socdw

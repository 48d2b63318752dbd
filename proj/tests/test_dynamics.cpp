#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "socdw/dynamics.hpp"
#include "socdw/grid.hpp"
#include "socdw/spinor.hpp"
#include "socdw/stationary.hpp"

using namespace socdw;
using std::complex;

namespace {

Grid prop_grid() {
  GridSpec spec;
  spec.n_points = 1024;
  return build_grid(spec);
}

StationarySet stock_set(double gamma, const Grid& pgrid) {
  GridSpec spec;
  spec.n_points = 512;
  TrapParams trap;
  trap.gamma = gamma;
  return resample_set(stationary_set(build_grid(spec), trap), pgrid);
}

double mean_x2(const SpinorField& psi, const Grid& g) {
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j)
    acc += g.x[j] * g.x[j] * (std::norm(psi.up[j]) + std::norm(psi.down[j]));
  return acc * g.dx;
}

SpinorField stepped(Propagator& prop, SpinorField psi, double dt, double t_final) {
  const long long n = std::llround(t_final / dt);
  for (long long s = 0; s < n; ++s) prop.step(psi, s * dt);
  return psi;
}

}  // namespace

TEST_CASE("free wavepacket dispersion follows the analytic width law") {
  const Grid g = prop_grid();
  TrapParams trap;
  trap.U = 1e-30;  // effectively V = 0
  trap.omega_rabi = 0.0;
  trap.gamma = 0.0;
  PropagationConfig cfg;
  cfg.dt = 0.002;
  cfg.t_final = 2.0;

  const double sigma0 = 0.7;
  SpinorField psi = SpinorField::zero(g.n);
  for (int j = 0; j < g.n; ++j)
    psi.up[j] = std::exp(-g.x[j] * g.x[j] / (4.0 * sigma0 * sigma0));
  psi = normalized(psi, g.dx);
  CHECK(mean_x2(psi, g) == doctest::Approx(sigma0 * sigma0).epsilon(1e-8));

  Propagator prop(g, trap, cfg);
  const SpinorField psi_t = stepped(prop, psi, cfg.dt, cfg.t_final);
  const double expected =
      sigma0 * sigma0 + cfg.t_final * cfg.t_final / (4.0 * sigma0 * sigma0);
  CHECK(mean_x2(psi_t, g) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(norm(psi_t, g.dx) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eigenstate is stationary: modulus, phase, norm, symmetric density") {
  const Grid g = prop_grid();
  const StationarySet set = stock_set(0.8, g);
  TrapParams trap;
  trap.gamma = 0.8;
  PropagationConfig cfg;
  cfg.dt = 0.0005;
  cfg.t_final = 10.0;
  cfg.sample_every = 100;

  Propagator prop(g, trap, cfg);
  const Trajectory traj = prop.evolve(set.states[0].field, &set);
  for (double n : traj.norm) CHECK(std::abs(n - 1.0) < 1e-9);
  for (double p : traj.p_left) CHECK(p == doctest::Approx(0.5).epsilon(1e-6));
  for (const auto& s : traj.spins) CHECK(s[0] == doctest::Approx(traj.spins[0][0]).epsilon(1e-6));

  Propagator prop2(g, trap, cfg);
  const SpinorField psi = stepped(prop2, set.states[0].field, cfg.dt, cfg.t_final);
  const complex<double> overlap = inner(set.states[0].field, psi, g.dx);
  CHECK(std::abs(overlap) > 1.0 - 1e-6);
  const complex<double> residual_phase =
      overlap * std::exp(complex<double>(0.0, set.states[0].energy * cfg.t_final));
  CHECK(std::abs(std::arg(residual_phase)) < 1e-4);
}

TEST_CASE("Strang splitting converges at second order") {
  const Grid g = prop_grid();
  const StationarySet set = stock_set(0.8, g);
  TrapParams trap;
  trap.gamma = 0.8;
  trap.f = 0.0774;
  trap.omega_mod = 0.64;

  auto final_state = [&](double dt, double gnl) {
    PropagationConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 10.0;
    cfg.g = gnl;
    Propagator prop(g, trap, cfg);
    return stepped(prop, superposition_input(set, 1.0, 0.0), dt, cfg.t_final);
  };

  for (double gnl : {0.0, 0.2}) {
    const SpinorField ref = final_state(0.00125, gnl);
    double err_prev = -1.0;
    double order_min = 10.0;
    for (double dt : {0.02, 0.01, 0.005}) {
      const SpinorField psi = final_state(dt, gnl);
      SpinorField diff{psi.up - ref.up, psi.down - ref.down};
      const double err = norm(diff, g.dx);
      if (err_prev > 0.0) order_min = std::min(order_min, std::log2(err_prev / err));
      err_prev = err;
    }
    CHECK(order_min >= (gnl == 0.0 ? 1.9 : 1.5));
  }
}

TEST_CASE("mirror symmetry: sigma_x P image with half-period drive offset") {
  const Grid g = prop_grid();
  const StationarySet set = stock_set(0.8, g);
  TrapParams trap;
  trap.gamma = 0.8;
  trap.f = 0.143;
  trap.omega_mod = 0.9;
  PropagationConfig cfg;
  cfg.dt = 0.0025;

  // sin(w(t + T/2)) = -sin(w t): the offset run sees the drive with f -> -f.
  const double half_period = M_PI / trap.omega_mod;
  SpinorField a = superposition_input(set, 0.8, 0.6);
  SpinorField b = apply_sigmax_p(a);

  Propagator prop(g, trap, cfg);
  const long long n = std::llround(50.0 / cfg.dt);
  for (long long s = 0; s < n; ++s) {
    prop.step(a, s * cfg.dt);
    prop.step(b, half_period + s * cfg.dt);
  }
  CHECK(left_probability(b, g) == doctest::Approx(1.0 - left_probability(a, g)).epsilon(1e-6));
  const SpinorField mirrored = apply_sigmax_p(a);
  SpinorField diff{mirrored.up - b.up, mirrored.down - b.down};
  CHECK(norm(diff, g.dx) < 1e-6);
}

TEST_CASE("Josephson oscillation matches the two-level prediction from delta1") {
  GridSpec spec;
  spec.n_points = 512;
  const Grid sgrid = build_grid(spec);
  TrapParams trap;
  trap.gamma = 0.0;  // sizable splitting, clean two-level dynamics
  const StationarySet sset = stationary_set(sgrid, trap);
  const FourModeCoefficients co = four_mode_coefficients(sset, double_well(sgrid, trap));

  const Grid g = prop_grid();
  const StationarySet set = resample_set(sset, g);
  PropagationConfig cfg;
  cfg.dt = 0.005;
  cfg.t_final = 400.0;
  cfg.sample_every = 200;
  Propagator prop(g, trap, cfg);
  const Trajectory traj = prop.evolve(superposition_input(set, 1.0, 0.0));

  double rms = 0.0;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double expected = 0.5 + 0.5 * std::cos(2.0 * co.delta1 * traj.times[i]);
    rms += std::pow(traj.p_left[i] - expected, 2);
  }
  rms = std::sqrt(rms / traj.times.size());
  CHECK(rms < 0.02);
  CHECK(traj.p_left.back() < 0.9);  // the oscillation is actually visible
}

TEST_CASE("mode amplitudes: projection sanity and drive-driven continuum residual") {
  const Grid g = prop_grid();
  const StationarySet set = stock_set(0.8, g);
  TrapParams trap;
  trap.gamma = 0.8;

  PropagationConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_final = 0.01;
  cfg.sample_every = 1;
  Propagator prop(g, trap, cfg);
  const Trajectory probe = prop.evolve(set.mode(2, true), &set);
  CHECK(std::abs(probe.mode_amplitudes.front()[3]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(probe.continuum_residual.front()) < 1e-10);
  CHECK(std::abs(probe.mode_amplitudes.front()[0]) < 1e-10);

  auto residual_max = [&](double f) {
    TrapParams t = trap;
    t.f = f;
    t.omega_mod = 2.2;  // fast drive, strongest leakage out of the four modes
    PropagationConfig c;
    c.dt = 0.0025;
    c.t_final = 100.0;
    c.sample_every = 40;
    Propagator p(g, t, c);
    const Trajectory tr = p.evolve(superposition_input(set, 1.0, 0.0), &set);
    double mx = 0.0;
    for (double r : tr.continuum_residual) mx = std::max(mx, std::abs(r));
    return mx;
  };
  CHECK(residual_max(0.143) > 1e-3);  // strong drive reaches beyond the four modes
  CHECK(residual_max(0.01) < 1e-4);   // perturbative drive does not
}

TEST_CASE("running time average anchors") {
  std::vector<double> t, p;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(0.1 * i);
    p.push_back(0.5 + 0.5 * std::cos(1.7 * t.back()));
  }
  const auto avg = running_time_average(t, p);
  CHECK(avg.back() == doctest::Approx(0.5).epsilon(0.01));

  std::vector<double> flat(t.size(), 0.37);
  const auto favg = running_time_average(t, flat);
  for (double v : favg) CHECK(v == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("propagation config guards") {
  TrapParams trap;
  PropagationConfig cfg;
  cfg.dt = 0.05;  // kinetic phase at the occupied momentum scale exceeds pi
  CHECK_THROWS_AS(cfg.validate(trap), ConfigError);
  cfg.dt = 0.0025;
  CHECK_NOTHROW(cfg.validate(trap));
  cfg.sample_every = 0;
  CHECK_THROWS_AS(cfg.validate(trap), ConfigError);
}

TEST_CASE("static energy is conserved for f = 0, g = 0") {
  GridSpec spec;
  spec.n_points = 512;
  const Grid g = build_grid(spec);
  TrapParams trap;
  trap.gamma = 0.8;
  const StationarySet set = stationary_set(g, trap);
  const Eigen::MatrixXcd H = discretize_hamiltonian(g, trap, double_well(g, trap).v_static);

  auto energy = [&](const SpinorField& psi) {
    Eigen::VectorXcd v(2 * g.n);
    v.head(g.n) = psi.up * std::sqrt(g.dx);
    v.tail(g.n) = psi.down * std::sqrt(g.dx);
    return (v.adjoint() * (H * v))(0).real();
  };

  PropagationConfig cfg;
  cfg.dt = 0.0025;
  cfg.t_final = 50.0;
  Propagator prop(g, trap, cfg);
  SpinorField psi = superposition_input(set, 0.6, 0.8);
  const double e0 = energy(psi);
  psi = stepped(prop, psi, cfg.dt, cfg.t_final);
  CHECK(std::abs(energy(psi) - e0) < 1e-6);
}

#include "socdw/dynamics.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "fft_util.hpp"

namespace socdw {

using std::complex;
namespace {
const complex<double> I{0.0, 1.0};
}

void PropagationConfig::validate(const TrapParams& trap) const {
  if (!(dt > 0.0)) throw ConfigError("prop.dt must be positive");
  if (!(t_final > 0.0)) throw ConfigError("prop.t_final must be positive");
  if (sample_every < 1) throw ConfigError("prop.sample_every must be >= 1");
  const double k_occ = 3.0 * std::sqrt(2.0 * trap.U);
  if (dt * (0.5 * k_occ * k_occ + trap.gamma * k_occ) >= M_PI)
    throw ConfigError("prop.dt too large: kinetic phase per step exceeds pi at the occupied momentum scale");
}

std::vector<double> running_time_average(const std::vector<double>& times,
                                         const std::vector<double>& p) {
  std::vector<double> avg(p.size());
  if (p.empty()) return avg;
  avg[0] = p[0];
  double integral = 0.0;
  for (size_t i = 1; i < p.size(); ++i) {
    integral += 0.5 * (p[i] + p[i - 1]) * (times[i] - times[i - 1]);
    avg[i] = integral / (times[i] - times[0]);
  }
  return avg;
}

ModeAmplitudes mode_amplitudes(const SpinorField& psi, const StationarySet& modes, double t) {
  if (psi.size() != modes.grid.n)
    throw ConfigError("field does not live on the stationary set's grid");
  ModeAmplitudes out;
  const complex<double> rot = std::exp(I * modes.E0 * t);
  double sum = 0.0;
  for (int m = 0; m < 4; ++m) {
    out.c[m] = rot * inner(modes.well_basis[m], psi, modes.grid.dx);
    sum += std::norm(out.c[m]);
  }
  out.continuum_residual = 1.0 - sum;
  return out;
}

struct Propagator::Impl {
  Grid grid;
  TrapParams trap;
  PropagationConfig cfg;
  Eigen::VectorXd v_static, v_mod, rho;
  Eigen::VectorXcd kin_half_up, kin_half_dn, kin_full_up, kin_full_dn;
  double cos_rabi = 1.0, sin_rabi = 0.0;
  Eigen::VectorXcd up, dn;  // work buffers bound to the FFT plans
  fftw_plan fwd_up = nullptr, inv_up = nullptr, fwd_dn = nullptr, inv_dn = nullptr;

  Impl(const Grid& g, const TrapParams& t, const PropagationConfig& c)
      : grid(g), trap(t), cfg(c) {
    cfg.validate(trap);
    const PotentialPair pot = double_well(grid, trap);
    v_static = pot.v_static;
    v_mod = pot.v_mod;
    rho.setZero(grid.n);
    const int n = grid.n;
    kin_half_up.resize(n), kin_half_dn.resize(n);
    kin_full_up.resize(n), kin_full_dn.resize(n);
    const double inv_n = 1.0 / n;
    for (int m = 0; m < n; ++m) {
      const double k = grid.k[m];
      const double soc = (m == n / 2) ? 0.0 : trap.gamma * k;
      const double kup = 0.5 * k * k - soc;
      const double kdn = 0.5 * k * k + soc;
      // 1/n folds the unnormalized FFT round trip into the phase.
      kin_half_up[m] = std::exp(-I * kup * (0.5 * cfg.dt)) * inv_n;
      kin_half_dn[m] = std::exp(-I * kdn * (0.5 * cfg.dt)) * inv_n;
      kin_full_up[m] = std::exp(-I * kup * cfg.dt) * inv_n;
      kin_full_dn[m] = std::exp(-I * kdn * cfg.dt) * inv_n;
    }
    cos_rabi = std::cos(trap.omega_rabi * cfg.dt);
    sin_rabi = std::sin(trap.omega_rabi * cfg.dt);
    up.setZero(n), dn.setZero(n);
    auto* pup = reinterpret_cast<fftw_complex*>(up.data());
    auto* pdn = reinterpret_cast<fftw_complex*>(dn.data());
    std::lock_guard<std::mutex> lock(detail::fftw_mutex());
    fwd_up = fftw_plan_dft_1d(n, pup, pup, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_up = fftw_plan_dft_1d(n, pup, pup, FFTW_BACKWARD, FFTW_ESTIMATE);
    fwd_dn = fftw_plan_dft_1d(n, pdn, pdn, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_dn = fftw_plan_dft_1d(n, pdn, pdn, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(detail::fftw_mutex());
    fftw_destroy_plan(fwd_up);
    fftw_destroy_plan(inv_up);
    fftw_destroy_plan(fwd_dn);
    fftw_destroy_plan(inv_dn);
  }

  void kinetic(const Eigen::VectorXcd& phase_up, const Eigen::VectorXcd& phase_dn) {
    fftw_execute(fwd_up);
    fftw_execute(fwd_dn);
    up.array() *= phase_up.array();
    dn.array() *= phase_dn.array();
    fftw_execute(inv_up);
    fftw_execute(inv_dn);
  }

  void capture_density() {
    if (cfg.g == 0.0) return;
    for (int j = 0; j < grid.n; ++j) rho[j] = std::norm(up[j]) + std::norm(dn[j]);
  }

  // Scalar phase of V + f sin(w t_mid) Vmod + g rho, then the exact
  // sigma_x rotation over dt.
  void potential(double t_mid) {
    const double s = trap.f * std::sin(trap.omega_mod * t_mid);
    const bool nl = cfg.g != 0.0;
    for (int j = 0; j < grid.n; ++j) {
      double theta = (v_static[j] + s * v_mod[j]) * cfg.dt;
      if (nl) theta += cfg.g * rho[j] * cfg.dt;
      const complex<double> phase{std::cos(theta), -std::sin(theta)};
      const complex<double> a = up[j], b = dn[j];
      up[j] = phase * (cos_rabi * a - I * sin_rabi * b);
      dn[j] = phase * (cos_rabi * b - I * sin_rabi * a);
    }
  }

  void load(const SpinorField& psi) { up = psi.up, dn = psi.down; }
  SpinorField store() const { return {up, dn}; }
};

Propagator::Propagator(const Grid& grid, const TrapParams& trap, const PropagationConfig& cfg)
    : impl_(std::make_unique<Impl>(grid, trap, cfg)) {}

Propagator::~Propagator() = default;

const Grid& Propagator::grid() const { return impl_->grid; }

void Propagator::step(SpinorField& psi, double t) {
  if (psi.size() != impl_->grid.n) throw ConfigError("field does not match the propagation grid");
  Impl& im = *impl_;
  im.load(psi);
  im.capture_density();
  im.kinetic(im.kin_half_up, im.kin_half_dn);
  im.potential(t + 0.5 * im.cfg.dt);
  im.kinetic(im.kin_half_up, im.kin_half_dn);
  psi = im.store();
}

Trajectory Propagator::evolve(const SpinorField& psi0, const StationarySet* modes) {
  Impl& im = *impl_;
  const Grid& grid = im.grid;
  if (psi0.size() != grid.n) throw ConfigError("field does not match the propagation grid");
  if (modes && modes->grid.n != grid.n)
    throw ConfigError("stationary set does not live on the propagation grid");

  const double dt = im.cfg.dt;
  const long long n_steps = std::llround(im.cfg.t_final / dt);
  const int stride = im.cfg.sample_every;

  Trajectory traj;
  const size_t n_samples = static_cast<size_t>(n_steps / stride) + 1 + (n_steps % stride ? 1 : 0);
  traj.times.reserve(n_samples);
  traj.norm.reserve(n_samples);
  traj.p_left.reserve(n_samples);
  traj.spins.reserve(n_samples);

  im.load(psi0);

  auto sample = [&](long long step_idx) {
    const double t = step_idx * dt;
    SpinorField cur = im.store();
    const double nrm = norm(cur, grid.dx);
    if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > 0.1)
      throw NumericalError("propagation diverged at step " + std::to_string(step_idx) +
                           " (norm " + std::to_string(nrm) + ")");
    traj.times.push_back(t);
    traj.norm.push_back(nrm);
    traj.p_left.push_back(left_probability(cur, grid));
    traj.spins.push_back(spin_expectation(cur, grid.dx));
    if (modes) {
      const ModeAmplitudes amps = mode_amplitudes(cur, *modes, t);
      traj.mode_amplitudes.push_back(amps.c);
      traj.continuum_residual.push_back(amps.continuum_residual);
    }
  };

  sample(0);
  long long done = 0;
  while (done < n_steps) {
    const long long block = std::min<long long>(stride, n_steps - done);
    if (im.cfg.g == 0.0) {
      // Adjacent kinetic half steps merge exactly between potential stages.
      im.kinetic(im.kin_half_up, im.kin_half_dn);
      for (long long s = 0; s < block; ++s) {
        im.potential((done + s) * dt + 0.5 * dt);
        if (s + 1 < block) im.kinetic(im.kin_full_up, im.kin_full_dn);
      }
      im.kinetic(im.kin_half_up, im.kin_half_dn);
    } else {
      for (long long s = 0; s < block; ++s) {
        im.capture_density();
        im.kinetic(im.kin_half_up, im.kin_half_dn);
        im.potential((done + s) * dt + 0.5 * dt);
        im.kinetic(im.kin_half_up, im.kin_half_dn);
      }
    }
    done += block;
    sample(done);
  }
  traj.p_left_avg = running_time_average(traj.times, traj.p_left);
  return traj;
}

SpinorField superposition_input(const StationarySet& set, double c1, double c2) {
  const double nrm = std::sqrt(c1 * c1 + c2 * c2);
  if (nrm == 0.0) throw ConfigError("input state coefficients are both zero");
  const SpinorField& m1 = set.mode(1, false);
  const SpinorField& m2 = set.mode(2, false);
  SpinorField out{(c1 / nrm) * m1.up + (c2 / nrm) * m2.up,
                  (c1 / nrm) * m1.down + (c2 / nrm) * m2.down};
  return normalized(out, set.grid.dx);
}

}  // namespace socdw

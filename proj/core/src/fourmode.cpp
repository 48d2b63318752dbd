#include "socdw/fourmode.hpp"

#include <Eigen/Dense>

#include "socdw/dynamics.hpp"
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "workers.hpp"

namespace socdw {

using std::complex;
namespace {

const complex<double> I{0.0, 1.0};

double wrap_pi(double x) {
  x = std::fmod(x + M_PI, 2.0 * M_PI);
  if (x < 0) x += 2.0 * M_PI;
  return x - M_PI;
}

// RK4 update of U' = -i H(t) U with H(t) = S + f sin(w t) V.
struct Rk4 {
  const Eigen::Matrix4d S, V;
  const double f, omega;

  template <class M>
  M rhs(double t, const M& u) const {
    const double s = f * std::sin(omega * t);
    return M(-I * ((S + s * V) * u));
  }
  template <class M>
  void step(double t, double h, M& u) const {
    const M k1 = rhs(t, u);
    const M k2 = rhs(t + 0.5 * h, M(u + 0.5 * h * k1));
    const M k3 = rhs(t + 0.5 * h, M(u + 0.5 * h * k2));
    const M k4 = rhs(t + h, M(u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

Rk4 make_rk4(const FourModeSystem& sys) {
  return Rk4{sys.static_part(), sys.v_mat, sys.f, sys.omega};
}

double suggested_step(const FourModeSystem& sys) {
  const double delta = std::max(std::abs(sys.h0_diag.maxCoeff()), 1e-6);
  const double by_spec = std::min(sys.period(), 2.0 * M_PI / delta) / 200.0;
  return std::min(by_spec, 0.004);
}

}  // namespace

FourModeSystem assemble(const FourModeCoefficients& c, double f, double omega) {
  FourModeSystem sys;
  sys.h0_diag << -c.Delta, -c.Delta, c.Delta, c.Delta;
  sys.h_delta.setZero();
  sys.h_delta(0, 1) = sys.h_delta(1, 0) = c.delta1;
  sys.h_delta(2, 3) = sys.h_delta(3, 2) = c.delta2;
  sys.v_mat.setZero();
  sys.v_mat(0, 0) = c.v1;
  sys.v_mat(1, 1) = -c.v1;
  sys.v_mat(2, 2) = c.v2;
  sys.v_mat(3, 3) = -c.v2;
  sys.v_mat(0, 2) = sys.v_mat(2, 0) = c.u;
  sys.v_mat(1, 3) = sys.v_mat(3, 1) = -c.u;
  sys.v_mat(0, 3) = sys.v_mat(3, 0) = c.w;
  sys.v_mat(1, 2) = sys.v_mat(2, 1) = -c.w;
  sys.f = f;
  sys.omega = omega;
  return sys;
}

ModeTrajectory integrate_modes(const Eigen::Vector4cd& c0, const FourModeSystem& sys,
                               double t_final, double sample_dt) {
  const Rk4 rk = make_rk4(sys);
  const int per_sample = std::max(1, static_cast<int>(std::ceil(sample_dt / suggested_step(sys))));
  const double h = sample_dt / per_sample;
  const long long n_samples = std::llround(t_final / sample_dt);

  ModeTrajectory traj;
  traj.times.reserve(n_samples + 1);
  traj.c.reserve(n_samples + 1);
  Eigen::Vector4cd c = c0;
  traj.times.push_back(0.0);
  traj.c.push_back(c);
  for (long long i = 0; i < n_samples; ++i) {
    const double t0 = i * sample_dt;
    for (int s = 0; s < per_sample; ++s) rk.step(t0 + s * h, h, c);
    traj.times.push_back((i + 1) * sample_dt);
    traj.c.push_back(c);
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(c.norm() - c0.norm()));
  }
  if (traj.max_norm_drift > 1e-6)
    throw NumericalError("four-mode integration norm drift " +
                         std::to_string(traj.max_norm_drift) + ": step size failure");
  return traj;
}

Monodromy monodromy(const FourModeSystem& sys) {
  const Rk4 rk = make_rk4(sys);
  const double T = sys.period();
  long long n = std::max<long long>(800, std::llround(T / std::min(0.003, suggested_step(sys))));
  Monodromy out;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double h = T / n;
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    for (long long i = 0; i < n; ++i) rk.step(i * h, h, u);
    out.m = u;
    out.unitarity_residual = (u.adjoint() * u - Eigen::Matrix4cd::Identity()).norm();
    if (out.unitarity_residual < 1e-9) return out;
    n *= 2;
  }
  if (out.unitarity_residual > 1e-6)
    throw NumericalError("monodromy unitarity residual " +
                         std::to_string(out.unitarity_residual) + ": step size failure");
  return out;
}

FloquetResult floquet_phases(const Monodromy& mono) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(mono.m);
  if (es.info() != Eigen::Success) throw NumericalError("monodromy eigendecomposition failed");

  FloquetResult res;
  res.unitarity_residual = mono.unitarity_residual;
  std::array<int, 4> order{0, 1, 2, 3};
  std::array<double, 4> lam;
  for (int i = 0; i < 4; ++i) {
    double l = -std::arg(es.eigenvalues()(i));
    if (l <= -M_PI) l += 2.0 * M_PI;
    lam[i] = l;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lam[a] < lam[b]; });
  for (int i = 0; i < 4; ++i) {
    res.phases[i] = lam[order[i]];
    res.vectors.col(i) = es.eigenvectors().col(order[i]).normalized();
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(es.eigenvalues()(i) - es.eigenvalues()(j)) < 1e-10) res.degenerate = true;
  return res;
}

void match_branches(const Eigen::Matrix4cd& prev, FloquetResult& cur) {
  Eigen::Matrix4d ov;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) ov(a, b) = std::norm(prev.col(a).dot(cur.vectors.col(b)));
  std::array<int, 4> perm{0, 1, 2, 3}, best{0, 1, 2, 3};
  double best_score = -1.0;
  std::sort(perm.begin(), perm.end());
  do {
    double s = ov(0, perm[0]) + ov(1, perm[1]) + ov(2, perm[2]) + ov(3, perm[3]);
    if (s > best_score) {
      best_score = s;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  FloquetResult re = cur;
  for (int i = 0; i < 4; ++i) {
    cur.phases[i] = re.phases[best[i]];
    cur.vectors.col(i) = re.vectors.col(best[i]);
  }
}

namespace {

// Weight of a Floquet vector on the lower doublet components.
double lower_weight(const Eigen::Vector4cd& v) {
  return std::norm(v(0)) + std::norm(v(1));
}

CrossingClass classify(const Eigen::Vector4cd& va, const Eigen::Vector4cd& vb) {
  const double wa = lower_weight(va), wb = lower_weight(vb);
  if (wa > 0.65 && wb > 0.65) return CrossingClass::lower_pair;
  if (wa < 0.35 && wb < 0.35) return CrossingClass::upper_pair;
  return CrossingClass::inter_pair;
}

}  // namespace

std::vector<Crossing> crossing_frequencies(const FourModeCoefficients& coeffs, double f,
                                           double omega_min, double omega_max,
                                           double resolution) {
  if (!(omega_min > 0.0) || omega_max <= omega_min)
    throw ConfigError("crossing scan requires 0 < omega_min < omega_max");
  const long long n_pts = std::llround((omega_max - omega_min) / resolution) + 1;
  std::vector<FloquetResult> res(n_pts);
  std::vector<double> omegas(n_pts);
  for (long long i = 0; i < n_pts; ++i) omegas[i] = omega_min + i * resolution;

  std::atomic<long long> next{0};
  const int nw = detail::resolve_workers(0);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&, w] {
      try {
        for (long long i = next.fetch_add(1); i < n_pts; i = next.fetch_add(1))
          res[i] = floquet_phases(monodromy(assemble(coeffs, f, omegas[i])));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (long long i = 1; i < n_pts; ++i) match_branches(res[i - 1].vectors, res[i]);

  auto tracked_at = [&](double omega, const Eigen::Matrix4cd& ref) {
    FloquetResult r = floquet_phases(monodromy(assemble(coeffs, f, omega)));
    match_branches(ref, r);
    return r;
  };

  std::vector<Crossing> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      auto gap = [&](const FloquetResult& r) { return wrap_pi(r.phases[a] - r.phases[b]); };
      for (long long i = 1; i < n_pts; ++i) {
        const double s0 = gap(res[i - 1]), s1 = gap(res[i]);
        const bool small = std::abs(s0) + std::abs(s1) < 0.5;
        Crossing c;
        c.branch_a = a, c.branch_b = b;
        if (small && s0 == 0.0) continue;
        if (small && s0 * s1 < 0.0) {
          double lo = omegas[i - 1], hi = omegas[i];
          double slo = s0;
          Eigen::Matrix4cd ref = res[i - 1].vectors;
          for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
            const double mid = 0.5 * (lo + hi);
            FloquetResult rm = tracked_at(mid, ref);
            const double sm = gap(rm);
            if (slo * sm <= 0.0)
              hi = mid;
            else
              lo = mid, slo = sm, ref = rm.vectors;
          }
          c.omega = 0.5 * (lo + hi);
          c.cls = classify(res[i - 1].vectors.col(a), res[i - 1].vectors.col(b));
          out.push_back(c);
        } else if (small && i + 1 < n_pts) {
          // near-tangential: local minimum of |gap| below threshold
          const double s2 = gap(res[i + 1]);
          if (std::abs(s1) < std::abs(s0) && std::abs(s1) < std::abs(s2) &&
              std::abs(s1) < 1e-3) {
            double lo = omegas[i - 1], hi = omegas[i + 1];
            Eigen::Matrix4cd ref = res[i - 1].vectors;
            for (int it = 0; it < 30 && hi - lo > 1e-6; ++it) {
              const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
              if (std::abs(gap(tracked_at(m1, ref))) < std::abs(gap(tracked_at(m2, ref))))
                hi = m2;
              else
                lo = m1;
            }
            const double wmin = 0.5 * (lo + hi);
            if (std::abs(gap(tracked_at(wmin, ref))) < 1e-4) {
              c.omega = wmin;
              c.cls = classify(res[i].vectors.col(a), res[i].vectors.col(b));
              out.push_back(c);
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) {
    return x.omega < y.omega;
  });
  // merge duplicates from adjacent interval detections
  std::vector<Crossing> dedup;
  for (const Crossing& c : out) {
    if (!dedup.empty() && dedup.back().branch_a == c.branch_a &&
        dedup.back().branch_b == c.branch_b && std::abs(dedup.back().omega - c.omega) < resolution)
      continue;
    dedup.push_back(c);
  }
  return dedup;
}

std::vector<double> resonance_frequencies(const FourModeCoefficients& coeffs, int n_max) {
  if (!(coeffs.Delta > 0.0)) throw ConfigError("resonance frequencies require Delta > 0");
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(coeffs.Delta / n);
  return out;
}

std::array<double, 4> averaged_spectrum(const FourModeCoefficients& coeffs, double f) {
  const double r = std::sqrt(coeffs.delta2 * coeffs.delta2 + f * f * coeffs.w * coeffs.w);
  std::array<double, 4> nu = {0.5 * (coeffs.delta2 + r), 0.5 * (coeffs.delta2 - r),
                              -0.5 * (coeffs.delta2 + r), -0.5 * (coeffs.delta2 - r)};
  std::sort(nu.begin(), nu.end());
  return nu;
}

std::vector<double> p_left_fourmode(const ModeTrajectory& traj) {
  std::vector<double> p(traj.c.size());
  for (size_t i = 0; i < traj.c.size(); ++i)
    p[i] = std::norm(traj.c[i](0)) + std::norm(traj.c[i](2));
  return running_time_average(traj.times, p);
}

}  // namespace socdw

#include "socdw/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "workers.hpp"

namespace socdw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Parabolic refinement of an interior extremum through three points.
double refine_vertex(double x0, double x1, double x2, double y0, double y1, double y2) {
  const double denom = (y0 - 2.0 * y1 + y2);
  if (std::abs(denom) < 1e-300) return x1;
  const double shift = 0.5 * (y0 - y2) / denom * (x1 - x0);
  return std::abs(shift) <= std::abs(x1 - x0) ? x1 + shift : x1;
}

double interp_crossing(double xa, double xb, double pa, double pb, double level) {
  if (pa == pb) return xa;
  return xa + (level - pa) * (xb - xa) / (pb - pa);
}

struct Region {
  int first = 0, last = 0;  // inclusive index range with p >= level
  double left = 0.0, right = 0.0;
  bool clipped_left = false, clipped_right = false;
};

std::vector<Region> above_level_regions(const std::vector<double>& w,
                                        const std::vector<double>& p, double level) {
  std::vector<Region> regions;
  const int n = static_cast<int>(w.size());
  int i = 0;
  while (i < n) {
    if (!(p[i] >= level)) {
      ++i;
      continue;
    }
    Region r;
    r.first = i;
    while (i + 1 < n && p[i + 1] >= level) ++i;
    r.last = i;
    if (r.first == 0 || std::isnan(p[r.first - 1])) {
      r.left = w[r.first];
      r.clipped_left = true;
    } else {
      r.left = interp_crossing(w[r.first - 1], w[r.first], p[r.first - 1], p[r.first], level);
    }
    if (r.last == n - 1 || std::isnan(p[r.last + 1])) {
      r.right = w[r.last];
      r.clipped_right = true;
    } else {
      r.right = interp_crossing(w[r.last], w[r.last + 1], p[r.last], p[r.last + 1], level);
    }
    regions.push_back(r);
    ++i;
  }
  return regions;
}

}  // namespace

Backend backend_from_string(const std::string& name) {
  if (name == "continuous") return Backend::continuous;
  if (name == "fourmode") return Backend::fourmode;
  throw ConfigError("unknown backend '" + name + "' (expected continuous|fourmode)");
}

std::string to_string(Backend b) {
  return b == Backend::continuous ? "continuous" : "fourmode";
}

void ScanConfig::validate() const {
  grid.validate();
  stationary_grid.validate();
  trap.validate();
  if (!(omega_min > 0.0) || !(omega_max > omega_min))
    throw ConfigError("scan requires 0 < omega_min < omega_max");
  if (!(omega_step > 0.0)) throw ConfigError("scan.omega_step must be positive");
  if (c1 == 0.0 && c2 == 0.0) throw ConfigError("input state coefficients are both zero");
}

std::vector<Feature> extract_features(const std::vector<double>& omegas,
                                      const std::vector<double>& p, double level) {
  std::vector<Feature> out;
  const auto regions = above_level_regions(omegas, p, level);
  const int n = static_cast<int>(p.size());

  for (const Region& r : regions) {
    Feature f;
    f.type = Feature::Type::peak;
    int imax = r.first;
    for (int i = r.first; i <= r.last; ++i)
      if (p[i] > p[imax]) imax = i;
    f.value = p[imax];
    f.center = omegas[imax];
    if (imax > 0 && imax < n - 1 && !std::isnan(p[imax - 1]) && !std::isnan(p[imax + 1]) &&
        p[imax] >= p[imax - 1] && p[imax] >= p[imax + 1])
      f.center = refine_vertex(omegas[imax - 1], omegas[imax], omegas[imax + 1], p[imax - 1],
                               p[imax], p[imax + 1]);
    f.width = r.right - r.left;
    f.clipped = r.clipped_left || r.clipped_right;
    out.push_back(f);
  }

  // A dip is a below-level local minimum bracketed by above-level regions.
  for (size_t k = 0; k + 1 < regions.size(); ++k) {
    const int lo = regions[k].last + 1, hi = regions[k + 1].first - 1;
    if (lo > hi) continue;
    int imin = lo;
    bool valid = true;
    for (int i = lo; i <= hi; ++i) {
      if (std::isnan(p[i])) valid = false;
      if (p[i] < p[imin]) imin = i;
    }
    if (!valid) continue;
    Feature f;
    f.type = Feature::Type::dip;
    f.value = p[imin];
    f.center = omegas[imin];
    if (imin > 0 && imin < n - 1 && p[imin] <= p[imin - 1] && p[imin] <= p[imin + 1])
      f.center = refine_vertex(omegas[imin - 1], omegas[imin], omegas[imin + 1], p[imin - 1],
                               p[imin], p[imin + 1]);
    f.width = regions[k + 1].left - regions[k].right;
    f.clipped = false;
    out.push_back(f);
  }

  std::sort(out.begin(), out.end(),
            [](const Feature& a, const Feature& b) { return a.center < b.center; });
  return out;
}

ScanResult frequency_scan(const ScanConfig& cfg) {
  cfg.validate();
  const Grid sgrid = build_grid(cfg.stationary_grid);
  const Grid pgrid = build_grid(cfg.grid);

  TrapParams trap = cfg.trap;
  const StationarySet set = stationary_set(sgrid, trap);

  ScanResult res;
  res.level = cfg.level;
  const long long n_pts = std::llround((cfg.omega_max - cfg.omega_min) / cfg.omega_step) + 1;
  res.omegas.resize(n_pts);
  res.p_final.assign(n_pts, kNaN);
  for (long long i = 0; i < n_pts; ++i) res.omegas[i] = cfg.omega_min + i * cfg.omega_step;

  std::vector<std::string> failures(n_pts);

  if (cfg.backend == Backend::fourmode) {
    const FourModeCoefficients coeffs = four_mode_coefficients(set, double_well(sgrid, trap));
    const double nrm = std::sqrt(cfg.c1 * cfg.c1 + cfg.c2 * cfg.c2);
    Eigen::Vector4cd c0;
    c0 << cfg.c1 / nrm, 0.0, cfg.c2 / nrm, 0.0;
    std::atomic<long long> next{0};
    const int nw = detail::resolve_workers(cfg.workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (long long i = next.fetch_add(1); i < n_pts; i = next.fetch_add(1)) {
          try {
            FourModeSystem sys = assemble(coeffs, cfg.trap.f, res.omegas[i]);
            ModeTrajectory tr = integrate_modes(c0, sys, cfg.prop.t_final, 0.25);
            res.p_final[i] = p_left_fourmode(tr).back();
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        }
      });
    for (auto& th : pool) th.join();
  } else {
    const StationarySet pset = resample_set(set, pgrid);
    const SpinorField psi0 = superposition_input(pset, cfg.c1, cfg.c2);
    std::atomic<long long> next{0};
    const int nw = detail::resolve_workers(cfg.workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (long long i = next.fetch_add(1); i < n_pts; i = next.fetch_add(1)) {
          try {
            TrapParams t = cfg.trap;
            t.omega_mod = res.omegas[i];
            Propagator prop(pgrid, t, cfg.prop);
            const Trajectory traj = prop.evolve(psi0);
            res.p_final[i] = traj.p_left_avg.back();
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        }
      });
    for (auto& th : pool) th.join();
  }

  for (long long i = 0; i < n_pts; ++i)
    if (!failures[i].empty())
      res.failures.push_back("omega=" + std::to_string(res.omegas[i]) + ": " + failures[i]);
  res.features = extract_features(res.omegas, res.p_final, cfg.level);
  return res;
}

double width_at_level(const ScanResult& scan, double level) {
  const auto regions = above_level_regions(scan.omegas, scan.p_final, level);
  if (regions.empty())
    throw NumericalError("no suppression feature: scan never reaches level " +
                         std::to_string(level));
  const Region& r = regions.back();
  return r.right - r.left;
}

std::vector<GammaWidth> gamma_width_scan(const std::vector<double>& gammas, ScanConfig cfg,
                                         bool auto_window) {
  std::vector<GammaWidth> out;
  const Grid sgrid = build_grid(cfg.stationary_grid);
  for (double gamma : gammas) {
    ScanConfig point_cfg = cfg;
    point_cfg.trap.gamma = gamma;
    TrapParams t = point_cfg.trap;
    const Eigen::VectorXd e = bound_energies(sgrid, t, 4);
    const double Delta = 0.25 * (e[3] + e[2] - e[1] - e[0]);
    if (auto_window) {
      point_cfg.omega_min = std::max(0.05, 0.3 * 2.0 * Delta);
      point_cfg.omega_max = 1.6 * 2.0 * Delta;
    }
    const ScanResult scan = frequency_scan(point_cfg);
    GammaWidth gw;
    gw.gamma = gamma;
    gw.Delta = Delta;
    const auto regions = above_level_regions(scan.omegas, scan.p_final, cfg.level);
    if (regions.empty()) {
      gw.width = 0.0;
    } else {
      gw.width = regions.back().right - regions.back().left;
      gw.clipped = regions.back().clipped_left || regions.back().clipped_right;
    }
    out.push_back(gw);
  }
  return out;
}

std::vector<std::pair<double, ScanResult>> nonlinear_scan(ScanConfig cfg,
                                                          std::vector<double> g_list) {
  if (cfg.backend != Backend::continuous)
    throw ConfigError("nonlinear_scan requires the continuous backend");
  if (std::find(g_list.begin(), g_list.end(), 0.0) == g_list.end())
    g_list.insert(g_list.begin(), 0.0);
  std::vector<std::pair<double, ScanResult>> out;
  for (double g : g_list) {
    ScanConfig c = cfg;
    c.prop.g = g;
    out.emplace_back(g, frequency_scan(c));
  }
  return out;
}

void match_features(const std::vector<Feature>& continuous_features,
                    const std::vector<Feature>& fourmode_features, double max_dist,
                    std::vector<FeatureMatch>& matched, std::vector<Feature>& only_continuous,
                    std::vector<Feature>& only_fourmode) {
  std::vector<bool> used(fourmode_features.size(), false);
  for (const Feature& fc : continuous_features) {
    int best = -1;
    double best_d = max_dist;
    for (size_t j = 0; j < fourmode_features.size(); ++j) {
      const Feature& ff = fourmode_features[j];
      if (used[j] || ff.type != fc.type) continue;
      const double d = std::abs(ff.center - fc.center);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    if (best >= 0) {
      used[best] = true;
      const Feature& ff = fourmode_features[best];
      matched.push_back({fc, ff, std::abs(fc.center - ff.center) / ff.center});
    } else {
      only_continuous.push_back(fc);
    }
  }
  for (size_t j = 0; j < used.size(); ++j)
    if (!used[j]) only_fourmode.push_back(fourmode_features[j]);
}

CompareReport compare_backends(const ScanConfig& cfg) {
  CompareReport rep;
  ScanConfig cont = cfg;
  cont.backend = Backend::continuous;
  ScanConfig fm = cfg;
  fm.backend = Backend::fourmode;
  rep.continuous_scan = frequency_scan(cont);
  rep.fourmode_scan = frequency_scan(fm);
  match_features(rep.continuous_scan.features, rep.fourmode_scan.features,
                 std::max(0.03, 5.0 * cfg.omega_step), rep.matched, rep.only_continuous,
                 rep.only_fourmode);
  return rep;
}

}  // namespace socdw

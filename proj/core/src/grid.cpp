#include "socdw/grid.hpp"

#include <cmath>
#include <numbers>

namespace socdw {

void GridSpec::validate() const {
  if (n_points <= 0 || n_points % 2 != 0)
    throw ConfigError("grid.n_points must be a positive even integer, got " +
                      std::to_string(n_points));
  if (!(x_max > 0.0) || std::abs(x_min + x_max) > 1e-12 * (x_max - x_min))
    throw ConfigError("grid domain must be symmetric about the origin (x_min = -x_max)");
}

Grid build_grid(const GridSpec& spec) {
  spec.validate();
  Grid g;
  g.n = spec.n_points;
  g.length = spec.x_max - spec.x_min;
  g.dx = g.length / g.n;
  g.x.resize(g.n);
  g.k.resize(g.n);
  const double dk = 2.0 * std::numbers::pi / g.length;
  for (int j = 0; j < g.n; ++j) {
    g.x[j] = spec.x_min + j * g.dx;
    g.k[j] = dk * (j < g.n / 2 ? j : j - g.n);
  }
  return g;
}

std::vector<std::string> TrapParams::validate() const {
  if (!(U > 0.0)) throw ConfigError("trap.U must be positive");
  if (!(a > 0.0)) throw ConfigError("trap.a must be positive");
  if (!(d > 0.0)) throw ConfigError("trap.d must be positive");
  if (gamma < 0.0) throw ConfigError("trap.gamma must be non-negative");
  if (f < 0.0) throw ConfigError("trap.f must be non-negative");
  if (!(omega_mod > 0.0)) throw ConfigError("trap.omega_mod must be positive");
  std::vector<std::string> warnings;
  if (f > 0.3)
    warnings.push_back("trap.f = " + std::to_string(f) +
                       " is large; the four-mode reduction assumes f << 1");
  return warnings;
}

double single_well(double x, double U, double a) {
  const double t = (x / a) * (x / a);
  return -U * std::exp(-t * t * t);
}

PotentialPair double_well(const Grid& grid, const TrapParams& trap) {
  trap.validate();
  PotentialPair p;
  p.v_static.resize(grid.n);
  p.v_mod.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double vm = single_well(grid.x[j] + trap.d / 2.0, trap.U, trap.a);
    const double vp = single_well(grid.x[j] - trap.d / 2.0, trap.U, trap.a);
    p.v_static[j] = vm + vp;
    p.v_mod[j] = vp - vm;
  }
  if (p.v_static[grid.origin_index()] < -trap.U)
    throw ConfigError("degenerate configuration: wells overlap so strongly that V(0) < -U");
  if (std::abs(p.v_static[0]) > 1e-12 * trap.U)
    throw ConfigError("potential not negligible at the domain boundary; enlarge the grid");
  return p;
}

}  // namespace socdw

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "socdw/dynamics.hpp"
#include "socdw/fourmode.hpp"
#include "socdw/grid.hpp"
#include "socdw/stationary.hpp"

namespace socdw {

enum class Backend { continuous, fourmode };

Backend backend_from_string(const std::string& name);
std::string to_string(Backend b);

/// A frequency sweep of the final time-averaged left probability
/// P<(t_final) for the input c1 |1-> + c2 |2->.
struct ScanConfig {
  Backend backend = Backend::fourmode;
  double omega_min = 0.1;
  double omega_max = 1.5;
  double omega_step = 0.005;
  double c1 = 1.0, c2 = 0.0;
  GridSpec grid{-12.0, 12.0, 1024};             // propagation grid
  GridSpec stationary_grid{-12.0, 12.0, 512};   // eigensolve grid
  TrapParams trap;                              // trap.omega_mod is overridden per point
  PropagationConfig prop;                       // t_final, dt, g
  double level = 0.7;                           // feature detection level
  int workers = 0;

  void validate() const;
};

struct Feature {
  enum class Type { peak, dip };
  Type type = Type::peak;
  double center = 0.0;
  double value = 0.0;   // P at the extremum
  double width = 0.0;   // measured at the detection level
  bool clipped = false; // region touches a scan boundary
};

struct ScanResult {
  std::vector<double> omegas;
  std::vector<double> p_final;  // NaN where the point failed
  std::vector<Feature> features;
  std::vector<std::string> failures;
  double level = 0.7;
};

ScanResult frequency_scan(const ScanConfig& cfg);

/// Features of an arbitrary (omega, p) curve at a level; used by
/// frequency_scan and reusable on synthetic data.
std::vector<Feature> extract_features(const std::vector<double>& omegas,
                                      const std::vector<double>& p, double level);

/// Width of the rightmost contiguous region with p >= level, with linear
/// interpolation at the level crossings. Throws NumericalError if no region
/// reaches the level.
double width_at_level(const ScanResult& scan, double level = 0.7);

struct GammaWidth {
  double gamma = 0.0;
  double width = 0.0;
  double Delta = 0.0;  // pair-gap scale used to choose the window
  bool clipped = false;
};

/// Rightmost suppression width versus SOC strength. Each gamma gets a fresh
/// stationary set and a frequency window proportional to its pair gap
/// (omega in [0.3, 1.6] x 2 Delta), unless the config range is kept fixed.
std::vector<GammaWidth> gamma_width_scan(const std::vector<double>& gammas, ScanConfig cfg,
                                         bool auto_window = true);

/// Continuous-only scans per nonlinearity; g = 0 baseline is prepended when
/// absent.
std::vector<std::pair<double, ScanResult>> nonlinear_scan(ScanConfig cfg,
                                                          std::vector<double> g_list);

struct FeatureMatch {
  Feature continuous_feature;
  Feature fourmode_feature;
  double rel_mismatch = 0.0;  // |cont - fm| / fm
};

struct CompareReport {
  ScanResult continuous_scan;
  ScanResult fourmode_scan;
  std::vector<FeatureMatch> matched;
  std::vector<Feature> only_continuous;
  std::vector<Feature> only_fourmode;
};

/// Greedy same-type pairing by center proximity within max_dist.
void match_features(const std::vector<Feature>& continuous_features,
                    const std::vector<Feature>& fourmode_features, double max_dist,
                    std::vector<FeatureMatch>& matched, std::vector<Feature>& only_continuous,
                    std::vector<Feature>& only_fourmode);

CompareReport compare_backends(const ScanConfig& cfg);

}  // namespace socdw

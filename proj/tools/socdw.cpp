// socdw: spin-orbit-coupled atom in a periodically modulated double well.
// Subcommands cover the stationary problem, driven propagation, four-mode
// Floquet analysis, frequency scans, and figure-reproduction presets.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "socdw/dynamics.hpp"
#include "socdw/fourmode.hpp"
#include "socdw/grid.hpp"
#include "socdw/io.hpp"
#include "socdw/scan.hpp"
#include "socdw/spinor.hpp"
#include "socdw/stationary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace socdw;

namespace {

struct Cli {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<double> x_max;
  std::optional<int> n_points, stationary_n_points;
  std::optional<double> U, a, d, omega_rabi, gamma, f, omega;
  std::optional<double> dt, t_final, g;
  std::optional<int> sample_every;
  std::optional<std::string> backend;
  std::optional<double> omega_min, omega_max, omega_step, c1, c2, level;
  std::optional<std::string> g_values;
  std::optional<double> gamma_min, gamma_max, gamma_step;
  std::string figure;  // reproduce target
};

KeyValueConfig defaults() {
  KeyValueConfig c;
  c.set("grid.x_max", 12.0);
  c.set("grid.n_points", 1024);
  c.set("grid.stationary_n_points", 512);
  c.set("trap.u", 12.0);
  c.set("trap.a", 0.5);
  c.set("trap.d", 2.5);
  c.set("trap.omega_rabi", 1.0);
  c.set("trap.gamma", 0.8);
  c.set("trap.f", 0.0);
  c.set("trap.omega_mod", 1.0);
  c.set("prop.dt", 0.0025);
  c.set("prop.t_final", 1000.0);
  c.set("prop.sample_every", 40);
  c.set("prop.g", 0.0);
  c.set("scan.backend", "fourmode");
  c.set("scan.omega_min", 0.1);
  c.set("scan.omega_max", 1.5);
  c.set("scan.omega_step", 0.005);
  c.set("scan.c1", 1.0);
  c.set("scan.c2", 0.0);
  c.set("scan.level", 0.7);
  c.set("scan.g_values", "-0.02,0.02");
  c.set("gamma.min", 0.3);
  c.set("gamma.max", 2.0);
  c.set("gamma.step", 0.05);
  c.set("run.workers", 0);
  return c;
}

void apply_overrides(KeyValueConfig& cfg, const Cli& o) {
  if (o.config_path) {
    const KeyValueConfig file = KeyValueConfig::load(*o.config_path);
    for (const auto& [k, v] : file.entries())
      if (k != "command") cfg.set(k, v);
  }
  auto setd = [&](const char* key, const std::optional<double>& v) {
    if (v) cfg.set(key, *v);
  };
  auto seti = [&](const char* key, const std::optional<int>& v) {
    if (v) cfg.set(key, *v);
  };
  setd("grid.x_max", o.x_max);
  seti("grid.n_points", o.n_points);
  seti("grid.stationary_n_points", o.stationary_n_points);
  setd("trap.u", o.U);
  setd("trap.a", o.a);
  setd("trap.d", o.d);
  setd("trap.omega_rabi", o.omega_rabi);
  setd("trap.gamma", o.gamma);
  setd("trap.f", o.f);
  setd("trap.omega_mod", o.omega);
  setd("prop.dt", o.dt);
  setd("prop.t_final", o.t_final);
  seti("prop.sample_every", o.sample_every);
  setd("prop.g", o.g);
  if (o.backend) cfg.set("scan.backend", *o.backend);
  setd("scan.omega_min", o.omega_min);
  setd("scan.omega_max", o.omega_max);
  setd("scan.omega_step", o.omega_step);
  setd("scan.c1", o.c1);
  setd("scan.c2", o.c2);
  setd("scan.level", o.level);
  if (o.g_values) cfg.set("scan.g_values", *o.g_values);
  setd("gamma.min", o.gamma_min);
  setd("gamma.max", o.gamma_max);
  setd("gamma.step", o.gamma_step);
  seti("run.workers", o.workers);
  if (o.out_dir) cfg.set("run.out", *o.out_dir);
}

GridSpec grid_spec(const KeyValueConfig& c, bool stationary) {
  GridSpec s;
  s.x_max = c.get_double("grid.x_max", 12.0);
  s.x_min = -s.x_max;
  s.n_points = stationary ? c.get_int("grid.stationary_n_points", 512)
                          : c.get_int("grid.n_points", 1024);
  return s;
}

TrapParams trap_params(const KeyValueConfig& c) {
  TrapParams t;
  t.U = c.get_double("trap.u", 12.0);
  t.a = c.get_double("trap.a", 0.5);
  t.d = c.get_double("trap.d", 2.5);
  t.omega_rabi = c.get_double("trap.omega_rabi", 1.0);
  t.gamma = c.get_double("trap.gamma", 0.8);
  t.f = c.get_double("trap.f", 0.0);
  t.omega_mod = c.get_double("trap.omega_mod", 1.0);
  return t;
}

PropagationConfig prop_config(const KeyValueConfig& c) {
  PropagationConfig p;
  p.dt = c.get_double("prop.dt", 0.0025);
  p.t_final = c.get_double("prop.t_final", 1000.0);
  p.sample_every = c.get_int("prop.sample_every", 40);
  p.g = c.get_double("prop.g", 0.0);
  return p;
}

ScanConfig scan_config(const KeyValueConfig& c) {
  ScanConfig s;
  s.backend = backend_from_string(c.get_string("scan.backend", "fourmode"));
  s.omega_min = c.get_double("scan.omega_min", 0.1);
  s.omega_max = c.get_double("scan.omega_max", 1.5);
  s.omega_step = c.get_double("scan.omega_step", 0.005);
  s.c1 = c.get_double("scan.c1", 1.0);
  s.c2 = c.get_double("scan.c2", 0.0);
  s.level = c.get_double("scan.level", 0.7);
  s.grid = grid_spec(c, false);
  s.stationary_grid = grid_spec(c, true);
  s.trap = trap_params(c);
  s.prop = prop_config(c);
  s.workers = c.get_int("run.workers", 0);
  return s;
}

fs::path prepare_out(KeyValueConfig& cfg, const std::string& command) {
  const fs::path out = cfg.get_string("run.out", std::string("socdw-out/") + command);
  cfg.set("run.out", out.string());
  cfg.set("command", command);
  fs::create_directories(out);
  cfg.save(out / "manifest.txt");
  return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

json feature_json(const Feature& f, double level) {
  return json{{"type", f.type == Feature::Type::peak ? "peak" : "dip"},
              {"center", f.center},
              {"value", f.value},
              {"width", f.width},
              {"level", level},
              {"clipped", f.clipped}};
}

json coefficients_json(const FourModeCoefficients& co) {
  return json{{"Delta", co.Delta},   {"delta1", co.delta1},
              {"delta2", co.delta2}, {"v1", co.v1},
              {"v2", co.v2},         {"u", co.u},
              {"w", co.w},           {"E0", co.E0},
              {"structure_residual", co.structure_residual}};
}

void write_scan_outputs(const fs::path& out, const std::string& stem, const ScanResult& scan) {
  CsvWriter points(out / (stem + ".csv"), {"omega", "p_left_avg"});
  for (size_t i = 0; i < scan.omegas.size(); ++i)
    points.row({scan.omegas[i], scan.p_final[i]});
  json features = json::array();
  for (const Feature& f : scan.features) features.push_back(feature_json(f, scan.level));
  json doc{{"level", scan.level}, {"features", features}, {"failures", scan.failures}};
  std::ofstream jf(out / (stem + "_features.json"));
  jf << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------- states

int cmd_states(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "states");
  const Grid grid = build_grid(grid_spec(cfg, true));
  const TrapParams trap = trap_params(cfg);
  print_warnings(trap.validate());
  const PotentialPair pot = double_well(grid, trap);
  const StationarySet set = stationary_set(grid, trap);
  print_warnings(set.warnings);
  const FourModeCoefficients co = four_mode_coefficients(set, pot);

  {
    CsvWriter energies(out / "energies.csv", {"i", "j", "energy"});
    for (const EigenState& st : set.states)
      energies.raw_row({std::to_string(st.pair), std::to_string(st.member),
                        format_full(st.energy)});
  }
  {
    std::vector<std::string> header{"x"};
    for (const char* m : {"11", "12", "21", "22"})
      for (const char* c : {"re_up_", "im_up_", "re_dn_", "im_dn_"})
        header.push_back(c + std::string(m));
    CsvWriter modes(out / "modes.csv", header);
    for (int j = 0; j < grid.n; ++j) {
      std::vector<double> row{grid.x[j]};
      for (const EigenState& st : set.states) {
        row.push_back(st.field.up[j].real());
        row.push_back(st.field.up[j].imag());
        row.push_back(st.field.down[j].real());
        row.push_back(st.field.down[j].imag());
      }
      modes.row(row);
    }
  }
  {
    std::vector<std::string> header{"x"};
    for (const char* m : {"1m", "1p", "2m", "2p"})
      for (const char* c : {"re_up_", "im_up_", "re_dn_", "im_dn_"})
        header.push_back(c + std::string(m));
    CsvWriter modes(out / "wellmodes.csv", header);
    for (int j = 0; j < grid.n; ++j) {
      std::vector<double> row{grid.x[j]};
      for (const SpinorField& m : set.well_basis) {
        row.push_back(m.up[j].real());
        row.push_back(m.up[j].imag());
        row.push_back(m.down[j].real());
        row.push_back(m.down[j].imag());
      }
      modes.row(row);
    }
  }
  {
    CsvWriter spins(out / "spins.csv", {"mode", "Sx", "Sy", "Sz"});
    const char* labels[] = {"1m", "1p", "2m", "2p"};
    for (int m = 0; m < 4; ++m) {
      const auto s = spin_expectation(set.well_basis[m], grid.dx);
      spins.raw_row({labels[m], format_full(s[0]), format_full(s[1]), format_full(s[2])});
    }
  }
  {
    CsvWriter vs(out / "potential_static.csv", {"x", "value"});
    CsvWriter vm(out / "potential_mod.csv", {"x", "value"});
    for (int j = 0; j < grid.n; ++j) {
      vs.row({grid.x[j], pot.v_static[j]});
      vm.row({grid.x[j], pot.v_mod[j]});
    }
  }
  std::ofstream jf(out / "coefficients.json");
  jf << coefficients_json(co).dump(2) << "\n";
  std::cout << "states: wrote " << out << "\n";
  return 0;
}

int cmd_coeffs(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "coeffs");
  const Grid grid = build_grid(grid_spec(cfg, true));
  const TrapParams trap = trap_params(cfg);
  print_warnings(trap.validate());
  const StationarySet set = stationary_set(grid, trap);
  print_warnings(set.warnings);
  const FourModeCoefficients co = four_mode_coefficients(set, double_well(grid, trap));
  std::ofstream jf(out / "coefficients.json");
  jf << coefficients_json(co).dump(2) << "\n";
  std::cout << "coeffs: Delta=" << co.Delta << " delta1=" << co.delta1
            << " delta2=" << co.delta2 << " w=" << co.w << "\n";
  return 0;
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "evolve");
  const Grid sgrid = build_grid(grid_spec(cfg, true));
  const Grid pgrid = build_grid(grid_spec(cfg, false));
  const TrapParams trap = trap_params(cfg);
  print_warnings(trap.validate());
  const PropagationConfig prop = prop_config(cfg);
  const StationarySet set = resample_set(stationary_set(sgrid, trap), pgrid);
  const SpinorField psi0 =
      superposition_input(set, cfg.get_double("scan.c1", 1.0), cfg.get_double("scan.c2", 0.0));
  Propagator propagator(pgrid, trap, prop);
  const Trajectory traj = propagator.evolve(psi0, &set);

  CsvWriter csv(out / "trajectory.csv",
                {"t", "norm", "p_left", "p_left_avg", "Sx", "Sy", "Sz", "|c1m|^2", "|c1p|^2",
                 "|c2m|^2", "|c2p|^2", "residual"});
  for (size_t i = 0; i < traj.times.size(); ++i)
    csv.row({traj.times[i], traj.norm[i], traj.p_left[i], traj.p_left_avg[i], traj.spins[i][0],
             traj.spins[i][1], traj.spins[i][2], std::norm(traj.mode_amplitudes[i][0]),
             std::norm(traj.mode_amplitudes[i][1]), std::norm(traj.mode_amplitudes[i][2]),
             std::norm(traj.mode_amplitudes[i][3]), traj.continuum_residual[i]});
  std::cout << "evolve: P<(t=" << traj.times.back() << ") = " << traj.p_left_avg.back() << "\n";
  return 0;
}

// ---------------------------------------------------------------- floquet

int cmd_floquet(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "floquet");
  const Grid grid = build_grid(grid_spec(cfg, true));
  const TrapParams trap = trap_params(cfg);
  print_warnings(trap.validate());
  const StationarySet set = stationary_set(grid, trap);
  const FourModeCoefficients co = four_mode_coefficients(set, double_well(grid, trap));

  const double lo = cfg.get_double("scan.omega_min", 0.1);
  const double hi = cfg.get_double("scan.omega_max", 1.5);
  const double step = cfg.get_double("scan.omega_step", 0.005);
  CsvWriter csv(out / "floquet.csv",
                {"omega", "lambda1", "lambda2", "lambda3", "lambda4", "unitarity_residual"});
  FloquetResult prev;
  bool first = true;
  for (double w = lo; w <= hi + 1e-12; w += step) {
    FloquetResult r = floquet_phases(monodromy(assemble(co, trap.f, w)));
    if (!first) match_branches(prev.vectors, r);
    csv.row({w, r.phases[0], r.phases[1], r.phases[2], r.phases[3], r.unitarity_residual});
    prev = r;
    first = false;
  }
  std::cout << "floquet: wrote " << out / "floquet.csv" << "\n";
  return 0;
}

int cmd_crossings(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "crossings");
  const Grid grid = build_grid(grid_spec(cfg, true));
  const TrapParams trap = trap_params(cfg);
  print_warnings(trap.validate());
  const StationarySet set = stationary_set(grid, trap);
  const FourModeCoefficients co = four_mode_coefficients(set, double_well(grid, trap));
  const auto crossings =
      crossing_frequencies(co, trap.f, cfg.get_double("scan.omega_min", 0.1),
                           cfg.get_double("scan.omega_max", 1.5),
                           cfg.get_double("scan.omega_step", 0.005));
  CsvWriter csv(out / "crossings.csv", {"omega", "branch_a", "branch_b", "class"});
  for (const Crossing& c : crossings) {
    const char* cls = c.cls == CrossingClass::lower_pair ? "lower"
                      : c.cls == CrossingClass::upper_pair ? "upper"
                                                           : "inter";
    csv.raw_row({format_full(c.omega), std::to_string(c.branch_a), std::to_string(c.branch_b),
                 cls});
  }
  std::cout << "crossings: found " << crossings.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------- scans

int cmd_scan(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "scan");
  const ScanConfig sc = scan_config(cfg);
  print_warnings(sc.trap.validate());
  const ScanResult scan = frequency_scan(sc);
  write_scan_outputs(out, "points", scan);
  std::cout << "scan: " << scan.omegas.size() << " points, " << scan.features.size()
            << " features\n";
  return 0;
}

int cmd_gamma_scan(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "gamma-scan");
  const double lo = cfg.get_double("gamma.min", 0.3);
  const double hi = cfg.get_double("gamma.max", 2.0);
  const double step = cfg.get_double("gamma.step", 0.05);
  std::vector<double> gammas;
  for (double g = lo; g <= hi + 1e-12; g += step) gammas.push_back(g);

  TrapParams trap = trap_params(cfg);
  print_warnings(trap.validate());
  const auto gaps =
      gap_scan(gammas, trap, grid_spec(cfg, true), cfg.get_int("run.workers", 0));
  {
    CsvWriter csv(out / "gaps.csv", {"gamma", "lower_gap", "upper_gap"});
    for (const GapPoint& p : gaps) csv.row({p.gamma, p.lower_gap, p.upper_gap});
  }
  const auto widths = gamma_width_scan(gammas, scan_config(cfg));
  {
    CsvWriter csv(out / "widths.csv", {"gamma", "width", "Delta", "clipped"});
    for (const GammaWidth& w : widths)
      csv.raw_row({format_full(w.gamma), format_full(w.width), format_full(w.Delta),
                   w.clipped ? "1" : "0"});
  }
  std::cout << "gamma-scan: wrote gaps.csv and widths.csv under " << out << "\n";
  return 0;
}

std::vector<double> parse_g_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

int cmd_nonlinear_scan(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "nonlinear-scan");
  ScanConfig sc = scan_config(cfg);
  sc.backend = Backend::continuous;
  print_warnings(sc.trap.validate());
  const auto scans = nonlinear_scan(sc, parse_g_values(cfg.get_string("scan.g_values", "")));
  for (const auto& [g, scan] : scans) {
    char stem[64];
    std::snprintf(stem, sizeof(stem), "points_g%+.4f", g);
    write_scan_outputs(out, stem, scan);
  }
  std::cout << "nonlinear-scan: " << scans.size() << " nonlinearities\n";
  return 0;
}

int cmd_compare(KeyValueConfig cfg) {
  const fs::path out = prepare_out(cfg, "compare");
  const ScanConfig sc = scan_config(cfg);
  print_warnings(sc.trap.validate());
  const CompareReport rep = compare_backends(sc);
  write_scan_outputs(out, "continuous", rep.continuous_scan);
  write_scan_outputs(out, "fourmode", rep.fourmode_scan);
  json matched = json::array();
  for (const FeatureMatch& m : rep.matched)
    matched.push_back({{"type", m.continuous_feature.type == Feature::Type::peak ? "peak" : "dip"},
                       {"continuous", m.continuous_feature.center},
                       {"fourmode", m.fourmode_feature.center},
                       {"rel_mismatch", m.rel_mismatch}});
  json only_c = json::array(), only_f = json::array();
  for (const Feature& f : rep.only_continuous) only_c.push_back(feature_json(f, sc.level));
  for (const Feature& f : rep.only_fourmode) only_f.push_back(feature_json(f, sc.level));
  std::ofstream jf(out / "comparison.json");
  jf << json{{"matched", matched}, {"only_continuous", only_c}, {"only_fourmode", only_f}}.dump(2)
     << "\n";
  std::cout << "compare: " << rep.matched.size() << " matched features\n";
  return 0;
}

// ---------------------------------------------------------------- reproduce

int cmd_reproduce(KeyValueConfig cfg, const std::string& figure) {
  if (!cfg.has("run.out")) cfg.set("run.out", "socdw-out/reproduce-" + figure);
  if (figure == "fig1") {
    cfg.set("trap.gamma", 0.8);
    return cmd_states(std::move(cfg));
  }
  if (figure == "fig2") {
    const fs::path out = prepare_out(cfg, "reproduce-fig2");
    std::cerr << "note: the continuous P< panels integrate to t=1000 per point; "
                 "this preset takes tens of minutes\n";
    for (double gamma : {0.8, 1.5}) {
      KeyValueConfig c = cfg;
      c.set("trap.gamma", gamma);
      c.set("trap.f", 0.143);
      c.set("scan.omega_min", 0.1);
      c.set("scan.omega_max", 1.4);
      char label[16];
      std::snprintf(label, sizeof(label), "%.1f", gamma);
      {
        const Grid grid = build_grid(grid_spec(c, true));
        const StationarySet set = stationary_set(grid, trap_params(c));
        const FourModeCoefficients co =
            four_mode_coefficients(set, double_well(grid, trap_params(c)));
        CsvWriter csv(out / ("floquet_gamma" + std::string(label) + ".csv"),
                      {"omega", "lambda1", "lambda2", "lambda3", "lambda4",
                       "unitarity_residual"});
        FloquetResult prev;
        bool first = true;
        for (double w = 0.1; w <= 1.4 + 1e-12; w += 0.002) {
          FloquetResult r = floquet_phases(monodromy(assemble(co, 0.143, w)));
          if (!first) match_branches(prev.vectors, r);
          csv.row({w, r.phases[0], r.phases[1], r.phases[2], r.phases[3], r.unitarity_residual});
          prev = r;
          first = false;
        }
      }
      ScanConfig sc = scan_config(c);
      sc.backend = Backend::continuous;
      sc.omega_step = 0.01;
      write_scan_outputs(out, "p_gamma" + std::string(label), frequency_scan(sc));
    }
    std::cout << "reproduce fig2: wrote " << out << "\n";
    return 0;
  }
  if (figure == "fig3") {
    cfg.set("trap.f", 0.143);
    cfg.set("gamma.min", 0.3);
    cfg.set("gamma.max", 2.0);
    cfg.set("gamma.step", 0.05);
    return cmd_gamma_scan(std::move(cfg));
  }
  if (figure == "fig4") {
    const fs::path out = prepare_out(cfg, "reproduce-fig4");
    KeyValueConfig c = cfg;
    c.set("trap.gamma", 0.8);
    c.set("trap.f", 0.0774);
    ScanConfig sc = scan_config(c);
    sc.backend = Backend::continuous;
    sc.omega_min = 0.60;
    sc.omega_max = 0.70;
    sc.omega_step = 0.0025;
    write_scan_outputs(out, "p_scan", frequency_scan(sc));
    for (double w : {0.640, 0.652}) {
      KeyValueConfig ce = c;
      ce.set("trap.omega_mod", w);
      const Grid sgrid = build_grid(grid_spec(ce, true));
      const Grid pgrid = build_grid(grid_spec(ce, false));
      const TrapParams trap = trap_params(ce);
      const StationarySet set = resample_set(stationary_set(sgrid, trap), pgrid);
      Propagator prop(pgrid, trap, prop_config(ce));
      const Trajectory traj = prop.evolve(superposition_input(set, 1.0, 0.0), &set);
      char stem[32];
      std::snprintf(stem, sizeof(stem), "trajectory_omega%.3f", w);
      CsvWriter csv(out / (std::string(stem) + ".csv"),
                    {"t", "norm", "p_left", "p_left_avg", "Sx", "Sy", "Sz", "|c1m|^2",
                     "|c1p|^2", "|c2m|^2", "|c2p|^2", "residual"});
      for (size_t i = 0; i < traj.times.size(); ++i)
        csv.row({traj.times[i], traj.norm[i], traj.p_left[i], traj.p_left_avg[i],
                 traj.spins[i][0], traj.spins[i][1], traj.spins[i][2],
                 std::norm(traj.mode_amplitudes[i][0]), std::norm(traj.mode_amplitudes[i][1]),
                 std::norm(traj.mode_amplitudes[i][2]), std::norm(traj.mode_amplitudes[i][3]),
                 traj.continuum_residual[i]});
    }
    std::cout << "reproduce fig4: wrote " << out << "\n";
    return 0;
  }
  if (figure == "fig5") {
    const fs::path out = prepare_out(cfg, "reproduce-fig5");
    KeyValueConfig c = cfg;
    c.set("trap.gamma", 0.8);
    c.set("trap.f", 0.143);
    ScanConfig sc = scan_config(c);
    sc.backend = Backend::continuous;
    sc.omega_min = 1.0;
    sc.omega_max = 1.4;
    sc.omega_step = 0.005;
    const auto scans = nonlinear_scan(sc, {-0.02, 0.02});
    for (const auto& [g, scan] : scans) {
      char stem[64];
      std::snprintf(stem, sizeof(stem), "points_g%+.4f", g);
      write_scan_outputs(out, stem, scan);
    }
    KeyValueConfig cp = cfg;
    cp.set("trap.gamma", 1.5);
    cp.set("trap.f", 0.143);
    cp.set("prop.g", 0.2);
    ScanConfig plateau = scan_config(cp);
    plateau.backend = Backend::continuous;
    plateau.omega_min = 1.0;
    plateau.omega_max = 1.3;
    plateau.omega_step = 0.01;
    write_scan_outputs(out, "plateau_gamma1.5_g0.2", frequency_scan(plateau));
    std::cout << "reproduce fig5: wrote " << out << "\n";
    return 0;
  }
  throw ConfigError("unknown figure '" + figure + "' (expected fig1..fig5)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "socdw: spin-orbit-coupled atom in a periodically modulated double-well trap.\n"
      "Configuration: flat 'key = value' files with dotted keys (see manifest.txt of any\n"
      "run); flags override file values. SOCDW_WORKERS sets the default worker count.\n"
      "Outputs: full-precision CSV (see --help of each subcommand) plus features JSON."};
  app.require_subcommand(1);
  Cli o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "key = value configuration file");
    sub->add_option("--out", o.out_dir, "output directory (default socdw-out/<command>)");
    sub->add_option("--workers", o.workers, "worker threads (0 = SOCDW_WORKERS or hardware)");
    sub->add_option("--x-max", o.x_max, "grid half extent");
    sub->add_option("--n-points", o.n_points, "propagation grid points");
    sub->add_option("--stationary-n-points", o.stationary_n_points, "eigensolve grid points");
    sub->add_option("--trap-depth,-U", o.U, "well depth U");
    sub->add_option("--well-width,-a", o.a, "well width a");
    sub->add_option("--separation,-d", o.d, "well separation d");
    sub->add_option("--omega-rabi", o.omega_rabi, "Zeeman half splitting");
    sub->add_option("--gamma", o.gamma, "spin-orbit coupling strength");
    sub->add_option("-f,--mod-amplitude", o.f, "modulation amplitude f");
    sub->add_option("--omega", o.omega, "modulation frequency");
    sub->add_option("--dt", o.dt, "propagation step");
    sub->add_option("--t-final", o.t_final, "propagation horizon");
    sub->add_option("--sample-every", o.sample_every, "steps between samples");
    sub->add_option("-g,--nonlinearity", o.g, "mean-field coefficient g");
    sub->add_option("--backend", o.backend, "continuous|fourmode");
    sub->add_option("--omega-min", o.omega_min, "scan lower bound");
    sub->add_option("--omega-max", o.omega_max, "scan upper bound");
    sub->add_option("--omega-step", o.omega_step, "scan step / crossing resolution");
    sub->add_option("--c1", o.c1, "input weight on |1->");
    sub->add_option("--c2", o.c2, "input weight on |2->");
    sub->add_option("--level", o.level, "feature detection level");
    sub->add_option("--g-values", o.g_values, "comma list of nonlinearities");
    sub->add_option("--gamma-min", o.gamma_min, "gamma scan lower bound");
    sub->add_option("--gamma-max", o.gamma_max, "gamma scan upper bound");
    sub->add_option("--gamma-step", o.gamma_step, "gamma scan step");
  };

  auto* states = app.add_subcommand(
      "states", "bound states: energies.csv, modes.csv, wellmodes.csv, spins.csv, potentials");
  auto* coeffs = app.add_subcommand("coeffs", "four-mode coefficients (coefficients.json)");
  auto* evolve = app.add_subcommand(
      "evolve", "driven propagation; trajectory.csv: t,norm,p_left,p_left_avg,Sx..residual");
  auto* floquet =
      app.add_subcommand("floquet", "Floquet phases vs omega (floquet.csv, tracked branches)");
  auto* crossings =
      app.add_subcommand("crossings", "quasi-energy crossings (crossings.csv: omega,a,b,class)");
  auto* scan = app.add_subcommand("scan", "P<(t_final) vs omega + detected features");
  auto* gscan = app.add_subcommand("gamma-scan",
                                   "doublet gaps and suppression widths vs gamma "
                                   "(gaps.csv, widths.csv)");
  auto* nscan =
      app.add_subcommand("nonlinear-scan", "continuous scans per nonlinearity g (with baseline)");
  auto* compare =
      app.add_subcommand("compare", "continuous vs four-mode features (comparison.json)");
  auto* reproduce = app.add_subcommand("reproduce", "figure presets fig1..fig5");
  reproduce->add_option("figure", o.figure, "fig1|fig2|fig3|fig4|fig5")->required();
  for (CLI::App* sub :
       {states, coeffs, evolve, floquet, crossings, scan, gscan, nscan, compare, reproduce})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    KeyValueConfig cfg = defaults();
    apply_overrides(cfg, o);
    if (states->parsed()) return cmd_states(std::move(cfg));
    if (coeffs->parsed()) return cmd_coeffs(std::move(cfg));
    if (evolve->parsed()) return cmd_evolve(std::move(cfg));
    if (floquet->parsed()) return cmd_floquet(std::move(cfg));
    if (crossings->parsed()) return cmd_crossings(std::move(cfg));
    if (scan->parsed()) return cmd_scan(std::move(cfg));
    if (gscan->parsed()) return cmd_gamma_scan(std::move(cfg));
    if (nscan->parsed()) return cmd_nonlinear_scan(std::move(cfg));
    if (compare->parsed()) return cmd_compare(std::move(cfg));
    if (reproduce->parsed()) return cmd_reproduce(std::move(cfg), o.figure);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

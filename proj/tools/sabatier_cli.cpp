//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sabatier/sabatier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sabatier;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNonconvergence = 3, kValidation = 4 };

struct OptimizeSettings {
  std::string problem = "tracking";
  std::string temperature_model = "constant";
  double flow_rate = 50.0;  // mL/min, tracking
  double chi_des = 0.85;
  std::vector<double> gamma_schedule;  // empty: per-model default
  double tolerance = 0.0;              // 0: per-problem default
  int max_iterations = 200;
  double u_a = 50.0, u_b = 150.0, u_b_step = 50.0, u_b_cap = 500.0;
};

struct RunConfig {
  std::string species = default_species_path().string();
  std::string experiments = (fs::path(SABATIER_DATA_DIR) / "experiments.csv").string();
  std::string out = "out";
  std::uint64_t seed = 1;
  int jobs = 1;
  ReactorConfig reactor;
  KineticParams kinetics = reference_kinetics();
  bool reaction = true;
  NewtonOptions newton;
  double wall_temperature_C = 400.0;
  double flow_rate = 150.0;
  Vec initial_guess = identification_initial_guess();
  double fit_tolerance = 1e-6;
  OptimizeSettings optimize;
  double T_min_C = 200.0, T_max_C = 600.0, T_step_C = 10.0;
  std::vector<double> pressures_bar{1.0, 5.0, 10.0, 20.0};
  double noise = 0.0;
};

// ---------------------------------------------------------------- config io

template <class T>
void get(const YAML::Node &n, const char *key, T &dst, const std::string &where) {
  if (const auto v = n[key]) {
    try {
      dst = v.as<T>();
    } catch (const YAML::Exception &) {
      throw ConfigError(where + "." + key + ": wrong type");
    }
  }
}

void known_keys(const YAML::Node &n, std::initializer_list<const char *> keys,
                const std::string &where) {
  if (!n)
    return;
  if (!n.IsMap())
    throw ConfigError(where + " must be a mapping");
  for (const auto &kv: n) {
    const auto k = kv.first.as<std::string>();
    bool ok = false;
    for (const char *s: keys)
      ok = ok || k == s;
    if (!ok)
      throw ConfigError("unknown config key '" + (where.empty() ? k : where + "." + k) + "'");
  }
}

RunConfig load_config(const std::string &path) {
  RunConfig c;
  if (path.empty())
    return c;
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile &) {
    throw ConfigError("cannot open config file " + path);
  } catch (const YAML::Exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (root.IsNull())
    return c;
  known_keys(root, {"species", "experiments", "out", "seed", "jobs", "reactor", "kinetics",
                    "newton", "simulate", "fit", "optimize", "equilibrium", "generate"},
             "");
  get(root, "species", c.species, "");
  get(root, "experiments", c.experiments, "");
  get(root, "out", c.out, "");
  get(root, "seed", c.seed, "");
  get(root, "jobs", c.jobs, "");

  const auto r = root["reactor"];
  known_keys(r, {"length", "inlet_fraction", "width", "height", "n_channels", "permeability",
                 "h_fs", "p_ref", "n_nodes", "inlet_mole_fractions"},
             "reactor");
  if (r) {
    auto &rc = c.reactor;
    get(r, "length", rc.length, "reactor");
    get(r, "inlet_fraction", rc.inlet_fraction, "reactor");
    get(r, "width", rc.width, "reactor");
    get(r, "height", rc.height, "reactor");
    get(r, "n_channels", rc.n_channels, "reactor");
    get(r, "permeability", rc.permeability, "reactor");
    get(r, "h_fs", rc.h_fs, "reactor");
    get(r, "p_ref", rc.p_ref, "reactor");
    get(r, "n_nodes", rc.n_nodes, "reactor");
    std::vector<double> x;
    get(r, "inlet_mole_fractions", x, "reactor");
    if (!x.empty()) {
      if (x.size() != 4)
        throw ConfigError("reactor.inlet_mole_fractions needs 4 entries (CO2, H2, CH4, H2O)");
      rc.X_in = {x[0], x[1], x[2], x[3]};
    }
  }

  const auto k = root["kinetics"];
  known_keys(k, {"enabled", "E_a", "A", "n"}, "kinetics");
  if (k) {
    get(k, "enabled", c.reaction, "kinetics");
    get(k, "E_a", c.kinetics.E_a, "kinetics");
    double A = std::exp(c.kinetics.logA);
    get(k, "A", A, "kinetics");
    if (!(A > 0.0))
      throw ConfigError("kinetics.A must be positive (set enabled: false to switch off the reaction)");
    c.kinetics.logA = std::log(A);
    get(k, "n", c.kinetics.n, "kinetics");
    if (!(c.kinetics.n >= 0.0))
      throw ConfigError("kinetics.n must be non-negative");
  }

  const auto nw = root["newton"];
  known_keys(nw, {"tolerance", "max_iterations"}, "newton");
  if (nw) {
    get(nw, "tolerance", c.newton.tolerance, "newton");
    get(nw, "max_iterations", c.newton.max_iterations, "newton");
  }

  const auto s = root["simulate"];
  known_keys(s, {"wall_temperature_C", "flow_rate"}, "simulate");
  if (s) {
    get(s, "wall_temperature_C", c.wall_temperature_C, "simulate");
    get(s, "flow_rate", c.flow_rate, "simulate");
  }

  const auto f = root["fit"];
  known_keys(f, {"initial_guess", "tolerance"}, "fit");
  if (f) {
    get(f, "initial_guess", c.initial_guess, "fit");
    if (c.initial_guess.size() != 3)
      throw ConfigError("fit.initial_guess needs [E_a in kJ/mol, log A, n]");
    get(f, "tolerance", c.fit_tolerance, "fit");
  }

  const auto o = root["optimize"];
  known_keys(o, {"problem", "temperature_model", "flow_rate", "chi_des", "gamma_schedule",
                 "tolerance", "max_iterations", "u_a", "u_b", "u_b_step", "u_b_cap"},
             "optimize");
  if (o) {
    auto &op = c.optimize;
    get(o, "problem", op.problem, "optimize");
    get(o, "temperature_model", op.temperature_model, "optimize");
    get(o, "flow_rate", op.flow_rate, "optimize");
    get(o, "chi_des", op.chi_des, "optimize");
    get(o, "gamma_schedule", op.gamma_schedule, "optimize");
    get(o, "tolerance", op.tolerance, "optimize");
    get(o, "max_iterations", op.max_iterations, "optimize");
    get(o, "u_a", op.u_a, "optimize");
    get(o, "u_b", op.u_b, "optimize");
    get(o, "u_b_step", op.u_b_step, "optimize");
    get(o, "u_b_cap", op.u_b_cap, "optimize");
  }

  const auto e = root["equilibrium"];
  known_keys(e, {"T_min_C", "T_max_C", "T_step_C", "pressures_bar"}, "equilibrium");
  if (e) {
    get(e, "T_min_C", c.T_min_C, "equilibrium");
    get(e, "T_max_C", c.T_max_C, "equilibrium");
    get(e, "T_step_C", c.T_step_C, "equilibrium");
    get(e, "pressures_bar", c.pressures_bar, "equilibrium");
  }

  const auto g = root["generate"];
  known_keys(g, {"noise"}, "generate");
  if (g)
    get(g, "noise", c.noise, "generate");
  return c;
}

std::string annotated_defaults() {
  const RunConfig c;
  const auto &r = c.reactor;
  const auto n = [](double v) { return format_number(v); };
  std::ostringstream os;
  os << "# sabatier run configuration (YAML). Every key is optional.\n"
     << "species: " << c.species << "  # NASA-7 and transport fit coefficients\n"
     << "experiments: " << c.experiments << "  # id,T_wall_C,flow_mln_min,conversion\n"
     << "out: " << c.out << "  # output directory\n"
     << "seed: " << c.seed << "  # noise seed for generate-data\n"
     << "jobs: " << c.jobs << "  # threads for the independent identification solves\n"
     << "\nreactor:\n"
     << "  length: " << n(r.length) << "  # m, catalytic section of one channel\n"
     << "  inlet_fraction: " << n(r.inlet_fraction)
     << "  # inert inlet section, as a fraction of length\n"
     << "  width: " << n(r.width) << "  # m, channel cross-section\n"
     << "  height: " << n(r.height) << "  # m\n"
     << "  n_channels: " << r.n_channels << "  # identical parallel channels\n"
     << "  permeability: " << n(r.permeability) << "  # m^2, Brinkman drag of the channel\n"
     << "  h_fs: " << n(r.h_fs) << "  # W/(K m^3), gas-wall heat transfer\n"
     << "  p_ref: " << n(r.p_ref) << "  # Pa, operating pressure (10 bar)\n"
     << "  n_nodes: " << r.n_nodes << "  # uniform mesh, 1000 elements\n"
     << "  inlet_mole_fractions: [" << n(r.X_in[0]) << ", " << n(r.X_in[1]) << ", "
     << n(r.X_in[2]) << ", " << n(r.X_in[3]) << "]  # CO2, H2, CH4, H2O; stoichiometric feed\n"
     << "\nkinetics:  # identified kinetics\n"
     << "  enabled: true\n"
     << "  E_a: " << n(c.kinetics.E_a) << "  # J/mol\n"
     << "  A: " << n(std::exp(c.kinetics.logA)) << "  # 1/s (mol/m^3)^(1-5n)\n"
     << "  n: " << n(c.kinetics.n) << "  # empirical exponent\n"
     << "\nnewton:\n"
     << "  tolerance: " << n(c.newton.tolerance) << "  # scaled residual max-norm\n"
     << "  max_iterations: " << c.newton.max_iterations << "\n"
     << "\nsimulate:\n"
     << "  wall_temperature_C: " << n(c.wall_temperature_C) << "\n"
     << "  flow_rate: " << n(c.flow_rate) << "  # mL/min at normal conditions, whole reactor\n"
     << "\nfit:\n"
     << "  initial_guess: [65, 12, 0.222]  # E_a in kJ/mol, log A, n\n"
     << "  tolerance: " << n(c.fit_tolerance) << "  # relative stationarity\n"
     << "\noptimize:\n"
     << "  problem: tracking  # identification | tracking | flow\n"
     << "  temperature_model: constant  # constant | two_stage | three_stage | distributed\n"
     << "  flow_rate: 50  # mL/min, tracking only\n"
     << "  chi_des: 0.85  # required CO2 conversion, flow only\n"
     << "  gamma_schedule: []  # empty: 10^0..10^6 (staged), 7^0..7^7 (distributed)\n"
     << "  tolerance: 0  # 0: 1e-4 (tracking), 1e-2 per penalty stage (flow), 1e-6 (fit)\n"
     << "  max_iterations: 200\n"
     << "  u_a: 50  # mL/min, lower flow bound\n"
     << "  u_b: 150  # mL/min, first upper flow bound; raised by u_b_step while active\n"
     << "  u_b_step: 50\n"
     << "  u_b_cap: 500\n"
     << "\nequilibrium:\n"
     << "  T_min_C: 200\n"
     << "  T_max_C: 600\n"
     << "  T_step_C: 10\n"
     << "  pressures_bar: [1, 5, 10, 20]\n"
     << "\ngenerate:\n"
     << "  noise: 0  # half-width of additive uniform noise on the conversion\n";
  return os.str();
}

// ------------------------------------------------------------------ output

double sig12(double v) { return std::isfinite(v) ? std::stod(format_number(v)) : v; }

json sig12(const std::vector<double> &v) {
  json a = json::array();
  for (double x: v)
    a.push_back(sig12(x));
  return a;
}

/// Rounds every floating-point number in j to 12 significant digits.
void round_json(json &j) {
  if (j.is_number_float())
    j = sig12(j.get<double>());
  else if (j.is_structured())
    for (auto &v: j)
      round_json(v);
}

fs::path out_file(const RunConfig &c, const std::string &name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

void write_json(const RunConfig &c, const std::string &name, json j) {
  round_json(j);
  std::ofstream(out_file(c, name)) << j.dump(2) << '\n';
  std::cout << "wrote " << out_file(c, name).string() << '\n';
}

struct Context {
  RunConfig cfg;
  SpeciesTable species;
  ReactorModel model;
  Context(RunConfig c)
      : cfg(std::move(c)), species(load_species_table(cfg.species)), model(species, cfg.reactor) {
    if (cfg.jobs < 1)
      throw ConfigError("jobs must be at least 1");
  }
  KineticParams kinetics() const { return cfg.reaction ? cfg.kinetics : no_reaction(); }
};

std::string solve_summary(const SolveCounts &s) {
  return std::to_string(s.state + s.adjoint) + " solves (" + std::to_string(s.state) +
         " state, " + std::to_string(s.adjoint) + " adjoint)";
}

// ---------------------------------------------------------------- commands

int cmd_equilibrium(const RunConfig &cfg) {
  const auto tab = load_species_table(cfg.species);
  if (!(cfg.T_step_C > 0.0) || cfg.T_max_C < cfg.T_min_C || cfg.pressures_bar.empty())
    throw ConfigError("equilibrium: need T_step_C > 0, T_max_C >= T_min_C and pressures");
  std::ofstream os(out_file(cfg, "equilibrium.csv"));
  os << "T_C,T_K,p_bar,conversion,X_CO2,X_H2,X_CH4,X_H2O\n";
  const int steps = static_cast<int>(std::floor((cfg.T_max_C - cfg.T_min_C) / cfg.T_step_C + 1e-9));
  for (double p: cfg.pressures_bar)
    for (int i = 0; i <= steps; ++i) {
      const double Tc = cfg.T_min_C + i * cfg.T_step_C;
      const auto e = equilibrium_conversion(tab, Tc + constants::kZeroCelsius, p * 1e5);
      os << format_number(Tc) << ',' << format_number(Tc + constants::kZeroCelsius) << ','
         << format_number(p) << ',' << format_number(e.conversion);
      for (double x: e.X)
        os << ',' << format_number(x);
      os << '\n';
    }
  std::cout << "wrote " << out_file(cfg, "equilibrium.csv").string() << '\n';
  return kOk;
}

int cmd_simulate(const RunConfig &cfg) {
  Context ctx(cfg);
  const auto &m = ctx.model;
  const auto c = operating_point(m, cfg.wall_temperature_C + constants::kZeroCelsius,
                                 cfg.flow_rate, ctx.kinetics());
  const auto sol = solve_state(m, c, cfg.newton);
  {
    std::ofstream os(out_file(cfg, "profile.csv"));
    write_profile_csv(os, m, sol.y);
  }
  const double chi = conversion_at_outlet(m, sol.y);
  const double n_in = molar_inflow(cfg.flow_rate, m.config());
  const auto cons = conservation_report(m, c, sol.y);
  json j{{"wall_temperature_K", c.wall.values().front()},
         {"flow_rate_ml_min", cfg.flow_rate},
         {"inlet_velocity_m_s", m.inlet_velocity(c)},
         {"conversion", chi},
         {"molar_inflow_mol_s", n_in},
         {"product_yield_mol_s", product_yield(chi, n_in)},
         {"methane_yield_mol_s", product_yield(chi, n_in) / 3.0},
         {"outlet_mass_flow_kg_s", outlet_mass_flow(m, sol.y) * m.config().n_channels},
         {"max_wall_deviation_K", max_wall_deviation(m, c, sol.y)},
         {"newton",
          {{"converged", sol.report.converged},
           {"iterations", sol.report.iterations},
           {"residual", sol.report.residual},
           {"residual_history", sol.report.residual_history}}},
         {"mass_balance",
          {{"mass_flux_kg_m2_s", cons.mass_flux}, {"relative_spread", cons.mass_flux_spread}}},
         {"atom_balance",
          {{"relative_imbalance", cons.atom_imbalance},
           {"convective_relative_imbalance", cons.convective_atom_imbalance},
           {"inflow_mol_s_per_channel", cons.atom_inflow},
           {"outflow_mol_s_per_channel", cons.atom_outflow}}},
         {"checks_pass", cons.mass_flux_spread < 1e-6 && cons.atom_imbalance < 1e-6}};
  write_json(cfg, "summary.json", j);
  std::cout << "conversion " << format_number(chi) << ", yield "
            << format_number(product_yield(chi, n_in)) << " mol/s\n";
  return kOk;
}

int run_fit(const RunConfig &cfg) {
  Context ctx(cfg);
  const auto data = load_experiments(cfg.experiments);
  IdentificationProblem p(ctx.model, data, cfg.jobs, cfg.newton);
  LbfgsOptions opt;
  opt.tolerance = cfg.optimize.problem == "identification" && cfg.optimize.tolerance > 0.0
                      ? cfg.optimize.tolerance
                      : cfg.fit_tolerance;
  opt.max_iterations = cfg.optimize.max_iterations;
  const auto r = run_identification(p, cfg.initial_guess, opt);
  {
    std::ofstream os(out_file(cfg, "residuals.csv"));
    os << "id,T_wall_C,flow_mln_min,measured,simulated,residual,newton_iterations,"
          "max_wall_deviation_K\n";
    for (const auto &o: r.outcomes)
      os << o.record.id << ',' << format_number(o.record.T_wall_C) << ','
         << format_number(o.record.flow) << ',' << format_number(o.record.conversion) << ','
         << format_number(o.simulated) << ',' << format_number(o.residual) << ','
         << o.newton_iterations << ',' << format_number(o.max_wall_deviation) << '\n';
  }
  std::cout << "wrote " << out_file(cfg, "residuals.csv").string() << '\n';
  json j{{"kinetics",
          {{"E_a_J_mol", r.kinetics.E_a},
           {"E_a_kJ_mol", r.kinetics.E_a * 1e-3},
           {"log_A", r.kinetics.logA},
           {"A", std::exp(r.kinetics.logA)},
           {"n", r.kinetics.n}}},
         {"mean_abs_conversion_error", r.mean_abs_error},
         {"max_abs_conversion_error", r.max_abs_error},
         {"solves", solve_summary(r.report.counts)},
         {"report", to_json(r.report)}};
  write_json(cfg, "fit.json", j);
  std::cout << "fit: " << r.report.status << " after " << r.report.iterations
            << " iterations, " << solve_summary(r.report.counts) << "\n"
            << "E_a " << format_number(r.kinetics.E_a * 1e-3) << " kJ/mol, log A "
            << format_number(r.kinetics.logA) << ", n " << format_number(r.kinetics.n) << '\n';
  return r.report.converged ? kOk : kNonconvergence;
}

void write_wall_profile(const RunConfig &cfg, const ReactorModel &m, const ReactorControls &c) {
  std::ofstream os(out_file(cfg, "wall_profile.csv"));
  os << "x,T_wall_K,T_wall_C\n";
  for (int i = 0; i < m.mesh().n_nodes(); ++i) {
    const double T = c.wall(m.mesh().node(i));
    os << format_number(m.mesh().node(i)) << ',' << format_number(T) << ','
       << format_number(T - constants::kZeroCelsius) << '\n';
  }
  std::cout << "wrote " << out_file(cfg, "wall_profile.csv").string() << '\n';
}

int cmd_optimize(const RunConfig &cfg) {
  const auto &o = cfg.optimize;
  if (o.problem == "identification")
    return run_fit(cfg);
  if (o.problem != "tracking" && o.problem != "flow")
    throw ConfigError("unknown problem '" + o.problem +
                      "' (expected identification, tracking or flow)");
  const auto kind = parse_temperature_model(o.temperature_model);
  Context ctx(cfg);
  LbfgsOptions lb;
  lb.max_iterations = o.max_iterations;
  WallOptimizationResult r;
  json extra = json::object();
  if (o.problem == "tracking") {
    TrackingProblem p(ctx.model, o.flow_rate, kind, ctx.kinetics(), cfg.newton);
    r = run_tracking(p, std::nullopt, lb);
    if (o.tolerance > 0.0) {
      lb.tolerance = o.tolerance;
      r.report = projected_lbfgs(p, Vec(p.size(), 573.15), lb);
      p.value(r.report.x);
      r.wall = r.report.x;
      r.conversion = conversion_at_outlet(ctx.model, p.state().y);
      r.yield = product_yield(r.conversion, molar_inflow(r.flow, ctx.model.config()));
    }
    write_wall_profile(cfg, ctx.model, p.controls());
  } else {
    FlowProblem p(ctx.model, o.chi_des, kind, o.u_a, o.u_b, ctx.kinetics(), cfg.newton);
    FlowRunOptions fo;
    fo.u_a = o.u_a;
    fo.u_b = o.u_b;
    fo.u_b_step = o.u_b_step;
    fo.u_b_cap = o.u_b_cap;
    fo.gammas = o.gamma_schedule;
    if (o.tolerance > 0.0)
      fo.inner_tolerance = o.tolerance;
    fo.lbfgs = lb;
    r = run_flow_maximization(p, std::nullopt, fo);
    extra["chi_des"] = o.chi_des;
    extra["flow_upper_bounds"] = r.upper_bounds;
    json h = json::array();
    for (const auto &hr: r.homotopy)
      h.push_back(to_json(hr));
    extra["homotopy"] = h;
    write_wall_profile(cfg, ctx.model, p.controls());
  }
  json j{{"problem", o.problem},
         {"temperature_model", o.temperature_model},
         {"flow_rate_ml_min", r.flow},
         {"conversion", r.conversion},
         {"product_yield_mol_s", r.yield},
         {"wall_parameters_K", r.wall},
         {"solves", solve_summary(r.report.counts)},
         {"report", to_json(r.report)}};
  j.update(extra);
  write_json(cfg, "report.json", j);
  std::cout << o.problem << " (" << o.temperature_model << "): " << r.report.status
            << ", flow " << format_number(r.flow) << " mL/min, conversion "
            << format_number(r.conversion) << ", yield " << format_number(r.yield)
            << " mol/s, " << solve_summary(r.report.counts) << '\n';
  return r.report.converged ? kOk : kNonconvergence;
}

int cmd_generate(const RunConfig &cfg) {
  Context ctx(cfg);
  if (!(cfg.noise >= 0.0))
    throw ConfigError("generate.noise must be non-negative");
  const auto data =
      generate_synthetic_experiments(ctx.model, ctx.kinetics(), cfg.noise, cfg.seed, cfg.jobs);
  std::ofstream os(out_file(cfg, "experiments.csv"));
  save_experiments(os, data);
  std::cout << "wrote " << out_file(cfg, "experiments.csv").string() << " (" << data.size()
            << " experiments)\n";
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"sabatier: 1D methanation reactor simulation and optimization"};
  app.require_subcommand(1);
  std::string config_path, out, species, experiments;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  app.add_option("--config", config_path, "YAML run configuration");
  app.add_option("--out", out, "output directory");
  app.add_option("--species", species, "species data file");
  app.add_option("--experiments", experiments, "experiment CSV");
  app.add_option("--seed", seed, "noise seed");
  app.add_option("--jobs", jobs, "worker threads");

  auto *eq = app.add_subcommand("equilibrium", "equilibrium conversion over a (T, p) grid");
  auto *sim = app.add_subcommand("simulate", "solve one operating point");
  auto *fit = app.add_subcommand("fit", "identify kinetic parameters from experiments");
  auto *opt = app.add_subcommand("optimize", "wall temperature / flow optimization");
  auto *gen = app.add_subcommand("generate-data", "synthetic experiment CSV");
  auto *pc = app.add_subcommand("print-config", "print the annotated default configuration");

  std::optional<std::string> problem, model;
  std::optional<double> flow, chi_des, noise;
  opt->add_option("--problem", problem, "identification | tracking | flow");
  opt->add_option("--temperature-model", model, "constant | two_stage | three_stage | distributed");
  opt->add_option("--flow-rate", flow, "mL/min (tracking)");
  opt->add_option("--chi-des", chi_des, "required conversion (flow)");
  gen->add_option("--noise", noise, "half-width of additive uniform conversion noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (pc->parsed()) {
      std::cout << annotated_defaults();
      return kOk;
    }
    RunConfig cfg = load_config(config_path);
    if (!out.empty())
      cfg.out = out;
    if (!species.empty())
      cfg.species = species;
    if (!experiments.empty())
      cfg.experiments = experiments;
    if (seed)
      cfg.seed = *seed;
    if (jobs)
      cfg.jobs = *jobs;
    if (problem)
      cfg.optimize.problem = *problem;
    if (model)
      cfg.optimize.temperature_model = *model;
    if (flow)
      cfg.optimize.flow_rate = *flow;
    if (chi_des)
      cfg.optimize.chi_des = *chi_des;
    if (noise)
      cfg.noise = *noise;
    cfg.reactor.validate();

    if (eq->parsed())
      return cmd_equilibrium(cfg);
    if (sim->parsed())
      return cmd_simulate(cfg);
    if (fit->parsed())
      return run_fit(cfg);
    if (opt->parsed())
      return cmd_optimize(cfg);
    if (gen->parsed())
      return cmd_generate(cfg);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NonconvergenceError &e) {
    std::cerr << "nonconvergence: " << e.what() << '\n';
    return kNonconvergence;
  } catch (const SolverError &e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kNonconvergence;
  } catch (const ValidationError &e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kValidation;
  } catch (const RangeError &e) {
    std::cerr << "range error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fd_check.hpp"
#include "sabatier/sabatier.hpp"

using namespace sabatier;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const SpeciesTable &table() {
  static const SpeciesTable tab = load_species_table(default_species_path());
  return tab;
}

const ReactorModel &full_model() {
  static const ReactorModel m(table(), ReactorConfig{});
  return m;
}

const ReactorModel &coarse_model() {
  static const ReactorModel m = [] {
    ReactorConfig cfg;
    cfg.n_nodes = 201;
    return ReactorModel(table(), cfg);
  }();
  return m;
}

std::string fmt(const char *f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double round_sig(double v, int digits) {
  if (v == 0.0)
    return 0.0;
  const double e = std::floor(std::log10(std::abs(v))) - (digits - 1);
  return std::round(v / std::pow(10.0, e)) * std::pow(10.0, e);
}

const std::array<double, 3> kFlows{50.0, 100.0, 150.0};
const std::array<TemperatureModelKind, 4> kKinds{
    TemperatureModelKind::Constant, TemperatureModelKind::TwoStage,
    TemperatureModelKind::ThreeStage, TemperatureModelKind::Distributed};

// Printed molar product yields (mol/s), rows 50/100/150 mL/min.
const double kPrintedYields[3][4] = {{2.131e-05, 2.171e-05, 2.180e-05, 2.189e-05},
                              {4.119e-05, 4.225e-05, 4.250e-05, 4.275e-05},
                              {5.988e-05, 6.166e-05, 6.210e-05, 6.251e-05}};

// Converged states collected along the way for the conservation suite.
struct SavedState {
  std::string label;
  ReactorControls controls;
  std::vector<double> y;
};
std::vector<SavedState> &saved_states() {
  static std::vector<SavedState> s;
  return s;
}

// ------------------------------------------------------------------ 1

Outcome yield_identity() {
  const ReactorConfig cfg;
  int matched = 0;
  std::ostringstream bad;
  for (int f = 0; f < 3; ++f)
    for (int k = 0; k < 4; ++k) {
      const double n_in = molar_inflow(kFlows[f], cfg);
      const double chi = round_sig(kPrintedYields[f][k] * 5.0 / (3.0 * n_in), 4);
      const double y = round_sig(product_yield(chi, n_in), 4);
      if (std::abs(y - kPrintedYields[f][k]) <= 1e-9 * kPrintedYields[f][k] && chi > 0.0 && chi < 1.0)
        ++matched;
      else
        bad << " (" << kFlows[f] << " mL/min, model " << k << ": " << y << ")";
    }
  const double chi50 = kPrintedYields[0][0] * 5.0 / (3.0 * molar_inflow(50.0, cfg));
  return {matched == 12, fmt("%d/12 yields reproduced; implied chi(50, constant) = %.4f", matched,
                             chi50) +
                             bad.str()};
}

// ------------------------------------------------------------------ 2

Outcome tracking() {
  const auto &m = full_model();
  double chi[3][4];
  std::ostringstream os;
  bool ok = true;
  for (int f = 0; f < 3; ++f) {
    for (int k = 0; k < 4; ++k) {
      TrackingProblem p(m, kFlows[f], kKinds[k]);
      const auto r = run_tracking(p);
      chi[f][k] = r.conversion;
      ok = ok && r.report.converged;
      saved_states().push_back({fmt("tracking %g mL/min model %d", kFlows[f], k), p.controls(),
                                p.state().y});
    }
    for (int k = 1; k < 4; ++k)
      ok = ok && chi[f][k - 1] <= chi[f][k];
    os << fmt(" %g mL/min: %.6f %.6f %.6f %.6f;", kFlows[f], chi[f][0], chi[f][1], chi[f][2],
              chi[f][3]);
  }
  const bool target = std::abs(chi[0][0] - 0.9553) <= 0.02;
  return {ok && target, fmt("chi(50, constant) = %.6f vs 0.9553;", chi[0][0]) + os.str()};
}

// ------------------------------------------------------------------ 3

Outcome flow_maximization() {
  const auto &m = full_model();
  FlowProblem p(m, 0.85, TemperatureModelKind::Constant, 50.0, 150.0);
  const auto r = run_flow_maximization(p);
  saved_states().push_back({"flow chi_des 0.85 constant", p.controls(), p.state().y});
  const double df = std::abs(r.flow - 239.74) / 239.74;
  const double dy = std::abs(r.yield - 9.092e-5) / 9.092e-5;
  const double dc = std::abs(r.conversion - 0.85);
  return {df < 0.05 && dy < 0.05 && dc < 1e-4,
          fmt("flow %.2f mL/min (%.2f%%), yield %.4e mol/s (%.2f%%), |chi - 0.85| = %.1e", r.flow,
              100 * df, r.yield, 100 * dy, dc)};
}

// ------------------------------------------------------------------ 4

Outcome gradients() {
  const auto &m = coarse_model();
  NewtonOptions newton;
  newton.polish_steps = 2;
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * u(rng); };
  std::map<std::string, double> worst;

  const auto data = generate_synthetic_experiments(m, reference_kinetics(), 0.0, 1);
  IdentificationProblem ident(m, data, 1, newton);
  for (int s = 0; s < 5; ++s) {
    const Vec x{uniform(48.0, 58.0), uniform(12.0, 14.0), uniform(0.03, 0.3)};
    worst["identification"] = std::max(
        worst["identification"], test::fd_gradient_error(ident, x, test::unit_directions(3)));
  }

  const char *names[] = {"tracking/constant", "tracking/two_stage", "tracking/three_stage",
                         "tracking/distributed"};
  for (int k = 0; k < 4; ++k) {
    for (int s = 0; s < 5; ++s) {
      TrackingProblem p(m, kFlows[s % 3], kKinds[k], reference_kinetics(), newton);
      Vec x(p.size());
      std::vector<Vec> dirs;
      if (kKinds[k] == TemperatureModelKind::Distributed) {
        const double a = uniform(520.0, 700.0), b = uniform(-80.0, 80.0), c = uniform(0.5, 3.0);
        for (std::size_t i = 0; i < x.size(); ++i)
          x[i] = a + b * std::sin(c * M_PI * double(i) / double(x.size() - 1));
        dirs = test::smooth_directions(p.size(), 3, rng);
      } else {
        for (auto &v: x)
          v = uniform(500.0, 800.0);
        dirs = test::unit_directions(p.size());
      }
      worst[names[k]] = std::max(worst[names[k]], test::fd_gradient_error(p, x, dirs));
    }
  }

  for (int s = 0; s < 5; ++s) {
    const auto kind = s % 2 == 0 ? TemperatureModelKind::Constant : TemperatureModelKind::TwoStage;
    FlowProblem p(m, 0.9, kind, 50.0, 400.0, reference_kinetics(), newton);
    p.set_gamma(100.0);
    Vec x(p.size());
    x[0] = uniform(60.0, 250.0);
    for (std::size_t i = 1; i < x.size(); ++i)
      x[i] = uniform(500.0, 800.0);
    worst["flow"] = std::max(worst["flow"],
                             test::fd_gradient_error(p, x, test::unit_directions(p.size())));
  }

  bool ok = true;
  std::ostringstream os;
  for (const auto &[k, v]: worst) {
    ok = ok && v < 1e-6;
    os << ' ' << k << ' ' << fmt("%.1e", v) << ';';
  }
  return {ok, "worst relative error per class (201 nodes):" + os.str()};
}

// ------------------------------------------------------------------ 5

Outcome identification() {
  const auto &m = full_model();
  const auto data = generate_synthetic_experiments(m, reference_kinetics(), 0.0, 1);
  IdentificationProblem p(m, data, 1);
  const auto r = run_identification(p, identification_initial_guess());
  const Vec ref = IdentificationProblem::from_kinetics(reference_kinetics());
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, std::abs(r.report.x[i] - ref[i]) / std::abs(ref[i]));
  const auto &h = r.report.stationarity_history;
  const bool on_tolerance = r.report.converged && h.back() <= 1e-6 * h.front();
  return {worst < 1e-3 && on_tolerance,
          fmt("E_a %.6f kJ/mol, log A %.6f, n %.6f; worst relative error %.1e; %s after %d "
              "iterations, %d state / %d adjoint solves, final stationarity ratio %.1e",
              r.report.x[0], r.report.x[1], r.report.x[2], worst, r.report.status.c_str(),
              r.report.iterations, r.report.counts.state, r.report.counts.adjoint,
              h.back() / h.front())};
}

// ------------------------------------------------------------- 6, 7

struct PointRun {
  double T_C, flow;
  ReactorControls c;
  StateSolution sol;
  std::string error;
};

const std::vector<PointRun> &operating_points() {
  static const std::vector<PointRun> runs = [] {
    std::vector<PointRun> out;
    const auto &m = full_model();
    for (auto [T, flow]: experiment_grid()) {
      PointRun r{T, flow, operating_point(m, T + constants::kZeroCelsius, flow,
                                          reference_kinetics()),
                 {}, {}};
      try {
        r.sol = solve_state(m, r.c);  // plain cold start, no fallback
      } catch (const std::exception &e) {
        r.error = e.what();
      }
      out.push_back(std::move(r));
    }
    return out;
  }();
  return runs;
}

Outcome isothermality() {
  double worst = 0.0;
  for (const auto &r: operating_points()) {
    if (!r.error.empty())
      return {false, fmt("%g C / %g mL/min did not converge: %s", r.T_C, r.flow, r.error.c_str())};
    worst = std::max(worst, max_wall_deviation(full_model(), r.c, r.sol.y));
  }
  return {worst < 1.0, fmt("max |T - T_wall| over 21 points = %.4f K", worst)};
}

Outcome newton_robustness() {
  int converged = 0, quadratic = 0, max_it = 0;
  double worst_res = 0.0;
  std::ostringstream bad;
  for (const auto &r: operating_points()) {
    if (!r.error.empty()) {
      bad << fmt(" %g C/%g mL/min: %s;", r.T_C, r.flow, r.error.c_str());
      continue;
    }
    const auto &rep = r.sol.report;
    if (rep.converged && rep.residual <= 1e-10)
      ++converged;
    worst_res = std::max(worst_res, rep.residual);
    max_it = std::max(max_it, rep.iterations);
    // Local quadratic contraction: r_{k+1} <= C r_k^2 on the tail, where
    // r_k < 1e-3 and r_{k+1} is above round-off.
    const auto &h = rep.residual_history;
    bool seen = false, ok = true;
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
      if (h[k] >= 1e-3 || h[k + 1] <= 1e-12)
        continue;
      seen = true;
      ok = ok && h[k + 1] <= 1e4 * h[k] * h[k];
    }
    if (seen && ok)
      ++quadratic;
    else
      bad << fmt(" %g C/%g mL/min: no quadratic tail;", r.T_C, r.flow);
  }
  return {converged == 21 && quadratic == 21,
          fmt("%d/21 converged from the cold start (max %d iterations, worst residual %.1e), "
              "%d/21 with quadratic contraction",
              converged, max_it, worst_res, quadratic) +
              bad.str()};
}

// ------------------------------------------------------------------ 8

struct GridPoint {
  double T, p, chi;
};
const GridPoint kEquilibriumGrid[] = {
#include "oracles/equilibrium_grid.inc"
};

Outcome equilibrium() {
  double worst = 0.0;
  std::map<double, std::map<double, double>> by_p;  // p -> T -> chi
  for (const auto &g: kEquilibriumGrid) {
    const double chi = equilibrium_conversion(table(), g.T, g.p).conversion;
    worst = std::max(worst, std::abs(chi - g.chi));
    by_p[g.p][g.T] = chi;
  }
  bool dec_T = true, inc_p = true;
  for (const auto &[p, row]: by_p) {
    double prev = 2.0;
    for (const auto &[T, chi]: row) {
      dec_T = dec_T && chi < prev;
      prev = chi;
    }
  }
  for (auto it = std::next(by_p.begin()); it != by_p.end(); ++it)
    for (const auto &[T, chi]: it->second)
      inc_p = inc_p && chi > std::prev(it)->second.at(T);
  const std::size_t n = std::size(kEquilibriumGrid);
  return {n == 50 && worst <= 1e-10 && dec_T && inc_p,
          fmt("%zu points, max |chi - oracle| = %.1e, decreasing in T: %s, increasing in p: %s", n,
              worst, dec_T ? "yes" : "no", inc_p ? "yes" : "no")};
}

// ------------------------------------------------------------------ 9

Outcome conservation() {
  const auto &m = full_model();
  std::vector<SavedState> states = saved_states();
  for (const auto &r: operating_points())
    if (r.error.empty())
      states.push_back({fmt("%g C / %g mL/min", r.T_C, r.flow), r.c, r.sol.y});
  double spread = 0.0, atoms = 0.0, closure = 0.0;
  for (const auto &s: states) {
    const auto rep = conservation_report(m, s.controls, s.y);
    spread = std::max(spread, rep.mass_flux_spread);
    atoms = std::max(atoms, rep.atom_imbalance);
    for (int i = 0; i < m.mesh().n_nodes(); ++i) {
      const double a = s.y[DofLayout::Y(i, 0)], b = s.y[DofLayout::Y(i, 1)],
                   c = s.y[DofLayout::Y(i, 2)];
      const double water = 1.0 - (a + b + c);
      closure = std::max(closure, std::abs((a + b + c) + water - 1.0));
    }
  }
  return {spread < 1e-8 && atoms < 1e-6 && closure <= 4.0 * 2.220446049250313e-16,
          fmt("%zu states: rho u spread %.1e, atom imbalance %.1e, sum Y closure %.1e",
              states.size(), spread, atoms, closure)};
}

}  // namespace

int main(int argc, char **argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, yield_identity},     {2, tracking},          {3, flow_maximization},
      {4, gradients},          {5, identification},    {6, isothermality},
      {7, newton_robustness},  {8, equilibrium},       {9, conservation}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i)
    only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto &[id, run]: criteria) {
    if (!only.empty() && !only.count(id))
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  if (only.empty() || only.count(10))
    std::printf("criterion 10: NOT RUN  fit quality against measured data and the 3D model "
                "comparison are documented targets only\n");
  return failed == 0 ? 0 : 1;
}

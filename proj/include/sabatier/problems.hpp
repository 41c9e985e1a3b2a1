//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sabatier/adjoint.hpp"
#include "sabatier/diagnostics.hpp"
#include "sabatier/lbfgs.hpp"
#include "sabatier/newton.hpp"
#include "sabatier/reactor.hpp"

namespace sabatier {

// ---------------------------------------------------------------- parallel map

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
/// (lowest index) is rethrown after all workers finish.
inline void parallel_for(int n, int jobs, const std::function<void(int)> &fn) {
  jobs = std::clamp(jobs, 1, std::max(1, n));
  std::vector<std::exception_ptr> errors(n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (int i; (i = next++) < n;) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto &th: pool)
      th.join();
  }
  for (auto &e: errors)
    if (e)
      std::rethrow_exception(e);
}

// ----------------------------------------------------------------- experiments

struct ExperimentRecord {
  int id = 0;
  double T_wall_C = 0.0;
  double flow = 0.0;  // mL/min at normal conditions
  double conversion = 0.0;
};

inline constexpr const char *kExperimentHeader = "id,T_wall_C,flow_mln_min,conversion";

inline std::vector<ExperimentRecord> parse_experiments(std::istream &is,
                                                       const std::string &origin = "<stream>") {
  std::string line;
  if (!std::getline(is, line))
    throw ValidationError(origin + ": empty experiment file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kExperimentHeader)
    throw ValidationError(origin + ": bad header '" + line + "', expected '" +
                          kExperimentHeader + "'");
  std::vector<ExperimentRecord> out;
  std::set<std::pair<double, double>> seen;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');)
      f.push_back(cell);
    if (f.size() != 4)
      throw ValidationError(where + ": expected 4 fields, got " + std::to_string(f.size()));
    ExperimentRecord r;
    try {
      std::size_t used = 0;
      r.id = std::stoi(f[0], &used);
      auto num = [&](const std::string &s) {
        std::size_t u = 0;
        const double v = std::stod(s, &u);
        if (u != s.size())
          throw std::invalid_argument(s);
        return v;
      };
      r.T_wall_C = num(f[1]);
      r.flow = num(f[2]);
      r.conversion = num(f[3]);
    } catch (const std::logic_error &) {
      throw ValidationError(where + ": malformed number in '" + line + "'");
    }
    if (!(r.conversion >= 0.0 && r.conversion <= 1.0))
      throw ValidationError(where + ": conversion " + f[3] + " outside [0, 1]");
    if (!(r.flow > 0.0))
      throw ValidationError(where + ": flow rate must be positive");
    if (!seen.insert({r.T_wall_C, r.flow}).second)
      throw ValidationError(where + ": duplicate operating point (" + f[1] + " C, " + f[2] +
                            " mL/min)");
    out.push_back(r);
  }
  if (out.empty())
    throw ValidationError(origin + ": no experiments");
  return out;
}

inline std::vector<ExperimentRecord> load_experiments(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open experiment file " + path);
  return parse_experiments(in, path);
}

/// Shortest round-trip formatting, so save/load is bit-exact.
inline void save_experiments(std::ostream &os, const std::vector<ExperimentRecord> &data) {
  os << kExperimentHeader << '\n';
  for (const auto &r: data)
    os << r.id << ',' << format_exact(r.T_wall_C) << ',' << format_exact(r.flow) << ','
       << format_exact(r.conversion) << '\n';
}

/// The 7 x 3 grid of wall temperatures and flow rates of the shipped dataset.
inline std::vector<std::pair<double, double>> experiment_grid() {
  std::vector<std::pair<double, double>> g;
  for (double flow: {50.0, 100.0, 150.0})
    for (int T = 250; T <= 400; T += 25)
      g.push_back({double(T), flow});
  return g;
}

// -------------------------------------------------------------- state solving

/// Controls of one operating point: constant wall at T_wall (K), flow in mL/min.
inline ReactorControls operating_point(const ReactorModel &m, double T_wall_K, double flow,
                                       const KineticParams &kin) {
  ReactorControls c;
  c.kinetics = kin;
  c.wall = WallTemperatureModel(TemperatureModelKind::Constant, m.mesh(), T_wall_K);
  c.inlet = InletSpec::flow(flow);
  return c;
}

/// Continuation in log A from a slow reaction (1e-4 of the rate) up to the
/// requested kinetics, halving the increment when a step fails.
inline StateSolution solve_state_by_continuation(const ReactorModel &m, const ReactorControls &c,
                                                 const NewtonOptions &opt = {}) {
  ReactorControls ci = c;
  const double target = c.kinetics.logA;
  double s = std::log(1e-4), ds = -s / 4.0;
  ci.kinetics.logA = target + s;
  StateSolution sol = solve_state(m, ci, opt);
  while (s < 0.0) {
    const double next = std::min(0.0, s + ds);
    ci.kinetics.logA = target + next;
    try {
      sol = solve_state(m, ci, sol.y, opt);
      s = next;
      ds *= 1.5;
    } catch (const SolverError &) {
      ds *= 0.5;
    } catch (const RangeError &) {
      ds *= 0.5;
    }
    if (ds < 1e-3)
      throw SolverError("Newton: continuation in log A stalled at " +
                        std::to_string(target + s));
  }
  return sol;
}

/// Newton from a warm start if given, then the cold start, then
/// continuation in the reaction rate.
inline StateSolution solve_state_from(const ReactorModel &m, const ReactorControls &c,
                                      const std::vector<double> *warm,
                                      const NewtonOptions &opt = {}) {
  if (warm && !warm->empty()) {
    try {
      return solve_state(m, c, *warm, opt);
    } catch (const SolverError &) {
    } catch (const RangeError &) {
    }
  }
  try {
    return solve_state(m, c, opt);
  } catch (const SolverError &) {
  } catch (const RangeError &) {
  }
  if (!std::isfinite(c.kinetics.logA))
    return solve_state(m, c, opt);
  try {
    return solve_state_by_continuation(m, c, opt);
  } catch (const RangeError &e) {
    throw SolverError(e.what());
  }
}

struct ExperimentOutcome {
  ExperimentRecord record;
  double simulated = 0.0;
  double residual = 0.0;  // simulated - measured
  int newton_iterations = 0;
  double max_wall_deviation = 0.0;
};

/// Forward model at each grid point; additive uniform noise of half-width
/// `noise` on the conversion, clipped to [0, 1].
inline std::vector<ExperimentRecord> generate_synthetic_experiments(
    const ReactorModel &m, const KineticParams &kin, double noise, std::uint64_t seed,
    int jobs = 1) {
  const auto grid = experiment_grid();
  const int n = static_cast<int>(grid.size());
  std::vector<double> chi(n);
  parallel_for(n, jobs, [&](int i) {
    const auto c = operating_point(m, grid[i].first + constants::kZeroCelsius, grid[i].second,
                                   kin);
    chi[i] = conversion_at_outlet(m, solve_state_from(m, c, nullptr).y);
  });
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ExperimentRecord> out;
  for (int i = 0; i < n; ++i) {
    const double e = noise > 0.0 ? noise * u(rng) : 0.0;
    out.push_back({i + 1, grid[i].first, grid[i].second, std::clamp(chi[i] + e, 0.0, 1.0)});
  }
  return out;
}

// -------------------------------------------------------------- identification

/// Controls x = (E_a in kJ/mol, log A, n); cost sum_l 1/2 (chi_l - chi_exp,l)^2.
class IdentificationProblem : public OptimizationProblem {
public:
  IdentificationProblem(const ReactorModel &m, std::vector<ExperimentRecord> data, int jobs = 1,
                        NewtonOptions newton = {})
      : m_(&m), data_(std::move(data)), jobs_(jobs), newton_(newton),
        box_({-inf(), -inf(), 0.0}, {inf(), inf(), inf()}) {
    warm_.resize(data_.size());
  }

  static KineticParams to_kinetics(const Vec &x) { return {x[0] * 1e3, x[1], x[2]}; }
  static Vec from_kinetics(const KineticParams &k) { return {k.E_a * 1e-3, k.logA, k.n}; }

  std::size_t size() const override { return 3; }
  const BoxConstraint &box() const override { return box_; }
  double first_step_length() const override { return 1.0; }

  double value(const Vec &x) override {
    solve_all(x);
    return cost_;
  }

  double value_and_gradient(const Vec &x, Vec &g) override {
    solve_all(x);
    const int n = static_cast<int>(data_.size());
    std::vector<std::array<double, 3>> parts(n);
    const auto kin = to_kinetics(x);
    parallel_for(n, jobs_, [&](int i) {
      const auto c = controls(i, kin);
      const auto cost = conversion_tracking_cost(data_[i].conversion);
      const auto lambda = solve_adjoint(*m_, sols_[i], cost);
      parts[i] = m_->control_gradient(sols_[i].y, c, lambda).kinetics;
    });
    counts.adjoint += n;
    g.assign(3, 0.0);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 3; ++d)
        g[d] += parts[i][d];
    g[0] *= 1e3;
    return cost_;
  }

  /// Per-experiment results at the last evaluated point.
  std::vector<ExperimentOutcome> outcomes(const Vec &x) {
    solve_all(x);
    std::vector<ExperimentOutcome> out;
    const auto kin = to_kinetics(x);
    for (std::size_t i = 0; i < data_.size(); ++i) {
      ExperimentOutcome o;
      o.record = data_[i];
      o.simulated = chi_[i];
      o.residual = chi_[i] - data_[i].conversion;
      o.newton_iterations = sols_[i].report.iterations;
      o.max_wall_deviation = max_wall_deviation(*m_, controls(i, kin), sols_[i].y);
      out.push_back(o);
    }
    return out;
  }

  const std::vector<ExperimentRecord> &data() const { return data_; }
  const ReactorModel &model() const { return *m_; }

private:
  static double inf() { return std::numeric_limits<double>::infinity(); }

  ReactorControls controls(std::size_t i, const KineticParams &kin) const {
    return operating_point(*m_, data_[i].T_wall_C + constants::kZeroCelsius, data_[i].flow,
                           kin);
  }

  void solve_all(const Vec &x) {
    if (valid_ && x == x_)
      return;
    valid_ = false;
    const int n = static_cast<int>(data_.size());
    const auto kin = to_kinetics(x);
    std::vector<StateSolution> sols(n);
    parallel_for(n, jobs_, [&](int i) {
      sols[i] = solve_state_from(*m_, controls(i, kin), &warm_[i], newton_);
    });
    counts.state += n;
    sols_ = std::move(sols);
    chi_.assign(n, 0.0);
    cost_ = 0.0;
    for (int i = 0; i < n; ++i) {
      warm_[i] = sols_[i].y;
      chi_[i] = conversion_at_outlet(*m_, sols_[i].y);
      const double d = chi_[i] - data_[i].conversion;
      cost_ += 0.5 * d * d;
    }
    x_ = x;
    valid_ = true;
  }

  const ReactorModel *m_;
  std::vector<ExperimentRecord> data_;
  int jobs_;
  NewtonOptions newton_;
  BoxConstraint box_;
  std::vector<std::vector<double>> warm_;
  std::vector<StateSolution> sols_;
  std::vector<double> chi_;
  double cost_ = 0.0;
  Vec x_;
  bool valid_ = false;
};

inline Vec identification_initial_guess() { return {65.0, 12.0, 0.222}; }

struct IdentificationResult {
  KineticParams kinetics;
  OptimizationReport report;
  std::vector<ExperimentOutcome> outcomes;
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
};

inline IdentificationResult run_identification(IdentificationProblem &p, Vec x0,
                                               LbfgsOptions opt = {}) {
  IdentificationResult r;
  r.report = projected_lbfgs(p, std::move(x0), opt);
  r.kinetics = IdentificationProblem::to_kinetics(r.report.x);
  r.outcomes = p.outcomes(r.report.x);
  for (const auto &o: r.outcomes) {
    r.mean_abs_error += std::abs(o.residual);
    r.max_abs_error = std::max(r.max_abs_error, std::abs(o.residual));
  }
  r.mean_abs_error /= static_cast<double>(r.outcomes.size());
  return r;
}

// ------------------------------------------------- wall-temperature problems

/// Common state handling for problems whose controls include a wall
/// temperature model at a given inlet flow.
class WallControlProblem {
public:
  WallControlProblem(const ReactorModel &m, TemperatureModelKind kind, KineticParams kin,
                     NewtonOptions newton)
      : m_(&m), newton_(newton) {
    ctrl_.kinetics = kin;
    ctrl_.wall = WallTemperatureModel(kind, m.mesh(), 573.15);
    ctrl_.inlet = InletSpec::flow(50.0);
  }

  const ReactorModel &model() const { return *m_; }
  const ReactorControls &controls() const { return ctrl_; }
  const StateSolution &state() const { return sol_; }

protected:
  bool distributed() const { return ctrl_.wall.kind() == TemperatureModelKind::Distributed; }

  double wall_inner(const Vec &a, const Vec &b, std::size_t off) const {
    const std::size_t n = ctrl_.wall.size();
    if (distributed()) {
      return mass_inner(ctrl_.wall, Vec(a.begin() + off, a.begin() + off + n),
                        Vec(b.begin() + off, b.begin() + off + n));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += a[off + i] * b[off + i];
    return s;
  }

  Vec wall_gradient(const ControlGradient &g) const {
    return distributed() ? riesz_map(ctrl_.wall, g.wall) : g.wall;
  }

  /// Solves the state for the current ctrl_ unless `key` matches the cache.
  void solve(const Vec &key, SolveCounts &counts) {
    if (valid_ && key == key_)
      return;
    valid_ = false;
    sol_ = solve_state_from(*m_, ctrl_, warm_.empty() ? nullptr : &warm_, newton_);
    ++counts.state;
    warm_ = sol_.y;
    key_ = key;
    valid_ = true;
  }

  const ReactorModel *m_;
  NewtonOptions newton_;
  ReactorControls ctrl_;
  StateSolution sol_;
  std::vector<double> warm_;
  Vec key_;
  bool valid_ = false;
};

inline BoxConstraint wall_box(std::size_t n) {
  return {Vec(n, WallTemperatureModel::kLower), Vec(n, WallTemperatureModel::kUpper)};
}

/// Controls x = wall parameters (K) at a fixed flow; cost 1/2 (chi - 1)^2.
class TrackingProblem : public OptimizationProblem, public WallControlProblem {
public:
  TrackingProblem(const ReactorModel &m, double flow, TemperatureModelKind kind,
                  KineticParams kin = reference_kinetics(), NewtonOptions newton = {})
      : WallControlProblem(m, kind, kin, newton) {
    ctrl_.inlet = InletSpec::flow(flow);
    box_ = wall_box(ctrl_.wall.size());
  }

  std::size_t size() const override { return ctrl_.wall.size(); }
  const BoxConstraint &box() const override { return box_; }
  double inner(const Vec &a, const Vec &b) const override { return wall_inner(a, b, 0); }
  double first_step_length() const override { return 10.0 * norm(Vec(size(), 1.0)); }

  double value(const Vec &x) override {
    set(x);
    return cost_.value(*m_, sol_.y);
  }

  double value_and_gradient(const Vec &x, Vec &g) override {
    set(x);
    const auto lambda = solve_adjoint(*m_, sol_, cost_);
    ++counts.adjoint;
    g = wall_gradient(m_->control_gradient(sol_.y, ctrl_, lambda));
    return cost_.value(*m_, sol_.y);
  }

  double flow() const { return ctrl_.inlet.value; }

private:
  void set(const Vec &x) {
    if (!(valid_ && x == key_))
      ctrl_.wall.set_values(x);
    solve(x, counts);
  }

  OutletCost cost_ = conversion_tracking_cost(1.0);
  BoxConstraint box_;
};

/// Controls x = (flow in mL/min, wall parameters in K); cost -rho u at the
/// outlet plus the Moreau-Yosida penalty of chi >= chi_des.
class FlowProblem : public PenalizedProblem, public WallControlProblem {
public:
  FlowProblem(const ReactorModel &m, double chi_des, TemperatureModelKind kind, double u_a,
              double u_b, KineticParams kin = reference_kinetics(), NewtonOptions newton = {})
      : WallControlProblem(m, kind, kin, newton), chi_des_(chi_des) {
    if (!(chi_des > 0.0 && chi_des < 1.0))
      throw ConfigError("chi_des must lie in (0, 1)");
    set_flow_bounds(u_a, u_b);
    set_gamma(1.0);
  }

  void set_flow_bounds(double u_a, double u_b) {
    if (!(u_a > 0.0 && u_a <= u_b))
      throw ConfigError("flow bounds must satisfy 0 < u_a <= u_b");
    const auto wb = wall_box(ctrl_.wall.size());
    Vec lo{u_a}, hi{u_b};
    lo.insert(lo.end(), wb.lower.begin(), wb.lower.end());
    hi.insert(hi.end(), wb.upper.begin(), wb.upper.end());
    box_ = BoxConstraint(lo, hi);
  }

  void set_gamma(double gamma) override {
    gamma_ = gamma;
    cost_ = penalized_outflow_cost(chi_des_, gamma);
  }
  double gamma() const { return gamma_; }
  double chi_des() const { return chi_des_; }

  std::size_t size() const override { return 1 + ctrl_.wall.size(); }
  const BoxConstraint &box() const override { return box_; }
  double inner(const Vec &a, const Vec &b) const override {
    return a[0] * b[0] + wall_inner(a, b, 1);
  }
  double first_step_length() const override { return 10.0 * norm(Vec(size(), 1.0)); }

  double value(const Vec &x) override {
    set(x);
    return cost_.value(*m_, sol_.y);
  }

  double value_and_gradient(const Vec &x, Vec &g) override {
    set(x);
    const auto lambda = solve_adjoint(*m_, sol_, cost_);
    ++counts.adjoint;
    const auto cg = m_->control_gradient(sol_.y, ctrl_, lambda);
    const Vec gw = wall_gradient(cg);
    g.assign(size(), 0.0);
    g[0] = cg.u_in * inlet_velocity_per_flow(*m_, ctrl_);
    std::copy(gw.begin(), gw.end(), g.begin() + 1);
    return cost_.value(*m_, sol_.y);
  }

  double constraint_violation(const Vec &x) override {
    set(x);
    return std::max(0.0, chi_des_ - conversion_at_outlet(*m_, sol_.y));
  }

private:
  void set(const Vec &x) {
    if (!(valid_ && x == key_)) {
      ctrl_.inlet = InletSpec::flow(x[0]);
      ctrl_.wall.set_values(Vec(x.begin() + 1, x.end()));
    }
    solve(x, counts);
  }

  double chi_des_;
  double gamma_ = 1.0;
  OutletCost cost_;
  BoxConstraint box_;
};

// ------------------------------------------------------------------- drivers

struct WallOptimizationResult {
  double flow = 0.0;  // mL/min
  double conversion = 0.0;
  double yield = 0.0;  // mol/s of CH4 (reactor-wide)
  std::vector<double> wall;  // parameters, K
  OptimizationReport report;
  std::vector<HomotopyReport> homotopy;  // one per flow upper bound tried (flow problem)
  std::vector<double> upper_bounds;
};

inline double tracking_tolerance() { return 1e-4; }

inline WallOptimizationResult run_tracking(TrackingProblem &p, std::optional<Vec> x0 = {},
                                           LbfgsOptions opt = {}) {
  if (!x0)
    x0 = Vec(p.size(), 573.15);
  opt.tolerance = tracking_tolerance();
  WallOptimizationResult r;
  r.report = projected_lbfgs(p, *x0, opt);
  p.value(r.report.x);
  r.flow = p.flow();
  r.wall = r.report.x;
  r.conversion = conversion_at_outlet(p.model(), p.state().y);
  r.yield = product_yield(r.conversion, molar_inflow(r.flow, p.model().config()));
  return r;
}

inline std::vector<double> default_gamma_schedule(TemperatureModelKind kind) {
  return kind == TemperatureModelKind::Distributed ? geometric_schedule(7.0, 7)
                                                   : geometric_schedule(10.0, 6);
}

struct FlowRunOptions {
  double u_a = 50.0;
  double u_b = 150.0;
  double u_b_step = 50.0;
  double u_b_cap = 500.0;
  std::vector<double> gammas;  // empty: the default schedule of the model
  double inner_tolerance = 1e-2;
  LbfgsOptions lbfgs;
};

/// Homotopy in gamma; while the optimal flow sits at its upper bound, the
/// bound is raised and the homotopy rerun from the previous optimum.
inline WallOptimizationResult run_flow_maximization(FlowProblem &p, std::optional<Vec> x0 = {},
                                                    FlowRunOptions opt = {}) {
  const auto &cfg = p.model().config();
  const auto kind = p.controls().wall.kind();
  if (opt.gammas.empty())
    opt.gammas = default_gamma_schedule(kind);
  if (!x0) {
    x0 = Vec(p.size(), 573.15);
    (*x0)[0] = opt.u_a;
  }
  WallOptimizationResult r;
  Vec x = *x0;
  SolveCounts total;
  int iterations = 0;
  for (double u_b = opt.u_b;; u_b += opt.u_b_step) {
    u_b = std::min(u_b, opt.u_b_cap);
    p.set_flow_bounds(opt.u_a, u_b);
    x = p.box().project(x);
    auto h = moreau_yosida_homotopy(p, x, opt.gammas, opt.inner_tolerance, opt.lbfgs);
    x = h.final.x;
    total.state += h.final.counts.state;
    total.adjoint += h.final.counts.adjoint;
    iterations += h.final.iterations;
    r.homotopy.push_back(h);
    r.upper_bounds.push_back(u_b);
    const bool at_bound = x[0] >= u_b * (1.0 - 1e-9);
    if (!at_bound || u_b >= opt.u_b_cap)
      break;
  }
  r.report = r.homotopy.back().final;
  r.report.counts = total;
  r.report.iterations = iterations;
  p.value(x);
  r.flow = x[0];
  r.wall.assign(x.begin() + 1, x.end());
  r.conversion = conversion_at_outlet(p.model(), p.state().y);
  r.yield = product_yield(r.conversion, molar_inflow(r.flow, cfg));
  r.report.constraint_violation = std::abs(r.conversion - p.chi_des());
  return r;
}

}  // namespace sabatier

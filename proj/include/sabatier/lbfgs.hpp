//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "sabatier/common.hpp"

namespace sabatier {

using Vec = std::vector<double>;

struct BoxConstraint {
  Vec lower, upper;

  BoxConstraint() = default;
  BoxConstraint(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) { validate(); }
  static BoxConstraint unbounded(std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    return {Vec(n, -inf), Vec(n, inf)};
  }

  std::size_t size() const { return lower.size(); }

  void validate() const {
    if (lower.size() != upper.size())
      throw ValidationError("box constraint: bound vectors differ in length");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] <= upper[i]))
        throw ValidationError("box constraint: lower > upper at component " +
                              std::to_string(i));
  }

  Vec project(Vec x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  }

  bool contains(const Vec &x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= lower[i] && x[i] <= upper[i]))
        return false;
    return true;
  }
};

struct SolveCounts {
  int state = 0;
  int adjoint = 0;
};

/// Smooth objective on a box. gradient() returns the Riesz representative
/// with respect to inner().
class OptimizationProblem {
public:
  virtual ~OptimizationProblem() = default;

  virtual std::size_t size() const = 0;
  virtual const BoxConstraint &box() const = 0;
  /// Throws SolverError when the state cannot be computed.
  virtual double value(const Vec &x) = 0;
  virtual double value_and_gradient(const Vec &x, Vec &g) = 0;

  virtual double inner(const Vec &a, const Vec &b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += a[i] * b[i];
    return s;
  }
  double norm(const Vec &a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

  /// Length of a steepest-descent step taken without curvature history;
  /// zero keeps the raw gradient.
  virtual double first_step_length() const { return 0.0; }

  /// Constraint violation reported next to the result (zero if none).
  virtual double constraint_violation(const Vec &) { return 0.0; }

  SolveCounts counts;
};

/// || x - P(x - g) || in the problem's norm.
inline double stationarity_measure(const OptimizationProblem &p, const Vec &x, const Vec &g) {
  Vec t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    t[i] = x[i] - g[i];
  t = p.box().project(std::move(t));
  for (std::size_t i = 0; i < x.size(); ++i)
    t[i] = x[i] - t[i];
  return p.norm(t);
}

struct LbfgsOptions {
  int memory = 5;
  double tolerance = 1e-6;       // relative to the initial stationarity measure
  int max_iterations = 200;
  double armijo = 1e-4;
  int max_halvings = 30;
  double active_epsilon = 1e-3;  // upper cap of the epsilon-active set width
  // Relative accuracy of cost values; a failed line search whose predicted
  // decrease is below it counts as stationary to working precision.
  double cost_precision = 1e-10;
  double roundoff = 1e-14;  // relative cost change treated as no change
};

struct OptimizationReport {
  std::string status;  // converged | max_iterations | line_search_failed | solver_failed
  bool converged = false;
  int iterations = 0;
  int restarts = 0;
  Vec cost_history;
  Vec stationarity_history;
  SolveCounts counts;
  Vec x;
  double cost = 0.0;
  double constraint_violation = 0.0;
  std::string message;
};

inline nlohmann::json to_json(const OptimizationReport &r) {
  return {{"status", r.status},
          {"converged", r.converged},
          {"iterations", r.iterations},
          {"restarts", r.restarts},
          {"cost", r.cost},
          {"cost_history", r.cost_history},
          {"stationarity_history", r.stationarity_history},
          {"state_solves", r.counts.state},
          {"adjoint_solves", r.counts.adjoint},
          {"controls", r.x},
          {"constraint_violation", r.constraint_violation},
          {"message", r.message}};
}

namespace detail {
  inline double safe_value(OptimizationProblem &p, const Vec &x) {
    try {
      const double f = p.value(x);
      return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    } catch (const SolverError &) {
      return std::numeric_limits<double>::infinity();
    } catch (const RangeError &) {
      return std::numeric_limits<double>::infinity();
    }
  }
}  // namespace detail

/// Projected L-BFGS for box constraints: the limited-memory inverse Hessian
/// acts on the epsilon-inactive components, the epsilon-active ones take a
/// gradient step, and an Armijo backtracking search runs along the projected
/// path starting from step one.
inline OptimizationReport projected_lbfgs(OptimizationProblem &p, Vec x0,
                                          const LbfgsOptions &opt = {}) {
  OptimizationReport rep;
  const auto &box = p.box();
  if (x0.size() != p.size() || box.size() != p.size())
    throw ValidationError("projected_lbfgs: control vector has the wrong size");
  const SolveCounts start_counts = p.counts;
  const std::size_t n = x0.size();

  Vec x = box.project(std::move(x0)), g(n);
  double f;
  try {
    f = p.value_and_gradient(x, g);
  } catch (const SolverError &e) {
    rep.status = "solver_failed";
    rep.message = e.what();
    rep.x = x;
    rep.counts = {p.counts.state - start_counts.state, p.counts.adjoint - start_counts.adjoint};
    return rep;
  }
  double stat = stationarity_measure(p, x, g);
  const double stat0 = stat;
  rep.cost_history.push_back(f);
  rep.stationarity_history.push_back(stat);

  std::deque<Vec> S, Y;
  std::deque<double> rho;
  double last_step = 0.0;
  auto clear_history = [&] {
    S.clear();
    Y.clear();
    rho.clear();
  };

  for (int k = 0;; ++k) {
    rep.iterations = k;
    if (stat == 0.0 || stat <= opt.tolerance * stat0) {
      rep.status = "converged";
      rep.converged = true;
      break;
    }
    if (k >= opt.max_iterations) {
      rep.status = "max_iterations";
      break;
    }

    const double eps = std::min(opt.active_epsilon, stat);
    std::vector<bool> active(n, false);
    for (std::size_t i = 0; i < n; ++i)
      active[i] = (x[i] - box.lower[i] <= eps && g[i] > 0.0) ||
                  (box.upper[i] - x[i] <= eps && g[i] < 0.0);
    auto mask = [&](Vec v) {
      for (std::size_t i = 0; i < n; ++i)
        if (active[i])
          v[i] = 0.0;
      return v;
    };

    auto direction = [&] {
      Vec q = mask(g);
      const std::size_t m = S.size();
      std::vector<double> alpha(m);
      for (std::size_t j = m; j-- > 0;) {
        const Vec s = mask(S[j]);
        alpha[j] = rho[j] * p.inner(s, q);
        const Vec yj = mask(Y[j]);
        for (std::size_t i = 0; i < n; ++i)
          q[i] -= alpha[j] * yj[i];
      }
      if (m > 0) {
        const double h0 = p.inner(S.back(), Y.back()) / p.inner(Y.back(), Y.back());
        for (auto &v: q)
          v *= h0;
      }
      for (std::size_t j = 0; j < m; ++j) {
        const Vec yj = mask(Y[j]);
        const double beta = rho[j] * p.inner(yj, q);
        const Vec s = mask(S[j]);
        for (std::size_t i = 0; i < n; ++i)
          q[i] += (alpha[j] - beta) * s[i];
      }
      Vec d(n);
      for (std::size_t i = 0; i < n; ++i)
        d[i] = active[i] ? -g[i] : -q[i];
      return d;
    };

    // Without curvature information the steepest-descent step is rescaled to
    // the problem's characteristic length, or twice the last step if shorter.
    auto gradient_step = [&] {
      Vec d(n);
      for (std::size_t i = 0; i < n; ++i)
        d[i] = -g[i];
      double len = p.first_step_length();
      if (len > 0.0 && last_step > 0.0)
        len = std::min(len, 2.0 * last_step);
      const double gn = p.norm(d);
      if (len > 0.0 && gn > 0.0)
        for (auto &v: d)
          v *= len / gn;
      return d;
    };

    Vec d = S.empty() ? Vec() : direction();
    if (S.empty() || !(p.inner(g, d) < 0.0)) {
      if (!S.empty())
        ++rep.restarts;
      clear_history();
      d = gradient_step();
    }

    bool accepted = false;
    Vec xt(n), step(n);
    double ft = f;
    double predicted = 0.0;  // first-order decrease of the full step
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double t = 1.0;
      for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
        for (std::size_t i = 0; i < n; ++i)
          xt[i] = x[i] + t * d[i];
        xt = box.project(std::move(xt));
        for (std::size_t i = 0; i < n; ++i)
          step[i] = xt[i] - x[i];
        const double decrease = p.inner(g, step);
        if (h == 0)
          predicted = std::max(predicted, -decrease);
        if (!(decrease < 0.0))
          continue;
        ft = detail::safe_value(p, xt);
        // A full step whose cost change is below round-off is taken as well.
        if (ft <= f + opt.armijo * decrease ||
            (h == 0 && ft <= f + opt.roundoff * std::abs(f))) {
          accepted = true;
          break;
        }
      }
      if (!accepted && !S.empty()) {
        // Restart with a gradient step.
        ++rep.restarts;
        clear_history();
        d = gradient_step();
      } else {
        break;
      }
    }
    if (!accepted && predicted <= opt.cost_precision * std::abs(f)) {
      rep.status = "converged";
      rep.converged = true;
      rep.message = "stationary to cost precision";
      break;
    }
    if (!accepted) {
      rep.status = "line_search_failed";
      rep.message = "no sufficient decrease after " + std::to_string(opt.max_halvings) +
                    " halvings";
      break;
    }

    Vec gt(n);
    try {
      ft = p.value_and_gradient(xt, gt);
    } catch (const SolverError &e) {
      rep.status = "solver_failed";
      rep.message = e.what();
      break;
    }
    Vec yv(n);
    for (std::size_t i = 0; i < n; ++i)
      yv[i] = gt[i] - g[i];
    const double sy = p.inner(step, yv);
    if (sy <= 1e-14 * p.norm(step) * p.norm(yv)) {
      if (!S.empty())
        ++rep.restarts;
      clear_history();
    } else {
      S.push_back(step);
      Y.push_back(yv);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opt.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    last_step = p.norm(step);
    x.swap(xt);
    g.swap(gt);
    f = ft;
    stat = stationarity_measure(p, x, g);
    rep.cost_history.push_back(f);
    rep.stationarity_history.push_back(stat);
  }

  rep.x = x;
  rep.cost = f;
  rep.constraint_violation = p.constraint_violation(x);
  rep.counts = {p.counts.state - start_counts.state, p.counts.adjoint - start_counts.adjoint};
  return rep;
}

/// Box-constrained problem with a state constraint handled by a
/// Moreau-Yosida penalty of weight gamma.
class PenalizedProblem : public OptimizationProblem {
public:
  virtual void set_gamma(double gamma) = 0;
};

struct HomotopyReport {
  std::vector<double> gammas;
  std::vector<OptimizationReport> stages;
  OptimizationReport final;  // last stage, with counts summed over all stages
};

inline nlohmann::json to_json(const HomotopyReport &h) {
  nlohmann::json j = to_json(h.final);
  j["gamma_schedule"] = h.gammas;
  nlohmann::json st = nlohmann::json::array();
  for (std::size_t i = 0; i < h.stages.size(); ++i)
    st.push_back({{"gamma", h.gammas[i]},
                  {"status", h.stages[i].status},
                  {"iterations", h.stages[i].iterations},
                  {"cost", h.stages[i].cost},
                  {"state_solves", h.stages[i].counts.state},
                  {"adjoint_solves", h.stages[i].counts.adjoint},
                  {"constraint_violation", h.stages[i].constraint_violation}});
  j["stages"] = st;
  return j;
}

/// Solves the penalized problems for an increasing gamma schedule, each
/// warm-started from the previous solution.
inline HomotopyReport moreau_yosida_homotopy(PenalizedProblem &p, Vec x0,
                                             const std::vector<double> &gammas,
                                             double inner_tolerance = 1e-2,
                                             LbfgsOptions opt = {}) {
  if (gammas.empty())
    throw ConfigError("gamma schedule is empty");
  HomotopyReport h;
  h.gammas = gammas;
  opt.tolerance = inner_tolerance;
  Vec x = std::move(x0);
  SolveCounts total;
  int iterations = 0;
  for (double gamma: gammas) {
    if (!(gamma > 0.0))
      throw ConfigError("gamma must be positive");
    p.set_gamma(gamma);
    auto r = projected_lbfgs(p, x, opt);
    total.state += r.counts.state;
    total.adjoint += r.counts.adjoint;
    iterations += r.iterations;
    x = r.x;
    h.stages.push_back(std::move(r));
  }
  h.final = h.stages.back();
  h.final.counts = total;
  h.final.iterations = iterations;
  h.final.converged = std::all_of(h.stages.begin(), h.stages.end(),
                                  [](const OptimizationReport &r) { return r.converged; });
  if (!h.final.converged && h.final.status == "converged")
    h.final.status = "stage_not_converged";
  return h;
}

/// 10^l, l = 0..6 style schedules.
inline std::vector<double> geometric_schedule(double base, int last) {
  std::vector<double> g;
  for (int l = 0; l <= last; ++l)
    g.push_back(std::pow(base, l));
  return g;
}

}  // namespace sabatier

//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sabatier/banded.hpp"
#include "sabatier/common.hpp"
#include "sabatier/reactor.hpp"

namespace sabatier {

struct NewtonOptions {
  double tolerance = 1e-10;  // max-norm of the scaled residual
  int max_iterations = 60;
  double lambda_min = 1e-10;
  int polish_steps = 0;  // undamped steps taken after the tolerance is met
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  int residual_evaluations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;  // scaled max-norm before each step
  std::vector<double> damping_history;
  std::string message;
};

/// Thrown when the damped Newton iteration fails; carries the report.
class NonconvergenceError : public SolverError {
public:
  NonconvergenceError(const std::string &what, NewtonReport report)
      : SolverError(what), report_(std::move(report)) { }
  const NewtonReport &report() const { return report_; }

private:
  NewtonReport report_;
};

struct StateSolution {
  std::vector<double> y;
  NewtonReport report;
  BandedMatrix jacobian;  // at the returned state
  std::vector<double> row_scale, col_scale;  // equilibration used with the Jacobian
};

namespace detail {
  inline double scaled_max(const std::vector<double> &v, const std::vector<double> &s) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      m = std::max(m, std::abs(v[i]) / s[i]);
    return m;
  }

  inline double scaled_rms(const std::vector<double> &v, const std::vector<double> &s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double t = v[i] / s[i];
      acc += t * t;
    }
    return std::sqrt(acc / v.size());
  }

  inline bool all_finite(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  }
}  // namespace detail

/// Damped Newton method with the natural monotonicity test: a damping factor
/// lambda is accepted when the simplified correction (old Jacobian, new
/// residual) satisfies |dy_bar| <= (1 - lambda/2) |dy|; otherwise lambda is
/// halved.
inline StateSolution solve_state(const ReactorModel &model, const ReactorControls &ctrl,
                                 std::vector<double> y0, const NewtonOptions &opt = {}) {
  StateSolution sol;
  auto &rep = sol.report;
  sol.y = std::move(y0);
  const auto rs = model.residual_scales(ctrl);
  const auto vs = model.variable_scales(ctrl);
  sol.row_scale = rs;
  sol.col_scale = vs;
  const int n = model.n_dofs();

  std::vector<double> R;
  BandedMatrix &J = sol.jacobian;
  J = BandedMatrix(n, DofLayout::bandwidth(), DofLayout::bandwidth());
  BandedLU lu;
  double lambda_prev = 1.0;
  int polished = 0;

  for (int it = 0;; ++it) {
    model.residual_and_jacobian(sol.y, ctrl, R, J);
    ++rep.residual_evaluations;
    if (!detail::all_finite(R)) {
      rep.message = "initial state gives a non-finite residual";
      model.check_finite(R);
    }
    rep.residual = detail::scaled_max(R, rs);
    rep.residual_history.push_back(rep.residual);
    if (rep.residual <= opt.tolerance) {
      if (polished < opt.polish_steps && rep.residual > 0.0) {
        ++polished;
        lu.factor(J, rs, vs);
        std::vector<double> dy(R);
        lu.solve(dy);
        for (int i = 0; i < n; ++i)
          sol.y[i] -= dy[i];
        continue;
      }
      rep.converged = true;
      rep.iterations = it;
      return sol;
    }
    if (it >= opt.max_iterations) {
      rep.iterations = it;
      std::ostringstream os;
      os << "Newton: no convergence after " << it << " iterations, scaled residual "
         << rep.residual;
      rep.message = os.str();
      throw NonconvergenceError(rep.message, rep);
    }

    lu.factor(J, rs, vs);
    std::vector<double> dy(R);
    lu.solve(dy);
    for (auto &v: dy)
      v = -v;
    const double norm_dy = detail::scaled_rms(dy, vs);

    double lambda = it == 0 ? 1.0 : std::min(1.0, 4.0 * lambda_prev);
    std::vector<double> trial(n), Rt, dbar;
    bool accepted = false;
    while (lambda >= opt.lambda_min) {
      for (int i = 0; i < n; ++i)
        trial[i] = sol.y[i] + lambda * dy[i];
      bool ok = true;
      try {
        Rt = model.residual(trial, ctrl);
        ++rep.residual_evaluations;
        ok = detail::all_finite(Rt);
      } catch (const RangeError &) {
        ok = false;
      }
      if (ok) {
        dbar = Rt;
        lu.solve(dbar);
        const double norm_bar = detail::scaled_rms(dbar, vs);
        if (std::isfinite(norm_bar) && norm_bar <= (1.0 - 0.5 * lambda) * norm_dy) {
          accepted = true;
          break;
        }
        // Deep in the quadratic regime both norms sit at round-off level.
        if (lambda == 1.0 && detail::scaled_max(Rt, rs) <= opt.tolerance) {
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      rep.iterations = it;
      std::ostringstream os;
      os << "Newton: damping factor fell below " << opt.lambda_min << " at iteration " << it
         << ", scaled residual " << rep.residual;
      rep.message = os.str();
      throw NonconvergenceError(rep.message, rep);
    }
    rep.damping_history.push_back(lambda);
    lambda_prev = lambda;
    sol.y.swap(trial);
  }
}

inline StateSolution solve_state(const ReactorModel &model, const ReactorControls &ctrl,
                                 const NewtonOptions &opt = {}) {
  return solve_state(model, ctrl, model.cold_start(ctrl), opt);
}

}  // namespace sabatier

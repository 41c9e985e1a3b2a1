//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "sabatier/banded.hpp"
#include "sabatier/diagnostics.hpp"
#include "sabatier/newton.hpp"
#include "sabatier/reactor.hpp"

namespace sabatier {

using OutletJet = Jet<6>;
using OutletState = std::array<OutletJet, 6>;  // p, u, T, Y_CO2, Y_H2, Y_CH4 at x = L

template <class S>
S outlet_conversion(const ReactorModel &m, const std::array<S, 6> &z) {
  return S(1.0) - z[3] / m.inlet_composition()[kCO2];
}

template <class S>
S outlet_mass_flux(const ReactorModel &m, const std::array<S, 6> &z) {
  const Composition<S> Y{z[3], z[4], z[5]};
  return density(m.species(), Y, z[2], m.config().p_ref) * z[1];
}

/// Cost that depends on the state through the outlet node only.
struct OutletCost {
  std::function<OutletJet(const ReactorModel &, const OutletState &)> f;

  double value(const ReactorModel &m, const std::vector<double> &y) const {
    return evaluate(m, y).a;
  }

  /// dJ/dy as a full-length vector.
  std::vector<double> state_gradient(const ReactorModel &m, const std::vector<double> &y) const {
    const auto j = evaluate(m, y);
    std::vector<double> g(y.size(), 0.0);
    const int base = DofLayout::p(outlet_node(m));
    for (int a = 0; a < 6; ++a)
      g[base + a] = j.v[a];
    return g;
  }

private:
  OutletJet evaluate(const ReactorModel &m, const std::vector<double> &y) const {
    const int base = DofLayout::p(outlet_node(m));
    OutletState z;
    for (int a = 0; a < 6; ++a)
      z[a] = OutletJet(y[base + a], a);
    return f(m, z);
  }
};

/// 1/2 (chi - target)^2.
inline OutletCost conversion_tracking_cost(double target) {
  return {[target](const ReactorModel &m, const OutletState &z) {
    const auto d = outlet_conversion(m, z) - target;
    return 0.5 * d * d;
  }};
}

/// -rho u at the outlet plus the Moreau-Yosida penalty of chi >= chi_des.
inline OutletCost penalized_outflow_cost(double chi_des, double gamma) {
  return {[chi_des, gamma](const ReactorModel &m, const OutletState &z) {
    const auto v = clamp_nonnegative(gamma * (chi_des - outlet_conversion(m, z)));
    return -outlet_mass_flux(m, z) + v * v / (2.0 * gamma);
  }};
}

inline OutletCost sum_costs(OutletCost a, OutletCost b) {
  return {[a = std::move(a), b = std::move(b)](const ReactorModel &m, const OutletState &z) {
    return a.f(m, z) + b.f(m, z);
  }};
}

/// Solves J(y)^T lambda = -dJ/dy with the Jacobian stored in the state solution.
/// Dirichlet rows are unit rows of J, so their columns drop out of the
/// transposed system by themselves.
inline std::vector<double> solve_adjoint(const StateSolution &sol, const std::vector<double> &dJdy) {
  if (dJdy.size() != sol.y.size())
    throw ValidationError("adjoint right-hand side has the wrong length");
  BandedLU lu;
  if (sol.row_scale.empty())
    lu.factor(sol.jacobian);
  else
    lu.factor(sol.jacobian, sol.row_scale, sol.col_scale);
  std::vector<double> lambda(dJdy.size());
  for (std::size_t i = 0; i < lambda.size(); ++i)
    lambda[i] = -dJdy[i];
  lu.solve(lambda, true);
  return lambda;
}

inline std::vector<double> solve_adjoint(const ReactorModel &m, const StateSolution &sol,
                                         const OutletCost &cost) {
  return solve_adjoint(sol, cost.state_gradient(m, sol.y));
}

/// Solves M g = d for the tridiagonal P1 mass matrix (Thomas algorithm).
inline std::vector<double> riesz_map(const WallTemperatureModel &wall, const std::vector<double> &d) {
  std::vector<double> diag, off;
  wall.mass_matrix(diag, off);
  const std::size_t n = diag.size();
  if (d.size() != n)
    throw ValidationError("Riesz map: size mismatch");
  std::vector<double> c(n), g(n);
  c[0] = off[0] / diag[0];
  g[0] = d[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double den = diag[i] - off[i - 1] * c[i - 1];
    if (i + 1 < n)
      c[i] = off[i] / den;
    g[i] = (d[i] - off[i - 1] * g[i - 1]) / den;
  }
  for (std::size_t i = n - 1; i-- > 0;)
    g[i] -= c[i] * g[i + 1];
  return g;
}

/// <a, b>_M for P1 nodal vectors.
inline double mass_inner(const WallTemperatureModel &wall, const std::vector<double> &a,
                         const std::vector<double> &b) {
  std::vector<double> diag, off;
  wall.mass_matrix(diag, off);
  double s = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    s += diag[i] * a[i] * b[i];
    if (i + 1 < diag.size())
      s += off[i] * (a[i] * b[i + 1] + a[i + 1] * b[i]);
  }
  return s;
}

/// Reduced derivative of the cost with respect to every control family:
/// lambda^T dR/dc (the costs here do not depend on the controls directly).
/// Wall components are plain partial derivatives; apply riesz_map for the
/// L2 representative of a distributed wall temperature.
inline ControlGradient reduced_derivative(const ReactorModel &m, const ReactorControls &c,
                                          const std::vector<double> &y,
                                          const std::vector<double> &lambda) {
  return m.control_gradient(y, c, lambda);
}

/// d u_in / d flow at fixed inlet temperature (flow in mL/min).
inline double inlet_velocity_per_flow(const ReactorModel &m, const ReactorControls &c) {
  return inlet_velocity_from_flow(1.0, m.inlet_temperature(c), m.config());
}

}  // namespace sabatier

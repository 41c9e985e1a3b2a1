//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "sabatier/reactor.hpp"

namespace sabatier {

inline int outlet_node(const ReactorModel &m) { return m.mesh().n_nodes() - 1; }

/// chi = 1 - Y_CO2(L) / Y_CO2,in
inline double conversion_at_outlet(const ReactorModel &m, const std::vector<double> &y) {
  return 1.0 - y[DofLayout::Y(outlet_node(m), kCO2)] / m.inlet_composition()[kCO2];
}

/// Outlet mass flow of one channel, kg/s.
inline double outlet_mass_flow(const ReactorModel &m, const std::vector<double> &y) {
  const int i = outlet_node(m);
  const Composition<double> Y{y[DofLayout::Y(i, 0)], y[DofLayout::Y(i, 1)],
                              y[DofLayout::Y(i, 2)]};
  const double rho = density(m.species(), Y, y[DofLayout::T(i)], m.config().p_ref);
  return rho * y[DofLayout::u(i)] * m.config().area();
}

/// Reactor-wide molar inflow (mol/s) implied by the inlet state.
inline double reactor_molar_inflow(const ReactorModel &m, const ReactorControls &c) {
  const double M_in = mean_molar_mass(m.species(), m.inlet_composition());
  return m.inlet_mass_flux(c) * m.config().area() / M_in * m.config().n_channels;
}

/// Reactor flow in mL/min at normal conditions implied by the inlet state.
inline double reactor_flow_ml_min(const ReactorModel &m, const ReactorControls &c) {
  const auto &cfg = m.config();
  const double vdot = reactor_molar_inflow(m, c) * constants::kGasConstant * cfg.T_normal /
                      cfg.p_normal;
  return vdot * 60.0 * 1e6;
}

/// Moles of CH4 + H2O produced per second: 3 chi (1/5) n_in for a 1:4 feed.
inline double product_yield(double chi, double molar_inflow) {
  return 3.0 * chi * molar_inflow / 5.0;
}

struct ConservationReport {
  double mass_flux = 0.0;               // rho_in u_in, kg/(m^2 s)
  double mass_flux_spread = 0.0;        // relative, element means and boundary values
  std::array<double, 3> atom_inflow{};  // C, H, O per channel, mol/s
  std::array<double, 3> atom_outflow{};
  double atom_imbalance = 0.0;          // max relative over C, H, O
  double convective_atom_imbalance = 0.0;  // same, ignoring the inlet diffusive flux
  double water_min = 0.0;               // min over nodes of 1 - sum Y
  double water_max = 0.0;
};

// Atoms per molecule: rows C, H, O; columns CO2, H2, CH4, H2O.
inline constexpr std::array<std::array<double, 4>, 3> kAtoms{
    {{1.0, 0.0, 1.0, 0.0}, {0.0, 2.0, 4.0, 2.0}, {2.0, 0.0, 0.0, 1.0}}};

/// Mass and element balances of a converged state. The inlet atom flow
/// includes the consistent diffusive boundary flux, read off the species
/// rows that the Dirichlet conditions replace.
inline ConservationReport conservation_report(const ReactorModel &m, const ReactorControls &c,
                                              const std::vector<double> &y) {
  ConservationReport rep;
  const auto &tab = m.species();
  const auto mf = m.mass_flux_profile(y);
  double lo = std::min(mf.inlet, mf.outlet), hi = std::max(mf.inlet, mf.outlet);
  for (double g: mf.element_means) {
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  rep.mass_flux = m.inlet_mass_flux(c);
  rep.mass_flux_spread = (hi - lo) / std::abs(rep.mass_flux);

  std::array<double, 13> z, r;
  for (int a = 0; a < 13; ++a)
    z[a] = y[a];
  std::array<double, 3> tw;
  for (int q = 0; q < 3; ++q)
    tw[q] = c.wall(m.quadrature_point(0, q));
  m.element_residual(0, z, tw, promote<double>(c.kinetics), r);
  FullComposition<double> boundary{r[3], r[4], r[5], -(r[3] + r[4] + r[5])};

  const int last = outlet_node(m);
  const auto Yin = complete(Composition<double>{y[3], y[4], y[5]});
  const auto Yout = complete(Composition<double>{y[DofLayout::Y(last, 0)],
                                                 y[DofLayout::Y(last, 1)],
                                                 y[DofLayout::Y(last, 2)]});
  const double A = m.config().area();
  for (int j = 0; j < 3; ++j) {
    double in_conv = 0.0, in_diff = 0.0, out = 0.0;
    for (std::size_t k = 0; k < kNumSpecies; ++k) {
      const double w = kAtoms[j][k] / tab.molar_mass(k);
      in_conv += w * mf.inlet * Yin[k];
      in_diff += w * boundary[k];
      out += w * mf.outlet * Yout[k];
    }
    rep.atom_inflow[j] = A * (in_conv + in_diff);
    rep.atom_outflow[j] = A * out;
    rep.atom_imbalance = std::max(rep.atom_imbalance,
                                  std::abs(rep.atom_outflow[j] - rep.atom_inflow[j]) /
                                      std::abs(rep.atom_inflow[j]));
    rep.convective_atom_imbalance = std::max(rep.convective_atom_imbalance,
                                             std::abs(out - in_conv) / std::abs(in_conv));
  }

  rep.water_min = 1.0;
  rep.water_max = 0.0;
  for (int i = 0; i <= last; ++i) {
    const double w = 1.0 - (y[DofLayout::Y(i, 0)] + y[DofLayout::Y(i, 1)] + y[DofLayout::Y(i, 2)]);
    rep.water_min = std::min(rep.water_min, w);
    rep.water_max = std::max(rep.water_max, w);
  }
  return rep;
}

/// max_x |T(x) - T_wall(x)| over the P1 nodes.
inline double max_wall_deviation(const ReactorModel &m, const ReactorControls &c,
                                 const std::vector<double> &y) {
  double d = 0.0;
  for (int i = 0; i < m.mesh().n_nodes(); ++i)
    d = std::max(d, std::abs(y[DofLayout::T(i)] - c.wall(m.mesh().node(i))));
  return d;
}

/// Largest number of sign changes in successive nodal differences over the
/// three mass-fraction profiles; steps below `tol` times the profile range
/// are ignored. Smooth reactor profiles give 0.
inline int profile_oscillations(const ReactorModel &m, const std::vector<double> &y,
                                double tol = 1e-9) {
  const int n = m.mesh().n_nodes();
  int worst = 0;
  for (int k = 0; k < 3; ++k) {
    double lo = y[DofLayout::Y(0, k)], hi = lo;
    for (int i = 1; i < n; ++i) {
      lo = std::min(lo, y[DofLayout::Y(i, k)]);
      hi = std::max(hi, y[DofLayout::Y(i, k)]);
    }
    const double floor = tol * std::max(hi - lo, 1e-300);
    int changes = 0, last = 0;
    for (int i = 1; i < n; ++i) {
      const double d = y[DofLayout::Y(i, k)] - y[DofLayout::Y(i - 1, k)];
      if (std::abs(d) <= floor)
        continue;
      const int s = d > 0.0 ? 1 : -1;
      if (last != 0 && s != last)
        ++changes;
      last = s;
    }
    worst = std::max(worst, changes);
  }
  return worst;
}

/// %.12g by default.
inline std::string format_number(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string format_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Profile CSV at the P1 nodes.
inline void write_profile_csv(std::ostream &os, const ReactorModel &m,
                              const std::vector<double> &y) {
  os << "x,p,u,T,Y_CO2,Y_H2,Y_CH4,Y_H2O,conversion\n";
  const double y_in = m.inlet_composition()[kCO2];
  for (int i = 0; i < m.mesh().n_nodes(); ++i) {
    const double a = y[DofLayout::Y(i, 0)], b = y[DofLayout::Y(i, 1)],
                 cc = y[DofLayout::Y(i, 2)];
    os << format_number(m.mesh().node(i)) << ',' << format_number(y[DofLayout::p(i)]) << ','
       << format_number(y[DofLayout::u(i)]) << ',' << format_number(y[DofLayout::T(i)]) << ','
       << format_number(a) << ',' << format_number(b) << ',' << format_number(cc) << ','
       << format_number(1.0 - a - b - cc) << ',' << format_number(1.0 - a / y_in) << '\n';
  }
}

}  // namespace sabatier

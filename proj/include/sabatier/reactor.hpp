//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sabatier/banded.hpp"
#include "sabatier/common.hpp"
#include "sabatier/kinetics.hpp"
#include "sabatier/reactor_config.hpp"
#include "sabatier/species.hpp"
#include "sabatier/thermo.hpp"
#include "sabatier/transport.hpp"
#include "sabatier/wall_temperature.hpp"

namespace sabatier {

/// Inlet velocity either prescribed directly (m/s) or derived from a reactor
/// flow rate in mL/min at normal conditions and the inlet temperature.
struct InletSpec {
  enum class Mode { Velocity, Flow };
  Mode mode = Mode::Flow;
  double value = 50.0;

  static InletSpec velocity(double u) { return {Mode::Velocity, u}; }
  static InletSpec flow(double ml_min) { return {Mode::Flow, ml_min}; }
};

struct ReactorControls {
  KineticParams kinetics = reference_kinetics();
  WallTemperatureModel wall;
  InletSpec inlet;
};

/// Derivative of lambda^T R with respect to each control family.
struct ControlGradient {
  std::array<double, 3> kinetics{0.0, 0.0, 0.0};  // (E_a, logA, n)
  std::vector<double> wall;
  double u_in = 0.0;  // partial at fixed inlet temperature
};

/// Residual and Jacobian assembly for the steady 1D reactor model on the
/// mixed P1 (p, T, Y) / P2 (u) discretization.
class ReactorModel {
public:
  using Vec = std::vector<double>;

  ReactorModel(const SpeciesTable &tab, ReactorConfig cfg) : tab_(&tab), cfg_(std::move(cfg)) {
    cfg_.validate();
    mesh_ = Mesh1D(cfg_);
    Y_in_ = cfg_.inlet_mass_fractions(tab);
  }

  const SpeciesTable &species() const { return *tab_; }
  const ReactorConfig &config() const { return cfg_; }
  const Mesh1D &mesh() const { return mesh_; }
  const Composition<double> &inlet_composition() const { return Y_in_; }
  int n_dofs() const { return DofLayout::size(mesh_.n_nodes()); }

  double inlet_temperature(const ReactorControls &c) const { return c.wall.inlet(); }

  double inlet_velocity(const ReactorControls &c) const {
    if (c.inlet.mode == InletSpec::Mode::Velocity)
      return c.inlet.value;
    return inlet_velocity_from_flow(c.inlet.value, inlet_temperature(c), cfg_);
  }

  double inlet_density(const ReactorControls &c) const {
    return density(*tab_, Y_in_, inlet_temperature(c), cfg_.p_ref);
  }

  /// Inlet mass flux rho_in u_in per unit area, kg/(m^2 s).
  double inlet_mass_flux(const ReactorControls &c) const {
    return inlet_density(c) * inlet_velocity(c);
  }

  /// Zero velocity and pressure, inlet temperature and composition everywhere.
  Vec cold_start(const ReactorControls &c) const {
    Vec y(n_dofs(), 0.0);
    const double T_in = inlet_temperature(c);
    for (int i = 0; i < mesh_.n_nodes(); ++i) {
      y[DofLayout::T(i)] = T_in;
      for (int k = 0; k < 3; ++k)
        y[DofLayout::Y(i, k)] = Y_in_[k];
    }
    return y;
  }

  /// Residual row scales (inlet-state characteristic magnitudes).
  Vec residual_scales(const ReactorControls &c) const {
    const double T_in = inlet_temperature(c);
    const double u_in = std::abs(inlet_velocity(c));
    const double G = inlet_density(c) * u_in;
    const double mu = viscosity_mix(*tab_, complete(Y_in_), T_in);
    const double h = mesh_.h();
    const double s_cont = G;
    const double s_mom = mu / cfg_.permeability * u_in * h;
    const double s_temp = cfg_.h_fs * T_in * h;
    Vec s(n_dofs());
    for (int i = 0; i < mesh_.n_nodes(); ++i) {
      s[DofLayout::p(i)] = s_cont;
      s[DofLayout::u(i)] = s_mom;
      s[DofLayout::T(i)] = s_temp;
      for (int k = 0; k < 3; ++k)
        s[DofLayout::Y(i, k)] = s_cont;
      if (i + 1 < mesh_.n_nodes())
        s[DofLayout::u_mid(i)] = s_mom;
    }
    // Dirichlet rows are differences of state values.
    s[DofLayout::u(0)] = u_in;
    s[DofLayout::T(0)] = T_in;
    for (int k = 0; k < 3; ++k)
      s[DofLayout::Y(0, k)] = 1.0;
    return s;
  }

  /// Variable scales for Newton correction norms.
  Vec variable_scales(const ReactorControls &c) const {
    const double T_in = inlet_temperature(c);
    const double u_in = std::abs(inlet_velocity(c));
    const double mu = viscosity_mix(*tab_, complete(Y_in_), T_in);
    const double dp = mu / cfg_.permeability * u_in * (mesh_.x_end() - mesh_.x_begin());
    Vec s(n_dofs());
    for (int i = 0; i < mesh_.n_nodes(); ++i) {
      s[DofLayout::p(i)] = dp;
      s[DofLayout::u(i)] = u_in;
      s[DofLayout::T(i)] = T_in;
      for (int k = 0; k < 3; ++k)
        s[DofLayout::Y(i, k)] = 1.0;
      if (i + 1 < mesh_.n_nodes())
        s[DofLayout::u_mid(i)] = u_in;
    }
    return s;
  }

  Vec residual(const Vec &y, const ReactorControls &c) const {
    check_size(y);
    Vec R(n_dofs(), 0.0);
    const auto kin = promote<double>(c.kinetics);
    std::array<double, 13> z, r;
    std::array<double, 3> tw;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      const int f = DofLayout::first(e);
      for (int a = 0; a < 13; ++a)
        z[a] = y[f + a];
      for (int q = 0; q < 3; ++q)
        tw[q] = c.wall(quadrature_point(e, q));
      element_residual(e, z, tw, kin, r);
      for (int a = 0; a < 13; ++a)
        R[f + a] += r[a];
    }
    apply_dirichlet(y, c, R, nullptr);
    return R;
  }

  /// Residual and its exact Jacobian (forward-mode dual numbers over the
  /// 13 element dofs).
  void residual_and_jacobian(const Vec &y, const ReactorControls &c, Vec &R,
                             BandedMatrix &J) const {
    check_size(y);
    using S = Jet<13>;
    const int n = n_dofs();
    R.assign(n, 0.0);
    if (J.size() != n)
      J = BandedMatrix(n, DofLayout::bandwidth(), DofLayout::bandwidth());
    else
      J.set_zero();
    const auto kin = promote<S>(c.kinetics);
    std::array<S, 13> z, r;
    std::array<S, 3> tw;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      const int f = DofLayout::first(e);
      for (int a = 0; a < 13; ++a)
        z[a] = S(y[f + a], a);
      for (int q = 0; q < 3; ++q)
        tw[q] = S(c.wall(quadrature_point(e, q)));
      element_residual(e, z, tw, kin, r);
      for (int a = 0; a < 13; ++a) {
        R[f + a] += r[a].a;
        for (int b = 0; b < 13; ++b)
          J(f + a, f + b) += r[a].v[b];
      }
    }
    apply_dirichlet(y, c, R, &J);
  }

  /// lambda^T dR/dc for all control families at state y.
  ControlGradient control_gradient(const Vec &y, const ReactorControls &c,
                                   const Vec &lambda) const {
    check_size(y);
    check_size(lambda);
    using S = Jet<6>;
    ControlGradient g;
    g.wall.assign(c.wall.size(), 0.0);
    const KineticParamsT<S> kin{S(c.kinetics.E_a, 0), S(c.kinetics.logA, 1),
                                S(c.kinetics.n, 2)};
    std::array<S, 13> z, r;
    std::array<S, 3> tw;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      const int f = DofLayout::first(e);
      for (int a = 0; a < 13; ++a)
        z[a] = S(y[f + a]);
      for (int q = 0; q < 3; ++q)
        tw[q] = S(c.wall(quadrature_point(e, q)), 3 + q);
      element_residual(e, z, tw, kin, r);
      std::array<double, 6> acc{};
      for (int a = 0; a < 13; ++a) {
        if (e == 0 && is_dirichlet_row(a))
          continue;
        const double l = lambda[f + a];
        for (int d = 0; d < 6; ++d)
          acc[d] += l * r[a].v[d];
      }
      for (int d = 0; d < 3; ++d)
        g.kinetics[d] += acc[d];
      for (int q = 0; q < 3; ++q) {
        const auto b = c.wall.basis(quadrature_point(e, q));
        for (int i = 0; i < b.count; ++i)
          g.wall[b.index[i]] += acc[3 + q] * b.weight[i];
      }
    }
    // Dirichlet rows: u_0 - u_in(c) and T_0 - T_wall(x_0).
    const auto b0 = c.wall.basis(mesh_.x_begin());
    const double lu = lambda[DofLayout::u(0)];
    const double lT = lambda[DofLayout::T(0)];
    g.u_in -= lu;
    if (c.inlet.mode == InletSpec::Mode::Flow) {
      const double du_dT = inlet_velocity_from_flow(c.inlet.value, 1.0, cfg_);
      for (int i = 0; i < b0.count; ++i)
        g.wall[b0.index[i]] -= lu * du_dT * b0.weight[i];
    }
    for (int i = 0; i < b0.count; ++i)
      g.wall[b0.index[i]] -= lT * b0.weight[i];
    return g;
  }

  double quadrature_point(int e, int q) const {
    return mesh_.node(e) + kGaussPoints[q] * mesh_.h();
  }

  /// Throws SolverError naming the first non-finite residual row.
  void check_finite(const Vec &R) const {
    for (int i = 0; i < static_cast<int>(R.size()); ++i) {
      if (!std::isfinite(R[i]))
        throw SolverError("non-finite residual in " + row_name(i));
    }
  }

  std::string row_name(int i) const {
    static const char *names[] = {"continuity", "momentum", "temperature",
                                  "species Y_CO2", "species Y_H2", "species Y_CH4",
                                  "momentum (midpoint)"};
    std::ostringstream os;
    os << names[i % DofLayout::kStride] << " equation at node " << i / DofLayout::kStride;
    return os.str();
  }

  /// The element kernel. Local dof order: (p, u, T, Y0, Y1, Y2) at the left
  /// node, the velocity midpoint, then the same six at the right node.
  template <class S>
  void element_residual(int e, const std::array<S, 13> &z, const std::array<S, 3> &tw,
                        const KineticParamsT<S> &kin, std::array<S, 13> &r) const {
    const double h = mesh_.h();
    const double p_ref = cfg_.p_ref;
    const bool reactive = mesh_.reactive(e);
    for (auto &v: r)
      v = S(0.0);

    for (int q = 0; q < 3; ++q) {
      const double xi = kGaussPoints[q];
      const double w = kGaussWeights[q] * h;
      const double pa = 1.0 - xi, pb = xi;
      const double dpa = -1.0 / h, dpb = 1.0 / h;
      const double n0 = (1.0 - xi) * (1.0 - 2.0 * xi), nm = 4.0 * xi * (1.0 - xi),
                   n1 = xi * (2.0 * xi - 1.0);
      const double dn0 = (4.0 * xi - 3.0) / h, dnm = (4.0 - 8.0 * xi) / h,
                   dn1 = (4.0 * xi - 1.0) / h;

      const S p = z[0] * pa + z[7] * pb;
      const S u = z[1] * n0 + z[6] * nm + z[8] * n1;
      const S du = z[1] * dn0 + z[6] * dnm + z[8] * dn1;
      const S T = z[2] * pa + z[9] * pb;
      const S dT = (z[9] - z[2]) / h;
      FullComposition<S> Y, dY;
      Y[3] = S(1.0);
      dY[3] = S(0.0);
      for (int k = 0; k < 3; ++k) {
        Y[k] = z[3 + k] * pa + z[10 + k] * pb;
        dY[k] = (z[10 + k] - z[3 + k]) / h;
        Y[3] -= Y[k];
        dY[3] -= dY[k];
      }

      const S rho = density(*tab_, Y, T, p_ref);
      const auto tr = transport_state(*tab_, Y, T, p_ref);
      FullComposition<S> cpk;
      S cp(0.0);
      for (std::size_t k = 0; k < kNumSpecies; ++k) {
        cpk[k] = cp_species(*tab_, k, T);
        cp += Y[k] * cpk[k];
      }
      S Vc(0.0);
      for (std::size_t k = 0; k < kNumSpecies; ++k)
        Vc += tr.D[k] * dY[k];
      S diff_heat(0.0);
      for (std::size_t k = 0; k < kNumSpecies; ++k)
        diff_heat += cpk[k] * (Y[k] * Vc - tr.D[k] * dY[k]);
      const S omega_Td = -rho * diff_heat * dT;
      const auto src = species_sources(*tab_, Y, T, rho, kin, reactive);

      const S G = rho * u;
      // continuity
      r[0] -= G * dpa * w;
      r[7] -= G * dpb * w;
      // momentum
      const S conv = rho * u * du;
      const S visc = (4.0 / 3.0) * tr.mu * du;
      const S drag = tr.mu / cfg_.permeability * u;
      r[1] += (conv * n0 - p * dn0 + visc * dn0 + drag * n0) * w;
      r[6] += (conv * nm - p * dnm + visc * dnm + drag * nm) * w;
      r[8] += (conv * n1 - p * dn1 + visc * dn1 + drag * n1) * w;
      // temperature
      const S heat = rho * cp * u * dT + cfg_.h_fs * (T - tw[q]) - src.omega_T - omega_Td;
      const S cond = tr.kappa * dT;
      r[2] += (heat * pa + cond * dpa) * w;
      r[9] += (heat * pb + cond * dpb) * w;
      // species
      for (int k = 0; k < 3; ++k) {
        const S adv = rho * u * dY[k] - src.omega[k];
        const S flux = rho * (Vc * Y[k] - tr.D[k] * dY[k]);
        r[3 + k] += (adv * pa - flux * dpa) * w;
        r[10 + k] += (adv * pb - flux * dpb) * w;
      }
    }

    if (e == 0)
      r[0] -= node_mass_flux(z, 0);
    if (e == mesh_.n_elements() - 1)
      r[7] += node_mass_flux(z, 7);
  }

  /// Integrated-by-parts continuity equations imply equal element means of
  /// rho u; this returns those means (3-point rule) and the two boundary
  /// point values for conservation checks.
  struct MassFluxProfile {
    double inlet = 0.0;
    double outlet = 0.0;
    std::vector<double> element_means;
  };

  MassFluxProfile mass_flux_profile(const Vec &y) const {
    MassFluxProfile m;
    m.element_means.resize(mesh_.n_elements());
    std::array<double, 13> z;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      const int f = DofLayout::first(e);
      for (int a = 0; a < 13; ++a)
        z[a] = y[f + a];
      double acc = 0.0;
      for (int q = 0; q < 3; ++q) {
        const double xi = kGaussPoints[q];
        const double pa = 1.0 - xi, pb = xi;
        const double u = z[1] * (1.0 - xi) * (1.0 - 2.0 * xi) + z[6] * 4.0 * xi * (1.0 - xi) +
                         z[8] * xi * (2.0 * xi - 1.0);
        const double T = z[2] * pa + z[9] * pb;
        Composition<double> Y{z[3] * pa + z[10] * pb, z[4] * pa + z[11] * pb,
                              z[5] * pa + z[12] * pb};
        acc += kGaussWeights[q] * density(*tab_, Y, T, cfg_.p_ref) * u;
      }
      m.element_means[e] = acc;
      if (e == 0)
        m.inlet = node_mass_flux(z, 0);
      if (e == mesh_.n_elements() - 1)
        m.outlet = node_mass_flux(z, 7);
    }
    return m;
  }

private:
  static bool is_dirichlet_row(int a) {
    return a == DofLayout::kU || a == DofLayout::kT || (a >= 3 && a <= 5);
  }

  template <class S>
  S node_mass_flux(const std::array<S, 13> &z, int off) const {
    const Composition<S> Y{z[off + 3], z[off + 4], z[off + 5]};
    return density(*tab_, Y, z[off + 2], cfg_.p_ref) * z[off + 1];
  }

  void apply_dirichlet(const Vec &y, const ReactorControls &c, Vec &R, BandedMatrix *J) const {
    const double targets[5] = {inlet_velocity(c), inlet_temperature(c), Y_in_[0], Y_in_[1],
                               Y_in_[2]};
    const int rows[5] = {DofLayout::u(0), DofLayout::T(0), DofLayout::Y(0, 0),
                         DofLayout::Y(0, 1), DofLayout::Y(0, 2)};
    for (int i = 0; i < 5; ++i) {
      R[rows[i]] = y[rows[i]] - targets[i];
      if (J) {
        J->zero_row(rows[i]);
        (*J)(rows[i], rows[i]) = 1.0;
      }
    }
  }

  void check_size(const Vec &v) const {
    if (static_cast<int>(v.size()) != n_dofs())
      throw ValidationError("state vector has " + std::to_string(v.size()) +
                            " entries, expected " + std::to_string(n_dofs()));
  }

  const SpeciesTable *tab_;
  ReactorConfig cfg_;
  Mesh1D mesh_;
  Composition<double> Y_in_;
};

}  // namespace sabatier

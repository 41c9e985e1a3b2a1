//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sabatier/common.hpp"
#include "sabatier/species.hpp"
#include "sabatier/thermo.hpp"

namespace sabatier {

/// Geometry and operating point of one channel of the microchannel reactor.
struct ReactorConfig {
  double length = 5e-2;            // m, reactive section
  double inlet_fraction = 0.1;     // inert inlet section length / length
  double width = 4.5e-4;           // m
  double height = 1.5e-4;          // m
  int n_channels = 80;
  double permeability = 1.48e-9;   // m^2 (Brinkman)
  double h_fs = 6.77e8;            // W/(K m^3)
  double p_ref = 1e6;              // Pa
  int n_nodes = 1001;
  FullComposition<double> X_in{0.2, 0.8, 0.0, 0.0};  // inlet mole fractions
  double p_normal = constants::kAtmosphere;
  double T_normal = constants::kNormalTemperature;

  double x_begin() const { return -inlet_fraction * length; }
  double x_end() const { return length; }
  double area() const { return width * height; }

  void validate() const {
    auto positive = [](double v, const char *name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string(name) + " must be positive and finite");
    };
    positive(length, "length");
    positive(width, "width");
    positive(height, "height");
    positive(permeability, "permeability");
    positive(h_fs, "h_fs");
    positive(p_ref, "p_ref");
    positive(p_normal, "p_normal");
    positive(T_normal, "T_normal");
    if (!(inlet_fraction >= 0.0) || !std::isfinite(inlet_fraction))
      throw ConfigError("inlet_fraction must be non-negative");
    if (n_channels < 1)
      throw ConfigError("n_channels must be at least 1");
    if (n_nodes < 3)
      throw ConfigError("n_nodes must be at least 3");
    double s = 0.0;
    for (double x: X_in) {
      if (!(x >= 0.0))
        throw ConfigError("inlet mole fractions must be non-negative");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw ConfigError("inlet mole fractions must sum to one");
    if (!(X_in[kCO2] > 0.0))
      throw ConfigError("inlet must contain CO2");
  }

  Composition<double> inlet_mass_fractions(const SpeciesTable &tab) const {
    const auto Y = mass_fractions(tab, X_in);
    return {Y[0], Y[1], Y[2]};
  }
};

/// Reactor-wide molar inflow (mol/s) of a volumetric flow quoted in mL/min
/// at normal conditions.
inline double molar_inflow(double flow_ml_min, const ReactorConfig &cfg) {
  const double vdot = flow_ml_min * 1e-6 / 60.0;
  return cfg.p_normal * vdot / (constants::kGasConstant * cfg.T_normal);
}

/// Per-channel inlet velocity at (T_in, p_ref) for a reactor flow in mL/min.
inline double inlet_velocity_from_flow(double flow_ml_min, double T_in,
                                       const ReactorConfig &cfg) {
  if (!(flow_ml_min > 0.0))
    throw ConfigError("flow rate must be positive");
  const double n_ch = molar_inflow(flow_ml_min, cfg) / cfg.n_channels;
  return n_ch * constants::kGasConstant * T_in / (cfg.p_ref * cfg.area());
}

/// Inverse of inlet_velocity_from_flow.
inline double flow_from_inlet_velocity(double u_in, double T_in, const ReactorConfig &cfg) {
  return u_in / inlet_velocity_from_flow(1.0, T_in, cfg);
}

/// Uniform mesh on (x_begin, x_end); elements with midpoint > 0 are reactive.
class Mesh1D {
public:
  Mesh1D() = default;
  explicit Mesh1D(const ReactorConfig &cfg)
      : x0_(cfg.x_begin()), x1_(cfg.x_end()), n_nodes_(cfg.n_nodes),
        h_((cfg.x_end() - cfg.x_begin()) / (cfg.n_nodes - 1)) {
    reactive_.resize(n_elements());
    for (int e = 0; e < n_elements(); ++e)
      reactive_[e] = midpoint(e) > 0.0;
  }

  int n_nodes() const { return n_nodes_; }
  int n_elements() const { return n_nodes_ - 1; }
  double h() const { return h_; }
  double x_begin() const { return x0_; }
  double x_end() const { return x1_; }
  double node(int i) const { return i == n_nodes_ - 1 ? x1_ : x0_ + i * h_; }
  double midpoint(int e) const { return x0_ + (e + 0.5) * h_; }
  bool reactive(int e) const { return reactive_[e]; }

private:
  double x0_ = 0.0, x1_ = 1.0;
  int n_nodes_ = 0;
  double h_ = 1.0;
  std::vector<bool> reactive_;
};

/// Interleaved dof numbering: node i holds (p, u, T, Y_CO2, Y_H2, Y_CH4) at
/// 7i..7i+5 and the P2 velocity midpoint of element i sits at 7i+6. The 13
/// dofs of element e are the contiguous range 7e..7e+12.
struct DofLayout {
  static constexpr int kStride = 7;
  static constexpr int kLocal = 13;
  static constexpr int kP = 0, kU = 1, kT = 2, kY = 3;

  static constexpr int p(int i) { return kStride * i + kP; }
  static constexpr int u(int i) { return kStride * i + kU; }
  static constexpr int T(int i) { return kStride * i + kT; }
  static constexpr int Y(int i, int k) { return kStride * i + kY + k; }
  static constexpr int u_mid(int e) { return kStride * e + 6; }
  static constexpr int first(int e) { return kStride * e; }
  static constexpr int size(int n_nodes) { return kStride * (n_nodes - 1) + 6; }
  static constexpr int bandwidth() { return kLocal - 1; }
};

// Gauss-Legendre, 3 points on [0, 1].
inline constexpr std::array<double, 3> kGaussPoints{0.5 - 0.38729833462074170,
                                                    0.5, 0.5 + 0.38729833462074170};
inline constexpr std::array<double, 3> kGaussWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace sabatier

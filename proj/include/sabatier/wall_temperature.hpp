//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sabatier/common.hpp"
#include "sabatier/reactor_config.hpp"

namespace sabatier {

enum class TemperatureModelKind { Constant, TwoStage, ThreeStage, Distributed };

inline std::string to_string(TemperatureModelKind k) {
  switch (k) {
  case TemperatureModelKind::Constant:
    return "constant";
  case TemperatureModelKind::TwoStage:
    return "two_stage";
  case TemperatureModelKind::ThreeStage:
    return "three_stage";
  case TemperatureModelKind::Distributed:
    return "distributed";
  }
  return "?";
}

inline TemperatureModelKind parse_temperature_model(const std::string &s) {
  if (s == "constant")
    return TemperatureModelKind::Constant;
  if (s == "two_stage")
    return TemperatureModelKind::TwoStage;
  if (s == "three_stage")
    return TemperatureModelKind::ThreeStage;
  if (s == "distributed")
    return TemperatureModelKind::Distributed;
  throw ConfigError("unknown temperature_model '" + s +
                    "' (expected constant, two_stage, three_stage or distributed)");
}

/// At most two (parameter index, weight) pairs.
struct WallBasis {
  std::array<int, 2> index{0, 0};
  std::array<double, 2> weight{0.0, 0.0};
  int count = 0;
};

/// Wall temperature T_wall(x) that is linear in its parameters. Staged models
/// split the reactive section (0, L] evenly; the first stage also covers the
/// inlet section. The distributed model holds P1 nodal values on the mesh.
class WallTemperatureModel {
public:
  static constexpr double kLower = 453.15;
  static constexpr double kUpper = 873.15;

  WallTemperatureModel() = default;
  WallTemperatureModel(TemperatureModelKind kind, const Mesh1D &mesh, double value)
      : kind_(kind), mesh_(mesh) {
    theta_.assign(parameter_count(kind, mesh), value);
  }

  static int parameter_count(TemperatureModelKind kind, const Mesh1D &mesh) {
    switch (kind) {
    case TemperatureModelKind::Constant:
      return 1;
    case TemperatureModelKind::TwoStage:
      return 2;
    case TemperatureModelKind::ThreeStage:
      return 3;
    case TemperatureModelKind::Distributed:
      return mesh.n_nodes();
    }
    return 0;
  }

  TemperatureModelKind kind() const { return kind_; }
  const Mesh1D &mesh() const { return mesh_; }
  int size() const { return static_cast<int>(theta_.size()); }
  const std::vector<double> &values() const { return theta_; }
  std::vector<double> &values() { return theta_; }
  void set_values(const std::vector<double> &v) {
    if (v.size() != theta_.size())
      throw ConfigError("wall temperature: expected " + std::to_string(theta_.size()) +
                        " values, got " + std::to_string(v.size()));
    theta_ = v;
  }

  WallBasis basis(double x) const {
    WallBasis b;
    if (kind_ == TemperatureModelKind::Distributed) {
      const double s = (x - mesh_.x_begin()) / mesh_.h();
      int i = static_cast<int>(std::floor(s));
      i = std::clamp(i, 0, mesh_.n_nodes() - 2);
      const double xi = s - i;
      b.index = {i, i + 1};
      b.weight = {1.0 - xi, xi};
      b.count = 2;
      return b;
    }
    const int n = size();
    int stage = 0;
    if (x > 0.0) {
      const double len = mesh_.x_end() / n;
      stage = std::clamp(static_cast<int>(std::ceil(x / len)) - 1, 0, n - 1);
    }
    b.index[0] = stage;
    b.weight[0] = 1.0;
    b.count = 1;
    return b;
  }

  double operator()(double x) const {
    const auto b = basis(x);
    double t = 0.0;
    for (int i = 0; i < b.count; ++i)
      t += b.weight[i] * theta_[b.index[i]];
    return t;
  }

  double inlet() const { return (*this)(mesh_.x_begin()); }

  /// Consistent P1 mass matrix (tridiagonal) of the distributed model.
  void mass_matrix(std::vector<double> &diag, std::vector<double> &off) const {
    const int n = mesh_.n_nodes();
    const double h = mesh_.h();
    diag.assign(n, 2.0 * h / 3.0);
    diag.front() = diag.back() = h / 3.0;
    off.assign(n - 1, h / 6.0);
  }

private:
  TemperatureModelKind kind_ = TemperatureModelKind::Constant;
  Mesh1D mesh_;
  std::vector<double> theta_;
};

}  // namespace sabatier

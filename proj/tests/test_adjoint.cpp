//
// sabatier - Copyright 2026 The sabatier Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "sabatier/adjoint.hpp"
#include "sabatier/lbfgs.hpp"
#include "sabatier/problems.hpp"
#include "test_util.hpp"

using namespace sabatier;
using sabatier::test::rel_err;
using sabatier::test::table;

namespace {

ReactorConfig coarse(int n_nodes) {
  ReactorConfig cfg;
  cfg.n_nodes = n_nodes;
  return cfg;
}

/// 1/2 x^T A x - b^T x on a box.
class Quadratic : public OptimizationProblem {
public:
  Quadratic(Eigen::Matrix3d A, Eigen::Vector3d b, BoxConstraint box)
      : A_(std::move(A)), b_(std::move(b)), box_(std::move(box)) { }
  std::size_t size() const override { return 3; }
  const BoxConstraint &box() const override { return box_; }
  double value(const Vec &x) override {
    ++counts.state;
    const Eigen::Vector3d v(x[0], x[1], x[2]);
    return 0.5 * v.dot(A_ * v) - b_.dot(v);
  }
  double value_and_gradient(const Vec &x, Vec &g) override {
    const double f = value(x);
    ++counts.adjoint;
    const Eigen::Vector3d v(x[0], x[1], x[2]);
    const Eigen::Vector3d gr = A_ * v - b_;
    g = {gr[0], gr[1], gr[2]};
    return f;
  }

private:
  Eigen::Matrix3d A_;
  Eigen::Vector3d b_;
  BoxConstraint box_;
};

Eigen::Matrix3d spd() {
  Eigen::Matrix3d A;
  A << 4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 2.0;
  return A;
}

/// Maximize x subject to 1 - x >= chi_des via -x + (1/2g) max(0, g(chi_des - (1 - x)))^2.
class Surrogate : public PenalizedProblem {
public:
  explicit Surrogate(double chi_des) : chi_des_(chi_des), box_({0.0}, {2.0}) { }
  void set_gamma(double g) override { gamma_ = g; }
  std::size_t size() const override { return 1; }
  const BoxConstraint &box() const override { return box_; }
  double value(const Vec &x) override {
    const double v = std::max(0.0, gamma_ * (chi_des_ - (1.0 - x[0])));
    return -x[0] + v * v / (2.0 * gamma_);
  }
  double value_and_gradient(const Vec &x, Vec &g) override {
    const double v = std::max(0.0, gamma_ * (chi_des_ - (1.0 - x[0])));
    g = {-1.0 + v};
    return value(x);
  }
  double constraint_violation(const Vec &x) override {
    return std::max(0.0, chi_des_ - (1.0 - x[0]));
  }

private:
  double chi_des_;
  double gamma_ = 1.0;
  BoxConstraint box_;
};

}  // namespace

TEST(Box, ProjectionIdempotentAndValidated) {
  const BoxConstraint box({0.0, -1.0, -INFINITY}, {1.0, 1.0, 5.0});
  const Vec x{2.0, -3.0, -1e300};
  const auto p = box.project(x);
  EXPECT_EQ(box.project(p), p);
  EXPECT_TRUE(box.contains(p));
  EXPECT_FALSE(box.contains(x));
  EXPECT_THROW(BoxConstraint({1.0}, {0.0}), ValidationError);
}

TEST(Stationarity, InteriorBoundAndHandCase) {
  Quadratic q(spd(), Eigen::Vector3d::Zero(), BoxConstraint({-10, -10, -10}, {10, 10, 10}));
  const Vec g{0.3, -0.4, 1.2};
  EXPECT_NEAR(stationarity_measure(q, {0.0, 0.0, 0.0}, g), std::sqrt(0.09 + 0.16 + 1.44), 1e-15);
  // At the lower bound with a positive gradient nothing moves.
  EXPECT_EQ(stationarity_measure(q, {-10.0, -10.0, -10.0}, {1.0, 2.0, 3.0}), 0.0);
  // Hand case: x = (0.5, 0.9) in [0, 1]^2 (third variable fixed at a bound),
  // g = (1, -0.5): P(x - g) = (0, 1), step (0.5, -0.1).
  Quadratic q2(spd(), Eigen::Vector3d::Zero(), BoxConstraint({0, 0, 0}, {1, 1, 0}));
  EXPECT_NEAR(stationarity_measure(q2, {0.5, 0.9, 0.0}, {1.0, -0.5, 0.0}), std::sqrt(0.26), 1e-15);
}

TEST(ProjectedLbfgs, ConvexQuadraticInterior) {
  const Eigen::Vector3d b(1.0, -2.0, 0.5);
  Quadratic q(spd(), b, BoxConstraint::unbounded(3));
  LbfgsOptions opt;
  opt.tolerance = 1e-12;
  const auto r = projected_lbfgs(q, {3.0, 3.0, 3.0}, opt);
  const Eigen::Vector3d xs = spd().ldlt().solve(b);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 10);
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(r.x[i], xs[i], 1e-10);
  // Monotone up to the round-off allowance of the line search.
  for (std::size_t k = 1; k < r.cost_history.size(); ++k)
    EXPECT_LE(r.cost_history[k],
              r.cost_history[k - 1] + opt.roundoff * std::abs(r.cost_history[k - 1]));
}

TEST(ProjectedLbfgs, MinimizerOutsideBox) {
  // Diagonal quadratic: the constrained minimizer is the projection.
  Eigen::Matrix3d A = Eigen::Vector3d(2.0, 1.0, 5.0).asDiagonal();
  const Eigen::Vector3d center(3.0, -4.0, 0.25);
  Quadratic q(A, A * center, BoxConstraint({0, 0, 0}, {1, 1, 1}));
  const auto r = projected_lbfgs(q, {0.5, 0.5, 0.5});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  EXPECT_NEAR(r.x[1], 0.0, 1e-12);
  EXPECT_NEAR(r.x[2], 0.25, 1e-6);

  // Coupled case, KKT by hand: with x2 = x3 = 0 at the bound the reduced
  // minimizer is x1 = b1 / A11 = 0.5, and the multipliers
  // (A x - b)_2 = 1*0.5 - (-1) > 0, (A x - b)_3 = 0.5*0.5 - (-1) > 0.
  Quadratic q2(spd(), Eigen::Vector3d(2.0, -1.0, -1.0), BoxConstraint({0, 0, 0}, {5, 5, 5}));
  const auto r2 = projected_lbfgs(q2, {2.0, 2.0, 2.0});
  EXPECT_TRUE(r2.converged);
  EXPECT_NEAR(r2.x[0], 0.5, 1e-6);
  EXPECT_EQ(r2.x[1], 0.0);
  EXPECT_EQ(r2.x[2], 0.0);
}

TEST(ProjectedLbfgs, StationaryStartTakesNoIterations) {
  const Eigen::Vector3d b(1.0, -2.0, 0.5);
  Quadratic q(spd(), b, BoxConstraint::unbounded(3));
  const Eigen::Vector3d xs = spd().ldlt().solve(b);
  // Exact zero gradient is needed for a zero-iteration stop.
  Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  Quadratic qi(I, Eigen::Vector3d(1.0, 2.0, 3.0), BoxConstraint::unbounded(3));
  const auto r = projected_lbfgs(qi, {1.0, 2.0, 3.0});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  (void)xs;
}

TEST(ProjectedLbfgs, ReportJson) {
  Quadratic q(spd(), Eigen::Vector3d(1, 1, 1), BoxConstraint::unbounded(3));
  const auto r = projected_lbfgs(q, {0.0, 0.0, 0.0});
  const auto j = to_json(r);
  for (const char *key: {"iterations", "cost_history", "stationarity_history", "state_solves",
                         "adjoint_solves", "controls", "constraint_violation", "status"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["state_solves"].get<int>(), r.counts.state);
}

TEST(MoreauYosida, OneVariableSurrogate) {
  const double chi_des = 0.85;
  Surrogate s(chi_des);
  const auto schedule = geometric_schedule(10.0, 6);
  const auto h = moreau_yosida_homotopy(s, {0.0}, schedule, 1e-8);
  // Penalized minimizer: x = 1 - chi_des + 1/gamma.
  EXPECT_NEAR(h.final.x[0], 1.0 - chi_des + 1.0 / schedule.back(), 1e-6);
  EXPECT_NEAR(h.final.x[0], 1.0 - chi_des, 2e-6);
  EXPECT_EQ(h.stages.size(), schedule.size());
  EXPECT_LT(h.final.constraint_violation, 2e-6);
  const auto j = to_json(h);
  EXPECT_EQ(j["stages"].size(), schedule.size());
}

TEST(MoreauYosida, InactivePenaltyIsPlainMaximization) {
  // chi_des so small that x = 2 (the bound) is feasible at every gamma.
  Surrogate s(-1.5);
  const auto h = moreau_yosida_homotopy(s, {0.0}, geometric_schedule(10.0, 3));
  EXPECT_EQ(h.final.x[0], 2.0);
  EXPECT_EQ(h.final.constraint_violation, 0.0);
}

TEST(Adjoint, CostIndependentOfStateGivesZero) {
  const ReactorModel m(table(), coarse(21));
  const auto c = operating_point(m, 600.0, 80.0, reference_kinetics());
  const auto sol = solve_state(m, c);
  const OutletCost constant{[](const ReactorModel &, const OutletState &) { return OutletJet(3.0); }};
  const auto lambda = solve_adjoint(m, sol, constant);
  for (double v: lambda)
    EXPECT_EQ(v, 0.0);
}

TEST(Adjoint, MatchesDenseTransposedSolve) {
  // Zero reaction keeps the system close to linear; the adjoint must equal a
  // dense transposed solve of the same Jacobian.
  const ReactorModel m(table(), coarse(15));
  const auto c = operating_point(m, 600.0, 80.0, no_reaction());
  const auto sol = solve_state(m, c);
  const auto cost = conversion_tracking_cost(0.3);
  const auto lambda = solve_adjoint(m, sol, cost);
  const int n = m.n_dofs();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sol.jacobian.in_band(i, j))
        J(i, j) = sol.jacobian(i, j);
  const auto g = cost.state_gradient(m, sol.y);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i)
    rhs[i] = -g[i];
  const Eigen::VectorXd ref = J.transpose().fullPivLu().solve(rhs);
  const double scale = ref.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    EXPECT_NEAR(lambda[i], ref[i], 1e-9 * scale) << m.row_name(i);
}

TEST(Adjoint, LinearInTheCost) {
  const ReactorModel m(table(), coarse(21));
  const auto c = operating_point(m, 620.0, 80.0, reference_kinetics());
  const auto sol = solve_state(m, c);
  const auto a = conversion_tracking_cost(1.0), b = penalized_outflow_cost(0.9, 100.0);
  const auto la = solve_adjoint(m, sol, a), lb = solve_adjoint(m, sol, b),
             lab = solve_adjoint(m, sol, sum_costs(a, b));
  double scale = 0.0;
  for (std::size_t i = 0; i < la.size(); ++i)
    scale = std::max(scale, std::abs(la[i]) + std::abs(lb[i]));
  for (std::size_t i = 0; i < la.size(); ++i)
    EXPECT_NEAR(lab[i], la[i] + lb[i], 1e-12 * scale);
}

TEST(ReducedGradient, ControlsOutsideTheResidualHaveZeroGradient) {
  // Without reaction the kinetic parameters do not enter the residual.
  const ReactorModel m(table(), coarse(21));
  const auto c = operating_point(m, 600.0, 80.0, no_reaction());
  const auto sol = solve_state(m, c);
  const auto lambda = solve_adjoint(m, sol, conversion_tracking_cost(1.0));
  const auto g = m.control_gradient(sol.y, c, lambda);
  EXPECT_EQ(g.kinetics[0], 0.0);
  EXPECT_EQ(g.kinetics[2], 0.0);
}

TEST(ReducedGradient, ScalesWithTheCost) {
  const ReactorModel m(table(), coarse(21));
  const auto c = operating_point(m, 620.0, 80.0, reference_kinetics());
  const auto sol = solve_state(m, c);
  const auto base = conversion_tracking_cost(1.0);
  const OutletCost scaled{[base](const ReactorModel &mm, const OutletState &z) {
    return 3.5 * base.f(mm, z);
  }};
  const auto g1 = m.control_gradient(sol.y, c, solve_adjoint(m, sol, base));
  const auto g2 = m.control_gradient(sol.y, c, solve_adjoint(m, sol, scaled));
  for (int d = 0; d < 3; ++d)
    EXPECT_LT(rel_err(g2.kinetics[d], 3.5 * g1.kinetics[d]), 1e-12);
  EXPECT_LT(rel_err(g2.wall[0], 3.5 * g1.wall[0]), 1e-12);
}

TEST(ReducedGradient, RieszMapInvertsMassMatrix) {
  const Mesh1D mesh(coarse(31));
  const WallTemperatureModel wall(TemperatureModelKind::Distributed, mesh, 600.0);
  std::vector<double> d(31);
  for (int i = 0; i < 31; ++i)
    d[i] = std::sin(0.4 * i) + 0.1 * i;
  const auto g = riesz_map(wall, d);
  std::vector<double> diag, off;
  wall.mass_matrix(diag, off);
  for (int i = 0; i < 31; ++i) {
    double Mg = diag[i] * g[i];
    if (i > 0)
      Mg += off[i - 1] * g[i - 1];
    if (i < 30)
      Mg += off[i] * g[i + 1];
    EXPECT_NEAR(Mg, d[i], 1e-12 * std::abs(d[i]) + 1e-14);
  }
  // <g, h>_M equals d . h.
  std::vector<double> h(31, 1.0);
  double dh = 0.0;
  for (double v: d)
    dh += v;
  EXPECT_NEAR(mass_inner(wall, g, h), dh, 1e-12 * std::abs(dh));
}

TEST(ReducedGradient, DirectionalDerivativesDistributedTracking) {
  const ReactorModel m(table(), coarse(101));
  NewtonOptions nopt;
  nopt.polish_steps = 1;
  TrackingProblem p(m, 100.0, TemperatureModelKind::Distributed, reference_kinetics(), nopt);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec x(p.size());
  for (auto &v: x)
    v = 600.0 + 40.0 * u(rng);
  Vec g;
  p.value_and_gradient(x, g);
  for (int dir = 0; dir < 5; ++dir) {
    Vec h(p.size());
    for (auto &v: h)
      v = u(rng);
    const double adj = p.inner(g, h);
    double best = 1e300;
    for (double eps: {1e-2, 1e-3, 1e-4}) {
      Vec xp = x, xm = x;
      for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] += eps * h[i];
        xm[i] -= eps * h[i];
      }
      const double fd = (p.value(xp) - p.value(xm)) / (2.0 * eps);
      best = std::min(best, rel_err(adj, fd));
    }
    EXPECT_LT(best, 1e-6) << "direction " << dir;
  }
}

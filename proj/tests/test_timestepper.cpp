// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "phbc/examples.hpp"
#include "phbc/timestepper.hpp"

using namespace phbc;

namespace
{

Colligation wave_colligation(const BoxGrid &grid)
{
  return wave_system(2).colligation(grid, BoundarySplitting::uniform(boundary_geometry(grid), BoundaryPart::Gamma1));
}

}  // namespace

TEST_CASE("midpoint step matches the dense Cayley map on the constraint kernel")
{
  const BoxGrid grid = BoxGrid::unit({6, 5});
  const Colligation c = wave_colligation(grid);
  const BoundaryConditionSpec spec = impedance_condition(0.7 * Eigen::MatrixXd::Identity(c.b(), c.b()));
  const ConstraintSet cs = constraint_matrix(spec, c.ports);
  const double dt = 0.05;

  const Eigen::MatrixXd Z = kernel_basis(cs.C, c.M_X);
  const Eigen::MatrixXd M = Eigen::MatrixXd(c.M_X);
  const Eigen::MatrixXd Ar = Z.transpose() * M * Eigen::MatrixXd(c.Lp) * Z;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(Ar.rows(), Ar.cols());

  std::mt19937_64 rng(51);
  const Eigen::VectorXd a0 = test::randn(rng, Z.cols());
  const Eigen::VectorXd x0 = Z * a0;
  const Eigen::VectorXd a1 = (I - 0.5 * dt * Ar).lu().solve((I + 0.5 * dt * Ar) * a0);
  const Eigen::VectorXd x1 = step_homogeneous(c, spec, x0, dt);
  CHECK((x1 - Z * a1).norm() < 1e-11 * x0.norm());
}

TEST_CASE("clamped wave conserves energy over many steps")
{
  const BoxGrid grid = BoxGrid::unit({9, 9});
  const Colligation c = wave_colligation(grid);
  std::mt19937_64 rng(52);
  SimulationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 2.0;
  cfg.x0 = test::randn(rng, c.state_size());
  const SimulationResult r = simulate(c, clamp_condition(c.b()), cfg);
  CHECK(r.records.size() == 201);
  CHECK_FALSE(r.warnings.empty());  // x0 needed projection
  const double E0 = r.records.front().E;
  for (const auto &s : r.records)
  {
    CHECK(std::abs(s.E - E0) <= 1e-12 * E0);
  }
}

TEST_CASE("impedance condition dissipates and the discrete balance closes")
{
  const BoxGrid grid = BoxGrid::unit({8, 7});
  const Colligation c = wave_colligation(grid);
  std::mt19937_64 rng(53);
  SimulationConfig cfg;
  cfg.dt = 0.02;
  cfg.t_final = 1.0;
  cfg.x0 = test::randn(rng, c.state_size());
  const SimulationResult r = simulate(c, impedance_condition(Eigen::MatrixXd::Identity(c.b(), c.b())), cfg);
  for (std::size_t k = 1; k < r.records.size(); ++k)
  {
    CHECK(r.records[k].E <= r.records[k - 1].E * (1.0 + 1e-13));
    CHECK(std::abs(r.records[k].balance_residual) <= 1e-12 * r.records[k].balance_scale);
  }
  CHECK(r.records.back().E < 0.9 * r.records.front().E);
}

TEST_CASE("forced scattering run obeys the balance with inputs")
{
  const BoxGrid grid = BoxGrid::unit({7, 7});
  const Colligation c = wave_colligation(grid);
  const BoundaryConditionSpec spec = scattering_condition(Eigen::MatrixXd::Identity(c.b(), c.b()));
  SimulationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.5;
  const int b = c.b();
  cfg.input = [b](double t) { return Eigen::VectorXd::Constant(b, std::sin(6.0 * t)); };
  const SimulationResult r = simulate(c, spec, cfg);
  double work = 0.0;
  for (std::size_t k = 1; k < r.records.size(); ++k)
  {
    const auto &s = r.records[k];
    CHECK(std::abs(s.balance_residual) <= 1e-10 * s.balance_scale);
    work += std::abs(s.multiplier_work);
  }
  CHECK(work > 0.0);
  CHECK(r.records.back().E > 0.0);

  std::mt19937_64 rng(54);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(c.state_size());
  const ForcedStep fs = step_forced(c, spec, x, test::randn(rng, b), 0.01);
  CHECK(fs.y_mid.size() == b);
  CHECK_THROWS_AS(step_forced(c, spec, x, Eigen::VectorXd::Zero(b + 1), 0.01), DimensionMismatch);
}

TEST_CASE("midpoint stepping is reversible")
{
  const BoxGrid grid = BoxGrid::unit({6, 6});
  const Colligation c = wave_colligation(grid);
  const BoundaryConditionSpec spec = clamp_condition(c.b());
  std::mt19937_64 rng(55);
  const ConstraintSet cs = constraint_matrix(spec, c.ports);
  const Eigen::VectorXd x0 = project_onto_kernel(cs.C, c.M_X, test::randn(rng, c.state_size()));
  CHECK(reversibility_error(c, spec, x0, 0.05, 20) < 1e-11);
}

TEST_CASE("step count and configuration errors")
{
  SimulationConfig cfg;
  cfg.dt = 0.1;
  cfg.t_final = 1.0;
  CHECK(step_count(cfg) == 10);
  cfg.dt = 2.0;
  CHECK_THROWS_AS(step_count(cfg), ConfigError);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(step_count(cfg), ConfigError);
  const BoxGrid grid = BoxGrid::unit({4, 4});
  const Colligation c = wave_colligation(grid);
  CHECK_THROWS_AS(MidpointStepper(c, clamp_constraints(c.ports), 0.0), ConfigError);
}

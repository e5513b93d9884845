// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Implicit midpoint stepping of the constrained system
//
//   M_X (x1 - x0) / dt = M_X L_p x_mid + C^T mu,   C x_mid = s,
//
// solved as one sparse saddle-point system per step. Constraints are imposed
// at the midpoint, so the discrete energy obeys
//
//   E1 - E0 = dt (||u||^2 - ||y||^2 + 2 mu^T s - d)
//
// exactly up to round-off, where u, y are the scattering input and output at
// x_mid and d >= 0 the internal dissipation rate.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "phbc/bc.hpp"
#include "phbc/system.hpp"

namespace phbc
{

class MidpointStepper
{
public:
  MidpointStepper(const Colligation &c, ConstraintSet constraints, double dt);

  struct Result
  {
    Eigen::VectorXd x;   // x_{n+1}
    Eigen::VectorXd mu;  // multiplier, one per kept constraint row
    Eigen::VectorXd s;   // constraint right-hand side used
  };

  /// One step with constraint right-hand side injection * u_mid (u_mid may be empty for zero).
  Result step(const Eigen::VectorXd &x, const Eigen::VectorXd &u_mid = {}) const;

  double dt() const { return dt_; }
  const ConstraintSet &constraints() const { return cs_; }

private:
  const Colligation *c_;
  ConstraintSet cs_;
  double dt_;
  SparseMatrix ML_;  // M_X L_p
  Eigen::SparseLU<SparseMatrix> lu_;
};

/// Single homogeneous step (builds a fresh factorization).
Eigen::VectorXd step_homogeneous(const Colligation &c, const BoundaryConditionSpec &spec,
                                 const Eigen::VectorXd &x, double dt);

struct ForcedStep
{
  Eigen::VectorXd x;      // x_{n+1}
  Eigen::VectorXd y_mid;  // scattering output at the midpoint
  Eigen::VectorXd mu;
};

ForcedStep step_forced(const Colligation &c, const BoundaryConditionSpec &spec,
                       const Eigen::VectorXd &x, const Eigen::VectorXd &u_mid, double dt);

using InputSignal = std::function<Eigen::VectorXd(double)>;

struct SimulationConfig
{
  double dt = 0.01;
  double t_final = 1.0;
  InputSignal input;  // k-vector per time; empty means zero input
  Eigen::VectorXd x0;
};

struct StepRecord
{
  int step = 0;
  double t = 0.0;
  double E = 0.0;
  double u_norm_sq = 0.0;
  double y_norm_sq = 0.0;
  double multiplier_work = 0.0;
  double dissipation = 0.0;
  double balance_residual = 0.0;
  double balance_scale = 0.0;  // magnitude the residual should be judged against
};

struct SimulationResult
{
  std::vector<StepRecord> records;  // initial row plus one per step
  Eigen::VectorXd x_final;
  Eigen::VectorXd x0;  // initial state after projection
  std::vector<std::string> warnings;
};

/// Number of steps for the configuration (t_final / dt rounded, at least 1).
int step_count(const SimulationConfig &cfg);

SimulationResult simulate(const Colligation &c, const BoundaryConditionSpec &spec, const SimulationConfig &cfg);

/// || x0 - backward(forward(x0)) || / ||x0|| after `steps` homogeneous steps.
double reversibility_error(const Colligation &c, const BoundaryConditionSpec &spec,
                           const Eigen::VectorXd &x0, double dt, int steps);

}  // namespace phbc

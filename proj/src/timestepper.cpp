// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/timestepper.hpp"

#include <cmath>

namespace phbc
{

namespace
{

void append(std::vector<Triplet> &t, const SparseMatrix &A, int row0, int col0, double scale)
{
  for (int c = 0; c < A.outerSize(); ++c)
  {
    for (SparseMatrix::InnerIterator it(A, c); it; ++it)
    {
      t.emplace_back(row0 + static_cast<int>(it.row()), col0 + c, scale * it.value());
    }
  }
}

}  // namespace

MidpointStepper::MidpointStepper(const Colligation &c, ConstraintSet constraints, double dt)
    : c_(&c), cs_(std::move(constraints)), dt_(dt)
{
  if (!(dt > 0.0))
  {
    throw ConfigError("time step must be positive");
  }
  const int n = c.state_size();
  const int r = cs_.rows();
  ML_ = c.M_X * c.Lp;
  std::vector<Triplet> t;
  append(t, c.M_X, 0, 0, 1.0);
  append(t, ML_, 0, 0, -0.5 * dt);
  const SparseMatrix Ct = cs_.C.transpose();
  append(t, Ct, 0, n, -dt);
  append(t, cs_.C, n, 0, 1.0);
  SparseMatrix A(n + r, n + r);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  lu_.compute(A);
  if (lu_.info() != Eigen::Success)
  {
    throw SaddleSingular("midpoint saddle-point matrix could not be factorized");
  }
}

MidpointStepper::Result MidpointStepper::step(const Eigen::VectorXd &x, const Eigen::VectorXd &u_mid) const
{
  const int n = c_->state_size();
  const int r = cs_.rows();
  Result res;
  res.s = Eigen::VectorXd::Zero(r);
  if (u_mid.size() > 0)
  {
    if (u_mid.size() != cs_.inputs())
    {
      throw DimensionMismatch("input has " + std::to_string(u_mid.size()) + " entries, condition expects " +
                              std::to_string(cs_.inputs()));
    }
    res.s = cs_.injection * u_mid;
  }
  Eigen::VectorXd rhs(n + r);
  rhs.head(n) = c_->M_X * x + 0.5 * dt_ * (ML_ * x);
  rhs.tail(r) = 2.0 * res.s - cs_.C * x;
  const Eigen::VectorXd sol = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success || !sol.allFinite())
  {
    throw SolveFailure("midpoint solve failed");
  }
  res.x = sol.head(n);
  res.mu = sol.tail(r);
  return res;
}

Eigen::VectorXd step_homogeneous(const Colligation &c, const BoundaryConditionSpec &spec,
                                 const Eigen::VectorXd &x, double dt)
{
  return MidpointStepper(c, constraint_matrix(spec, c.ports), dt).step(x).x;
}

ForcedStep step_forced(const Colligation &c, const BoundaryConditionSpec &spec, const Eigen::VectorXd &x,
                       const Eigen::VectorXd &u_mid, double dt)
{
  const MidpointStepper stepper(c, constraint_matrix(spec, c.ports), dt);
  const auto r = stepper.step(x, u_mid);
  const ScatteringView v = scattering_view(c);
  return {r.x, v.K * (0.5 * (x + r.x)), r.mu};
}

int step_count(const SimulationConfig &cfg)
{
  if (!(cfg.dt > 0.0) || !(cfg.t_final > 0.0))
  {
    throw ConfigError("dt and t_final must be positive");
  }
  if (cfg.dt > cfg.t_final)
  {
    throw ConfigError("dt exceeds t_final");
  }
  return std::max(1, static_cast<int>(std::llround(cfg.t_final / cfg.dt)));
}

SimulationResult simulate(const Colligation &c, const BoundaryConditionSpec &spec, const SimulationConfig &cfg)
{
  const int steps = step_count(cfg);
  const int n = c.state_size();
  SimulationResult out;
  ConstraintSet cs = constraint_matrix(spec, c.ports);
  out.warnings = cs.warnings;
  const MidpointStepper stepper(c, std::move(cs), cfg.dt);

  Eigen::VectorXd x = cfg.x0.size() == 0 ? Eigen::VectorXd::Zero(n) : cfg.x0;
  if (x.size() != n)
  {
    throw DimensionMismatch("initial state has wrong length");
  }
  const auto &C = stepper.constraints().C;
  if (C.rows() > 0 && x.squaredNorm() > 0.0)
  {
    const double viol = (C * x).cwiseAbs().maxCoeff();
    if (viol > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()))
    {
      x = project_onto_kernel(C, c.M_X, x);
      out.warnings.push_back("initial state projected onto the constraint space");
    }
  }
  out.x0 = x;

  const ScatteringView v = scattering_view(c);
  StepRecord rec;
  rec.E = energy(c, x);
  out.records.push_back(rec);
  out.records.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k < steps; ++k)
  {
    const double t0 = k * cfg.dt;
    Eigen::VectorXd u;
    if (cfg.input)
    {
      u = cfg.input(t0 + 0.5 * cfg.dt);
    }
    const auto r = stepper.step(x, u);
    const Eigen::VectorXd xm = 0.5 * (x + r.x);
    const Eigen::VectorXd um = v.G * xm;
    const Eigen::VectorXd ym = v.K * xm;

    StepRecord s;
    s.step = k + 1;
    s.t = (k + 1) * cfg.dt;
    s.E = energy(c, r.x);
    s.u_norm_sq = um.dot(v.gram_U * um);
    s.y_norm_sq = ym.dot(v.gram_Y * ym);
    s.multiplier_work = 2.0 * r.mu.dot(r.s);
    s.dissipation = dissipation_rate(c, xm);
    const double E0 = out.records.back().E;
    s.balance_residual = (s.E - E0) - cfg.dt * (s.u_norm_sq - s.y_norm_sq + s.multiplier_work - s.dissipation);
    s.balance_scale = std::max({E0, s.E,
                                cfg.dt * (std::abs(s.u_norm_sq) + std::abs(s.y_norm_sq) +
                                          std::abs(s.multiplier_work) + std::abs(s.dissipation))});
    out.records.push_back(s);
    x = r.x;
  }
  out.x_final = x;
  return out;
}

double reversibility_error(const Colligation &c, const BoundaryConditionSpec &spec, const Eigen::VectorXd &x0,
                           double dt, int steps)
{
  const ConstraintSet cs = constraint_matrix(spec, c.ports);
  const MidpointStepper fwd(c, cs, dt);
  Eigen::VectorXd x = x0;
  for (int k = 0; k < steps; ++k)
  {
    x = fwd.step(x).x;
  }
  // Backward stepping: the midpoint map with -dt is the exact inverse.
  const int n = c.state_size();
  const int r = cs.rows();
  const SparseMatrix ML = c.M_X * c.Lp;
  std::vector<Triplet> t;
  append(t, c.M_X, 0, 0, 1.0);
  append(t, ML, 0, 0, 0.5 * dt);
  const SparseMatrix Ct = cs.C.transpose();
  append(t, Ct, 0, n, dt);
  append(t, cs.C, n, 0, 1.0);
  SparseMatrix A(n + r, n + r);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SparseMatrix> lu(A);
  if (lu.info() != Eigen::Success)
  {
    throw SaddleSingular("backward saddle-point matrix could not be factorized");
  }
  for (int k = 0; k < steps; ++k)
  {
    Eigen::VectorXd rhs(n + r);
    rhs.head(n) = c.M_X * x - 0.5 * dt * (ML * x);
    rhs.tail(r) = -(cs.C * x);
    x = lu.solve(rhs).head(n);
  }
  return (x - x0).norm() / std::max(x0.norm(), 1e-300);
}

}  // namespace phbc

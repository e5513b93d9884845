// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/system.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace phbc
{

namespace
{

SparseMatrix diagonal(const Eigen::VectorXd &d)
{
  SparseMatrix D(d.size(), d.size());
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < d.size(); ++i)
  {
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), d(i));
  }
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

double sq_norm(const SparseMatrix &gram, const Eigen::VectorXd &v)
{
  return v.dot(gram * v);
}

}  // namespace

Colligation assemble_colligation(const StructureMatricesd &S, const HamiltonianDensity &H,
                                 const BoxGrid &grid, const BoundarySplitting &split,
                                 const EntryMatrixField &T)
{
  std::vector<Eigen::MatrixXd> Ls;
  for (const auto &P : S.P)
  {
    Ls.push_back(P.topRightCorner(S.m1, S.m2));
  }
  Colligation c;
  c.grid = grid;
  c.tuple = MatrixTupled(Ls);
  c.structure = S;
  c.H = H;
  c.traces = assemble_traces(c.tuple, grid, split);
  c.ports = boundary_ports(c.traces, H, grid, T);
  c.H_block = hamiltonian_blocks(H, grid);
  const SparseMatrix W = quadrature_mass(grid, S.m());
  c.M_X = 0.5 * (W * c.H_block);
  c.M_X.makeCompressed();
  c.Lp = assemble_full_operator(S, H, grid);
  c.J = SparseMatrix(c.Lp.rows(), c.Lp.cols());
  c.G = c.ports.G;
  c.K = c.ports.K;
  c.gram_U = diagonal(c.ports.gram);
  c.gram_Y = c.gram_U;
  return c;
}

Colligation scattering_transform(const Colligation &c, const Eigen::MatrixXd &R)
{
  if (c.scattering)
  {
    throw DimensionMismatch("colligation is already in scattering form");
  }
  const int b = c.b();
  if (R.rows() != b || R.cols() != b)
  {
    throw DimensionMismatch("R must be b x b");
  }
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw NotSymmetric("R is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success)
  {
    throw NotSPD("R is not positive definite");
  }
  // The Gram G_d R^{-1} is symmetric only if R commutes with G_d.
  const Eigen::VectorXd &g = c.ports.gram;
  const Eigen::MatrixXd comm = g.asDiagonal() * R - R * g.asDiagonal();
  if (comm.cwiseAbs().maxCoeff() > 1e-12 * scale * std::max(1.0, g.maxCoeff()))
  {
    throw DimensionMismatch("R must act blockwise on boundary entries");
  }
  Colligation out = c;
  const SparseMatrix Rs = R.sparseView();
  const SparseMatrix RK = Rs * c.K;
  const double s = 1.0 / std::sqrt(2.0);
  out.G = s * (c.G + RK);
  out.K = s * (c.G - RK);
  const Eigen::MatrixXd Rinv = llt.solve(Eigen::MatrixXd::Identity(b, b));
  Eigen::MatrixXd gram = g.asDiagonal() * Rinv;
  gram = 0.5 * (gram + gram.transpose());
  out.gram_U = gram.sparseView(0.0, 0.0);
  out.gram_Y = out.gram_U;
  out.scattering = true;
  out.R = Rs;
  return out;
}

Colligation scattering_transform(const Colligation &c, const EntryMatrixField &R)
{
  return scattering_transform(c, pointwise_boundary_matrix(c.ports, c.traces, c.grid, R));
}

Colligation inverse_scattering_transform(const Colligation &c)
{
  if (!c.scattering)
  {
    throw DimensionMismatch("colligation is not in scattering form");
  }
  Colligation out = c;
  const double s = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXd R(c.R);
  const Eigen::MatrixXd Rinv = R.llt().solve(Eigen::MatrixXd::Identity(R.rows(), R.cols()));
  const SparseMatrix Rinv_s = Rinv.sparseView(0.0, 0.0);
  out.G = s * (c.G + c.K);
  const SparseMatrix diff = s * (c.G - c.K);
  out.K = Rinv_s * diff;
  out.gram_U = diagonal(c.ports.gram);
  out.gram_Y = out.gram_U;
  out.scattering = false;
  out.R = SparseMatrix();
  return out;
}

ScatteringView scattering_view(const Colligation &c)
{
  if (c.scattering)
  {
    return {c.G, c.K, c.gram_U, c.gram_Y};
  }
  const double s = 1.0 / std::sqrt(2.0);
  ScatteringView v;
  v.G = s * (c.G + c.K);
  v.K = s * (c.G - c.K);
  v.gram_U = c.gram_U;
  v.gram_Y = c.gram_Y;
  return v;
}

double energy(const Colligation &c, const Eigen::VectorXd &x)
{
  return x.dot(c.M_X * x);
}

double dissipation_rate(const Colligation &c, const Eigen::VectorXd &x)
{
  if (c.J.nonZeros() == 0)
  {
    return 0.0;
  }
  return -2.0 * x.dot(c.M_X * (c.J * x));
}

namespace
{

void require_clamped(const Colligation &c, const Eigen::VectorXd &x)
{
  if (x.size() != c.state_size())
  {
    throw DimensionMismatch("state has wrong length");
  }
  if (c.ports.clamp.rows() == 0)
  {
    return;
  }
  const double viol = (c.ports.clamp * x).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff()) *
                       std::max(1.0, Eigen::MatrixXd(c.ports.clamp).cwiseAbs().maxCoeff());
  if (viol > 1e-10 * scale)
  {
    throw ClampViolated("state violates the Gamma0 clamp by " + std::to_string(viol));
  }
}

}  // namespace

double power_balance_residual(const Colligation &c, const Eigen::VectorXd &x)
{
  require_clamped(c, x);
  const ScatteringView v = scattering_view(c);
  const double gen = 2.0 * x.dot(c.M_X * (c.Lp * x));
  const Eigen::VectorXd u = v.G * x;
  const Eigen::VectorXd y = v.K * x;
  return gen + dissipation_rate(c, x) + sq_norm(v.gram_Y, y) - sq_norm(v.gram_U, u);
}

double impedance_balance_residual(const Colligation &c, const Eigen::VectorXd &x)
{
  require_clamped(c, x);
  const double gen = 2.0 * x.dot(c.M_X * (c.Lp * x)) + dissipation_rate(c, x);
  const Eigen::VectorXd b1 = c.ports.G * x;
  const Eigen::VectorXd b2 = c.ports.K * x;
  return gen - 2.0 * b1.dot(c.ports.gram.asDiagonal() * b2);
}

Colligation add_dissipation(const Colligation &c, const MatrixField &J)
{
  const int m = c.structure.m();
  std::vector<Triplet> t;
  for (int node = 0; node < c.grid.num_nodes(); ++node)
  {
    const Eigen::MatrixXd Jz = J(c.grid.coordinates(node));
    if (Jz.rows() != m || Jz.cols() != m)
    {
      throw DimensionMismatch("J(zeta) must be m x m");
    }
    const Eigen::MatrixXd S = 0.5 * (Jz + Jz.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1e-14 * std::max(1.0, Jz.cwiseAbs().maxCoeff()))
    {
      throw NotDissipative("J + J^T is not negative semidefinite at node " + std::to_string(node));
    }
    for (int r = 0; r < m; ++r)
    {
      for (int q = 0; q < m; ++q)
      {
        if (Jz(r, q) != 0.0)
        {
          t.emplace_back(node * m + r, node * m + q, Jz(r, q));
        }
      }
    }
  }
  SparseMatrix Jb(c.state_size(), c.state_size());
  Jb.setFromTriplets(t.begin(), t.end());
  Colligation out = c;
  const SparseMatrix JH = Jb * c.H_block;
  out.J = c.J + JH;
  out.Lp = c.Lp + JH;
  out.J.makeCompressed();
  out.Lp.makeCompressed();
  return out;
}

RestrictedGenerator restricted_generator(const Colligation &c, const ConstraintSet &cs)
{
  RestrictedGenerator g;
  g.Z = kernel_basis(cs.C, c.M_X);
  const Eigen::MatrixXd MZ = c.M_X * g.Z;
  const Eigen::MatrixXd LZ = c.Lp * g.Z;
  g.Ar = MZ.transpose() * LZ;
  // M Pi L Pi = (M Z) A_r (M Z)^T since Pi = Z Z^T M.
  g.MA = MZ * g.Ar * MZ.transpose();
  return g;
}

double full_clamp_skewness(const Colligation &c)
{
  const RestrictedGenerator g = restricted_generator(c, full_clamp_constraints(c.ports));
  return (g.MA + g.MA.transpose()).cwiseAbs().maxCoeff();
}

GeneratorReport generator_check(const Colligation &c, const BoundaryConditionSpec &spec)
{
  GeneratorReport rep;
  const RestrictedGenerator g = restricted_generator(c, constraint_matrix(spec, c.ports));
  const Eigen::MatrixXd S = 0.5 * (g.MA + g.MA.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  rep.max_sym_eig = es.eigenvalues().maxCoeff();
  rep.scale = g.MA.cwiseAbs().maxCoeff();
  rep.dissipative = rep.max_sym_eig <= 1e-10 * std::max(rep.scale, 1e-300);

  rep.skew_residual = full_clamp_skewness(c);
  rep.skew_ok = rep.skew_residual <= 1e-11;

  rep.contraction = true;
  for (double dt : {0.1, 1.0})
  {
    const Eigen::MatrixXd E = (dt * g.Ar).exp();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> en(E.transpose() * E, Eigen::EigenvaluesOnly);
    const double nrm = std::sqrt(std::max(1.0, en.eigenvalues().maxCoeff()));
    rep.exp_norms.push_back(nrm);
    rep.contraction = rep.contraction && nrm <= 1.0 + 1e-10;
  }
  rep.pass = rep.dissipative && rep.skew_ok && rep.contraction;
  return rep;
}

}  // namespace phbc

// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/sbpgrid.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "phbc/boundary.hpp"

namespace phbc
{

BoxGrid::BoxGrid(std::vector<int> counts, std::vector<double> lower, std::vector<double> upper)
    : counts_(std::move(counts)), lower_(std::move(lower)), upper_(std::move(upper))
{
  if (counts_.empty())
  {
    throw InvalidGrid("grid needs at least one axis");
  }
  if (lower_.size() != counts_.size() || upper_.size() != counts_.size())
  {
    throw InvalidGrid("extents do not match the number of axes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i)
  {
    if (counts_[i] < 3)
    {
      throw InvalidGrid("axis " + std::to_string(i) + " has " + std::to_string(counts_[i]) +
                        " nodes, need at least 3");
    }
    if (!(upper_[i] > lower_[i]))
    {
      throw InvalidGrid("axis " + std::to_string(i) + " has an empty extent");
    }
  }
  strides_.assign(counts_.size(), 1);
  for (int i = n() - 2; i >= 0; --i)
  {
    strides_[static_cast<std::size_t>(i)] =
        strides_[static_cast<std::size_t>(i) + 1] * counts_[static_cast<std::size_t>(i) + 1];
  }
  num_nodes_ = strides_.front() * counts_.front();
}

BoxGrid BoxGrid::unit(std::vector<int> counts)
{
  const auto n = counts.size();
  return BoxGrid(std::move(counts), std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
}

double BoxGrid::spacing(int axis) const
{
  return (upper(axis) - lower(axis)) / static_cast<double>(count(axis) - 1);
}

std::vector<int> BoxGrid::multi_index(int node) const
{
  std::vector<int> idx(counts_.size());
  for (int i = 0; i < n(); ++i)
  {
    idx[static_cast<std::size_t>(i)] = (node / stride(i)) % count(i);
  }
  return idx;
}

int BoxGrid::node_index(const std::vector<int> &multi) const
{
  int node = 0;
  for (int i = 0; i < n(); ++i)
  {
    node += multi[static_cast<std::size_t>(i)] * stride(i);
  }
  return node;
}

Point BoxGrid::coordinates(int node) const
{
  Point p(n());
  const auto idx = multi_index(node);
  for (int i = 0; i < n(); ++i)
  {
    p(i) = lower(i) + spacing(i) * idx[static_cast<std::size_t>(i)];
  }
  return p;
}

std::vector<Point> BoxGrid::all_coordinates() const
{
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(num_nodes_));
  for (int node = 0; node < num_nodes_; ++node)
  {
    pts.push_back(coordinates(node));
  }
  return pts;
}

namespace
{

SparseMatrix to_sparse(const Eigen::MatrixXd &A)
{
  return A.sparseView(0.0, 0.0);
}

SparseMatrix identity(int n)
{
  SparseMatrix I(n, n);
  I.setIdentity();
  return I;
}

}  // namespace

SparseMatrix lifted_derivative(const BoxGrid &grid, int axis, const SbpOperator1Dd &op)
{
  SparseMatrix out = identity(1);
  for (int i = 0; i < grid.n(); ++i)
  {
    const SparseMatrix factor = (i == axis) ? to_sparse(op.D) : identity(grid.count(i));
    SparseMatrix next = Eigen::kroneckerProduct(out, factor);
    out = std::move(next);
  }
  out.makeCompressed();
  return out;
}

SparseMatrix lifted_derivative(const BoxGrid &grid, int axis)
{
  return lifted_derivative(grid, axis, sbp_1d(grid.count(axis), grid.spacing(axis)));
}

Eigen::VectorXd quadrature_weights(const BoxGrid &grid)
{
  Eigen::VectorXd w = Eigen::VectorXd::Ones(grid.num_nodes());
  for (int i = 0; i < grid.n(); ++i)
  {
    const auto op = sbp_1d(grid.count(i), grid.spacing(i));
    for (int node = 0; node < grid.num_nodes(); ++node)
    {
      w(node) *= op.norm((node / grid.stride(i)) % grid.count(i));
    }
  }
  return w;
}

SparseMatrix quadrature_mass(const BoxGrid &grid, int components)
{
  const Eigen::VectorXd w = quadrature_weights(grid);
  SparseMatrix M(grid.num_nodes() * components, grid.num_nodes() * components);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(M.rows()));
  for (int node = 0; node < grid.num_nodes(); ++node)
  {
    for (int c = 0; c < components; ++c)
    {
      t.emplace_back(node * components + c, node * components + c, w(node));
    }
  }
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

SparseMatrix assemble_kron_sum(const std::vector<Eigen::MatrixXd> &blocks, const BoxGrid &grid)
{
  if (static_cast<int>(blocks.size()) != grid.n())
  {
    throw DimensionMismatch("tuple has n = " + std::to_string(blocks.size()) +
                            " but grid has n = " + std::to_string(grid.n()));
  }
  const auto rows = blocks.front().rows();
  const auto cols = blocks.front().cols();
  SparseMatrix out(grid.num_nodes() * rows, grid.num_nodes() * cols);
  for (int i = 0; i < grid.n(); ++i)
  {
    SparseMatrix term = Eigen::kroneckerProduct(lifted_derivative(grid, i), to_sparse(blocks[i]));
    out += term;
  }
  out.prune(0.0);
  out.makeCompressed();
  return out;
}

DifferentialOperator assemble_diffop(const MatrixTupled &L, const BoxGrid &grid)
{
  if (L.n() != grid.n())
  {
    throw DimensionMismatch("tuple dimension does not match grid dimension");
  }
  DifferentialOperator op;
  op.m1 = L.m1();
  op.m2 = L.m2();
  op.forward = assemble_kron_sum(L.matrices(), grid);
  op.adjoint = assemble_kron_sum(L.adjoint().matrices(), grid);
  return op;
}

SparseMatrix repeat_blocks(const Eigen::MatrixXd &block, int num_nodes)
{
  return Eigen::kroneckerProduct(identity(num_nodes), to_sparse(block));
}

SparseMatrix hamiltonian_blocks(const HamiltonianDensity &H, const BoxGrid &grid)
{
  const int m = H.m;
  SparseMatrix out(grid.num_nodes() * m, grid.num_nodes() * m);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_nodes() * m * m));
  for (int node = 0; node < grid.num_nodes(); ++node)
  {
    const Eigen::MatrixXd Hz = H(grid.coordinates(node));
    if (Hz.rows() != m || Hz.cols() != m)
    {
      throw DimensionMismatch("H(zeta) has wrong shape");
    }
    for (int r = 0; r < m; ++r)
    {
      for (int c = 0; c < m; ++c)
      {
        if (Hz(r, c) != 0.0)
        {
          t.emplace_back(node * m + r, node * m + c, Hz(r, c));
        }
      }
    }
  }
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix assemble_full_operator(const StructureMatricesd &S, const HamiltonianDensity &H,
                                    const BoxGrid &grid)
{
  if (S.n() != grid.n())
  {
    throw DimensionMismatch("structure matrices do not match grid dimension");
  }
  if (H.m != S.m())
  {
    throw DimensionMismatch("Hamiltonian density size differs from m1 + m2");
  }
  SparseMatrix DP = assemble_kron_sum(S.P, grid);
  SparseMatrix P0 = repeat_blocks(S.P0, grid.num_nodes());
  SparseMatrix Hb = hamiltonian_blocks(H, grid);
  SparseMatrix Lp = (DP + P0) * Hb;
  Lp.prune(0.0);
  Lp.makeCompressed();
  return Lp;
}

double quadrature_inner(const BoxGrid &grid, int components, const Eigen::VectorXd &f,
                        const Eigen::VectorXd &g)
{
  if (f.size() != grid.num_nodes() * components || g.size() != f.size())
  {
    throw DimensionMismatch("field sizes do not conform to the grid");
  }
  const Eigen::VectorXd w = quadrature_weights(grid);
  double s = 0.0;
  for (int node = 0; node < grid.num_nodes(); ++node)
  {
    s += w(node) * f.segment(node * components, components).dot(g.segment(node * components, components));
  }
  return s;
}

double boundary_form(const MatrixTupled &L, const BoxGrid &grid, const Eigen::VectorXd &f,
                     const Eigen::VectorXd &g)
{
  const int m1 = L.m1();
  const int m2 = L.m2();
  if (f.size() != grid.num_nodes() * m2 || g.size() != grid.num_nodes() * m1)
  {
    throw DimensionMismatch("field sizes do not conform to the grid");
  }
  const FaceNodeSet faces = boundary_geometry(grid);
  double b = 0.0;
  for (const auto &e : faces.entries)
  {
    const Eigen::MatrixXd Lnu = l_nu(L, e.normal);
    b += e.weight * (Lnu * f.segment(e.node * m2, m2)).dot(g.segment(e.node * m1, m1));
  }
  return b;
}

double green_identity_residual(const MatrixTupled &L, const BoxGrid &grid,
                               const Eigen::VectorXd &f, const Eigen::VectorXd &g)
{
  const auto op = assemble_diffop(L, grid);
  if (f.size() != op.forward.cols() || g.size() != op.forward.rows())
  {
    throw DimensionMismatch("field sizes do not conform to the grid");
  }
  const Eigen::VectorXd Lf = op.forward * f;
  const Eigen::VectorXd LHg = op.adjoint * g;
  const double lhs = quadrature_inner(grid, L.m1(), Lf, g) + quadrature_inner(grid, L.m2(), f, LHg);
  return std::abs(lhs - boundary_form(L, grid, f, g));
}

}  // namespace phbc

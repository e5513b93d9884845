// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/boundary.hpp"

#include <algorithm>

namespace phbc
{

FaceNodeSet boundary_geometry(const BoxGrid &grid)
{
  FaceNodeSet set;
  set.num_faces = 2 * grid.n();
  std::vector<SbpOperator1Dd> ops;
  for (int i = 0; i < grid.n(); ++i)
  {
    ops.push_back(sbp_1d(grid.count(i), grid.spacing(i)));
  }
  for (int face = 0; face < set.num_faces; ++face)
  {
    const int axis = face / 2;
    const int sign = (face % 2 == 0) ? -1 : 1;
    const int fixed = (sign < 0) ? 0 : grid.count(axis) - 1;
    for (int node = 0; node < grid.num_nodes(); ++node)
    {
      const auto idx = grid.multi_index(node);
      if (idx[static_cast<std::size_t>(axis)] != fixed)
      {
        continue;
      }
      FaceNodeEntry e;
      e.face = face;
      e.axis = axis;
      e.sign = sign;
      e.node = node;
      e.weight = 1.0;
      for (int j = 0; j < grid.n(); ++j)
      {
        if (j != axis)
        {
          e.weight *= ops[static_cast<std::size_t>(j)].norm(idx[static_cast<std::size_t>(j)]);
        }
      }
      e.normal = Eigen::VectorXd::Zero(grid.n());
      e.normal(axis) = sign;
      set.entries.push_back(std::move(e));
    }
  }
  return set;
}

BoundarySplitting BoundarySplitting::from_faces(const FaceNodeSet &geometry,
                                                const std::vector<BoundaryPart> &face_labels)
{
  if (static_cast<int>(face_labels.size()) != geometry.num_faces)
  {
    throw SplitMismatch("expected " + std::to_string(geometry.num_faces) + " face labels, got " +
                        std::to_string(face_labels.size()));
  }
  BoundarySplitting s;
  s.labels_.reserve(geometry.size());
  for (const auto &e : geometry.entries)
  {
    s.labels_.push_back(face_labels[static_cast<std::size_t>(e.face)]);
  }
  return s;
}

BoundarySplitting BoundarySplitting::uniform(const FaceNodeSet &geometry, BoundaryPart part)
{
  return from_faces(geometry, std::vector<BoundaryPart>(static_cast<std::size_t>(geometry.num_faces), part));
}

BoundarySplitting BoundarySplitting::from_entries(std::vector<BoundaryPart> labels)
{
  BoundarySplitting s;
  s.labels_ = std::move(labels);
  s.per_node_ = true;
  return s;
}

std::size_t BoundarySplitting::count(BoundaryPart part) const
{
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), part));
}

Eigen::MatrixXd range_basis(const Eigen::MatrixXd &A)
{
  if (A.size() == 0)
  {
    return Eigen::MatrixXd(A.rows(), 0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto &s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  if (smax > 0.0)
  {
    for (int i = 0; i < s.size(); ++i)
    {
      if (s(i) > 1e-12 * smax)
      {
        ++rank;
      }
    }
  }
  if (rank == A.rows())
  {
    // Surjective symbol: keep the natural coordinates.
    return Eigen::MatrixXd::Identity(A.rows(), A.rows());
  }
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd pointwise_projector(const Eigen::MatrixXd &Lnu)
{
  const Eigen::MatrixXd U = range_basis(Lnu);
  return U * U.transpose();
}

double TraceOperators::boundary_inner(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const
{
  double s = 0.0;
  for (std::size_t e = 0; e < geometry.size(); ++e)
  {
    const auto off = static_cast<Eigen::Index>(e) * m1;
    s += weights(static_cast<Eigen::Index>(e)) * a.segment(off, m1).dot(b.segment(off, m1));
  }
  return s;
}

namespace
{

void add_block(std::vector<Triplet> &t, int row0, int col0, const Eigen::MatrixXd &B)
{
  for (int r = 0; r < B.rows(); ++r)
  {
    for (int c = 0; c < B.cols(); ++c)
    {
      if (B(r, c) != 0.0)
      {
        t.emplace_back(row0 + r, col0 + c, B(r, c));
      }
    }
  }
}

}  // namespace

TraceOperators assemble_traces(const MatrixTupled &L, const BoxGrid &grid,
                               const BoundarySplitting &split)
{
  if (L.n() != grid.n())
  {
    throw DimensionMismatch("tuple dimension does not match grid dimension");
  }
  TraceOperators tr;
  tr.geometry = boundary_geometry(grid);
  if (split.size() != tr.geometry.size())
  {
    throw SplitMismatch("splitting labels " + std::to_string(split.size()) + " entries, boundary has " +
                        std::to_string(tr.geometry.size()));
  }
  tr.split = split;
  tr.m1 = L.m1();
  tr.m2 = L.m2();
  const int m1 = tr.m1;
  const int m2 = tr.m2;
  const auto E = static_cast<int>(tr.geometry.size());
  const int N = grid.num_nodes();

  std::vector<Triplet> g0, p0, p1, pb, ln;
  tr.weights.resize(E);
  for (int e = 0; e < E; ++e)
  {
    const auto &entry = tr.geometry.entries[static_cast<std::size_t>(e)];
    tr.weights(e) = entry.weight;
    const Eigen::MatrixXd Lnu = l_nu(L, entry.normal);
    const Eigen::MatrixXd U = range_basis(Lnu);
    const Eigen::MatrixXd P = U * U.transpose();
    tr.lnu.push_back(Lnu);
    tr.basis.push_back(U);
    tr.projector.push_back(P);

    add_block(g0, e * m1, entry.node * m1, Eigen::MatrixXd::Identity(m1, m1));
    add_block(pb, e * m1, entry.node * m1, P);
    add_block(split[static_cast<std::size_t>(e)] == BoundaryPart::Gamma0 ? p0 : p1, e * m1,
              entry.node * m1, P);
    add_block(ln, e * m1, entry.node * m2, Lnu);
  }
  auto build = [](int rows, int cols, const std::vector<Triplet> &t) {
    SparseMatrix A(rows, cols);
    A.setFromTriplets(t.begin(), t.end());
    return A;
  };
  tr.gamma0 = build(E * m1, N * m1, g0);
  tr.pi_gamma0 = build(E * m1, N * m1, p0);
  tr.pi_gamma1 = build(E * m1, N * m1, p1);
  tr.pi_boundary = build(E * m1, N * m1, pb);
  tr.lnu_trace = build(E * m1, N * m2, ln);
  return tr;
}

namespace
{

Eigen::MatrixXd kernel_basis_svd(const Eigen::MatrixXd &A)
{
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
  {
    if (smax > 0.0 && s(i) > 1e-12 * smax)
    {
      ++rank;
    }
  }
  return svd.matrixV().rightCols(A.cols() - rank);
}

}  // namespace

bool kernel_identity_check(const Eigen::MatrixXd &Lnu)
{
  const Eigen::MatrixXd P = pointwise_projector(Lnu);
  const Eigen::MatrixXd LT = Lnu.transpose();
  const Eigen::MatrixXd kerP = kernel_basis_svd(P);
  const Eigen::MatrixXd kerLT = kernel_basis_svd(LT);
  if (kerP.cols() != kerLT.cols())
  {
    return false;
  }
  const double scaleL = std::max(1.0, LT.cwiseAbs().maxCoeff());
  for (int j = 0; j < kerP.cols(); ++j)
  {
    if ((LT * kerP.col(j)).norm() > 1e-10 * scaleL)
    {
      return false;
    }
  }
  for (int j = 0; j < kerLT.cols(); ++j)
  {
    if ((P * kerLT.col(j)).norm() > 1e-10)
    {
      return false;
    }
  }
  return true;
}

bool kernel_identity_check(const MatrixTupled &L, const Eigen::VectorXd &nu)
{
  return kernel_identity_check(l_nu(L, nu));
}

}  // namespace phbc

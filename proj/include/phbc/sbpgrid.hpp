// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Tensor-product box grids and diagonal-norm summation-by-parts operators.
//
// Node ordering is lexicographic with axis 0 slowest; vector fields are stored
// node-major (all components of a node are contiguous), so the field index of
// (node, component) is node * k + component.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phbc/algebra.hpp"

namespace phbc
{

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

class BoxGrid
{
public:
  BoxGrid() = default;
  BoxGrid(std::vector<int> counts, std::vector<double> lower, std::vector<double> upper);

  /// Unit box [0, 1]^n with the given node counts.
  static BoxGrid unit(std::vector<int> counts);

  int n() const { return static_cast<int>(counts_.size()); }
  int count(int axis) const { return counts_[static_cast<std::size_t>(axis)]; }
  double lower(int axis) const { return lower_[static_cast<std::size_t>(axis)]; }
  double upper(int axis) const { return upper_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const;
  int num_nodes() const { return num_nodes_; }

  std::vector<int> multi_index(int node) const;
  int node_index(const std::vector<int> &multi) const;
  Point coordinates(int node) const;
  std::vector<Point> all_coordinates() const;

  /// Distance between consecutive node indices along `axis`.
  int stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

private:
  std::vector<int> counts_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> strides_;
  int num_nodes_ = 0;
};

/// Second-order diagonal-norm SBP operator on N nodes.
template <typename Scalar>
struct SbpOperator1D
{
  DenseMatrix<Scalar> D;
  DenseVector<Scalar> norm;  // diagonal of Hn
  DenseMatrix<Scalar> E;     // diag(-1, 0, ..., 0, 1)

  DenseMatrix<Scalar> Hn() const { return norm.asDiagonal(); }

  /// Hn D + (Hn D)^T - E, which vanishes for a valid operator.
  DenseMatrix<Scalar> sbp_defect() const
  {
    const DenseMatrix<Scalar> Q = norm.asDiagonal() * D;
    return Q + Q.transpose() - E;
  }
};

using SbpOperator1Dd = SbpOperator1D<double>;

template <typename Scalar = double>
SbpOperator1D<Scalar> sbp_1d(int N, Scalar h)
{
  if (N < 3)
  {
    throw InvalidGrid("SBP operator needs at least 3 nodes, got " + std::to_string(N));
  }
  if (!(h > Scalar(0)))
  {
    throw InvalidGrid("spacing must be positive");
  }
  SbpOperator1D<Scalar> op;
  op.D = DenseMatrix<Scalar>::Zero(N, N);
  const Scalar inv_h = Scalar(1) / h;
  const Scalar half_inv_h = Scalar(1) / (Scalar(2) * h);
  op.D(0, 0) = -inv_h;
  op.D(0, 1) = inv_h;
  for (int i = 1; i < N - 1; ++i)
  {
    op.D(i, i - 1) = -half_inv_h;
    op.D(i, i + 1) = half_inv_h;
  }
  op.D(N - 1, N - 2) = -inv_h;
  op.D(N - 1, N - 1) = inv_h;

  op.norm = DenseVector<Scalar>::Constant(N, h);
  op.norm(0) = h / Scalar(2);
  op.norm(N - 1) = h / Scalar(2);

  op.E = DenseMatrix<Scalar>::Zero(N, N);
  op.E(0, 0) = Scalar(-1);
  op.E(N - 1, N - 1) = Scalar(1);
  return op;
}

/// (node, component) bookkeeping for k-component fields on a grid.
struct FieldLayout
{
  BoxGrid grid;
  int components = 1;

  int size() const { return grid.num_nodes() * components; }
  int index(int node, int component) const { return node * components + component; }
  int node_of(int index) const { return index / components; }
  int component_of(int index) const { return index % components; }
};

/// Axis-`axis` SBP derivative lifted to the tensor grid (scalar fields).
SparseMatrix lifted_derivative(const BoxGrid &grid, int axis);

/// Same, built from a caller-supplied 1D operator (used for fault injection).
SparseMatrix lifted_derivative(const BoxGrid &grid, int axis, const SbpOperator1Dd &op);

/// Tensor-product quadrature weights (diagonal of the SBP norm), one per node.
Eigen::VectorXd quadrature_weights(const BoxGrid &grid);

/// Diagonal quadrature mass for k-component fields.
SparseMatrix quadrature_mass(const BoxGrid &grid, int components);

/// Sparse L_d = sum_i D_i (x) L_i and its formal adjoint L_d^H = sum_i D_i (x) L_i^T.
struct DifferentialOperator
{
  SparseMatrix forward;  // m2-fields -> m1-fields
  SparseMatrix adjoint;  // m1-fields -> m2-fields
  int m1 = 0;
  int m2 = 0;
};

DifferentialOperator assemble_diffop(const MatrixTupled &L, const BoxGrid &grid);

/// sum_i D_i (x) A_i for an arbitrary tuple of equally shaped blocks.
SparseMatrix assemble_kron_sum(const std::vector<Eigen::MatrixXd> &blocks, const BoxGrid &grid);

/// Block-diagonal matrix with H(node) on each node block.
SparseMatrix hamiltonian_blocks(const HamiltonianDensity &H, const BoxGrid &grid);

/// Block-diagonal matrix with the same dense block on every node.
SparseMatrix repeat_blocks(const Eigen::MatrixXd &block, int num_nodes);

/// L_p = (D_P + I (x) P0) H_block acting on m-fields.
SparseMatrix assemble_full_operator(const StructureMatricesd &S, const HamiltonianDensity &H,
                                    const BoxGrid &grid);

/// <f, g>_M with the tensor SBP quadrature on k-component fields.
double quadrature_inner(const BoxGrid &grid, int components, const Eigen::VectorXd &f,
                        const Eigen::VectorXd &g);

/// Boundary quadrature b(f, g) = sum over face-node entries of w <L_nu f, g>.
double boundary_form(const MatrixTupled &L, const BoxGrid &grid, const Eigen::VectorXd &f,
                     const Eigen::VectorXd &g);

/// |<L_d f, g>_M + <f, L_d^H g>_M - b(f, g)| for an m2-field f and m1-field g.
double green_identity_residual(const MatrixTupled &L, const BoxGrid &grid,
                               const Eigen::VectorXd &f, const Eigen::VectorXd &g);

}  // namespace phbc

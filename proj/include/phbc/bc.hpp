// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Boundary conditions on the controlled boundary part and the generator
// conditions they must satisfy.
//
// The discrete boundary space on Gamma1 stacks, for every Gamma1 face-node
// entry, the coordinates of a value in ran L_nu with respect to the entry's
// orthonormal range basis; its dimension is b. Adjoints of boundary maps are
// taken with respect to the diagonal boundary Gram matrix.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phbc/algebra.hpp"
#include "phbc/boundary.hpp"
#include "phbc/sbpgrid.hpp"

namespace phbc
{

/// Pointwise matrix attached to a boundary entry (T, R, M presets).
using EntryMatrixField = std::function<Eigen::MatrixXd(const FaceNodeEntry &, const Point &)>;

/// Identity on R^m1 at every entry.
EntryMatrixField identity_entry_field(int m1);

/// s * I on R^m1 at every entry.
EntryMatrixField scalar_entry_field(int m1, double s);

/// Layout of one Gamma1 entry inside the b-dimensional boundary space.
struct PortEntry
{
  int entry = 0;   // index into the face-node set
  int offset = 0;  // first coordinate in the boundary space
  int rank = 0;    // coordinates contributed
  Eigen::MatrixXd basis;    // m1 x rank, orthonormal basis of ran L_nu
  Eigen::MatrixXd T;        // rank x rank, compressed pointwise transform
};

/// Boundary maps of a port-Hamiltonian state x (all rows act on x, i.e. H is
/// already applied).
struct BoundaryPorts
{
  int state_size = 0;
  int m1 = 0;
  int m2 = 0;
  SparseMatrix clamp;   // Gamma0: basis^T (Hx)_1 = 0 per entry
  SparseMatrix G;       // b x n: T pi_L (Hx)_1 on Gamma1
  SparseMatrix K;       // b x n: T^{-T} L_nu (Hx)_2 on Gamma1
  SparseMatrix B1_all;  // every entry, no T: basis^T (Hx)_1
  SparseMatrix B2_all;  // every entry, no T: basis^T L_nu (Hx)_2
  Eigen::VectorXd gram;  // length b, boundary Gram diagonal (w / 2)
  std::vector<PortEntry> entries;

  int b() const { return static_cast<int>(gram.size()); }
};

/// Builds the boundary maps. `T` is evaluated per Gamma1 entry and must leave
/// ran L_nu invariant; an empty function means the identity.
BoundaryPorts boundary_ports(const TraceOperators &traces, const HamiltonianDensity &H,
                             const BoxGrid &grid, const EntryMatrixField &T = {});

/// b x b block-diagonal matrix from a pointwise field compressed to the range bases.
Eigen::MatrixXd pointwise_boundary_matrix(const BoundaryPorts &ports, const TraceOperators &traces,
                                          const BoxGrid &grid, const EntryMatrixField &field);

enum class ConditionForm
{
  W,  // W1 B1 + W2 B2 = 0 (contraction-semigroup parameterization)
  V,  // V1 B1 + V2 B2 = 0 with the pivot-space conditions
};

struct BoundaryConditionSpec
{
  ConditionForm form = ConditionForm::W;
  Eigen::MatrixXd first;   // W1 or V1, k x b
  Eigen::MatrixXd second;  // W2 or V2, k x b
  Eigen::MatrixXd T;       // optional b x b, empty when absent
  Eigen::MatrixXd R;       // optional b x b SPD, empty when absent
  std::string label;

  int k() const { return static_cast<int>(first.rows()); }
  int b() const { return static_cast<int>(first.cols()); }
};

/// Validates shapes and the optional T/R invariants.
void validate_spec(const BoundaryConditionSpec &spec);

// Named presets on a b-dimensional boundary space.
BoundaryConditionSpec clamp_condition(int b);                        // W1 = I, W2 = 0
BoundaryConditionSpec free_condition(int b);                         // W1 = 0, W2 = I
BoundaryConditionSpec impedance_condition(const Eigen::MatrixXd &M);  // W1 = I, W2 = M
BoundaryConditionSpec scattering_condition(const Eigen::MatrixXd &R); // (I, R) / sqrt(2)

struct DissipativeRelation
{
  Eigen::MatrixXd basis;  // 2b x d, columns [q; p]
  Eigen::VectorXd gram;   // length b, boundary Gram diagonal
};

struct RelationReport
{
  int dimension = 0;
  double max_form_eig = 0.0;
  bool dissipative = false;
  bool maximal = false;
};

RelationReport relation_dissipativity(const DissipativeRelation &rel);

/// ker [A1 A2] as a relation on the boundary space.
DissipativeRelation kernel_relation(const Eigen::MatrixXd &A1, const Eigen::MatrixXd &A2,
                                    const Eigen::VectorXd &gram);

struct ContractionReport
{
  bool range_ok = false;
  bool injective = false;
  bool inequality_ok = false;
  double max_range_residual = 0.0;
  double sigma_ratio = 0.0;    // sigma_min / sigma_max of W1 + W2
  double min_form_eig = 0.0;   // of W1 W2* + W2 W1*
  bool verdict = false;
};

/// `gram` is the boundary Gram diagonal; empty means the identity.
ContractionReport check_contraction_conditions(const BoundaryConditionSpec &spec,
                                               const Eigen::VectorXd &gram = {});

struct KeyTheoremReport
{
  bool closedness_automatic = true;  // condition (i) holds in finite dimensions
  RelationReport relation;           // condition (ii) on ker [V1 V2]
  bool inequality_ok = false;        // condition (iii)
  double min_form_eig = 0.0;
  bool verdict = false;
};

KeyTheoremReport check_key_theorem_conditions(const BoundaryConditionSpec &spec,
                                              const Eigen::VectorXd &gram = {});

/// Linear constraints C x = injection * u on the state.
struct ConstraintSet
{
  SparseMatrix C;
  SparseMatrix injection;  // rows(C) x k
  int clamp_rows = 0;      // kept rows that came from the Gamma0 clamp
  int pruned_rows = 0;
  std::vector<std::string> warnings;

  int rows() const { return static_cast<int>(C.rows()); }
  int inputs() const { return static_cast<int>(injection.cols()); }
};

/// Gamma0 clamp rows followed by W1 T G + W2 T^{-T} K = s; dependent rows are
/// pruned (QR, tolerance 1e-12) with a warning.
ConstraintSet constraint_matrix(const BoundaryConditionSpec &spec, const BoundaryPorts &ports);

ConstraintSet constraint_matrix(const BoundaryConditionSpec &spec, const TraceOperators &traces,
                                const HamiltonianDensity &H, const BoxGrid &grid);

/// Gamma0 clamp only (Gamma1 left free).
ConstraintSet clamp_constraints(const BoundaryPorts &ports);

/// Both boundary maps zero on the whole boundary.
ConstraintSet full_clamp_constraints(const BoundaryPorts &ports);

/// Drops dependent rows, processing groups of rows that share columns.
ConstraintSet prune_rows(const SparseMatrix &C, const SparseMatrix &injection, int clamp_rows);

/// Basis Z of ker C with Z^T M Z = I (dense; intended for moderate sizes).
Eigen::MatrixXd kernel_basis(const SparseMatrix &C, const SparseMatrix &M);

/// M-orthogonal projection of x onto ker C.
Eigen::VectorXd project_onto_kernel(const SparseMatrix &C, const SparseMatrix &M,
                                    const Eigen::VectorXd &x);

}  // namespace phbc

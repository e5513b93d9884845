// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Discrete boundary of a box grid, the pointwise projector onto ran L_nu and
// the projected traces pi_L^Gamma = P_Gamma gamma_0.
//
// Edge and corner nodes appear once per incident face. Every occurrence
// carries that face's outward normal and the transverse tensor quadrature
// weight, which is exactly the form in which the SBP boundary matrices E_i
// contribute, so the discrete Green identity stays exact.

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phbc/algebra.hpp"
#include "phbc/sbpgrid.hpp"

namespace phbc
{

struct FaceNodeEntry
{
  int face = 0;  // 2 * axis + (sign > 0)
  int axis = 0;
  int sign = 1;
  int node = 0;
  double weight = 1.0;
  Eigen::VectorXd normal;
};

struct FaceNodeSet
{
  int num_faces = 0;
  std::vector<FaceNodeEntry> entries;

  std::size_t size() const { return entries.size(); }
};

/// Enumerates the 2n faces (face id ascending, nodes lexicographic within a face).
FaceNodeSet boundary_geometry(const BoxGrid &grid);

enum class BoundaryPart
{
  Gamma0,  // clamped
  Gamma1,  // controlled
};

class BoundarySplitting
{
public:
  BoundarySplitting() = default;

  /// Face-granular splitting: one label per face id.
  static BoundarySplitting from_faces(const FaceNodeSet &geometry,
                                      const std::vector<BoundaryPart> &face_labels);

  /// Whole boundary in one part.
  static BoundarySplitting uniform(const FaceNodeSet &geometry, BoundaryPart part);

  /// Per-entry labels. Valid as a partition, but such splittings are outside
  /// the thin-boundary setting, so the result is flagged.
  static BoundarySplitting from_entries(std::vector<BoundaryPart> labels);

  const std::vector<BoundaryPart> &labels() const { return labels_; }
  BoundaryPart operator[](std::size_t entry) const { return labels_[entry]; }
  std::size_t size() const { return labels_.size(); }
  bool per_node() const { return per_node_; }
  std::size_t count(BoundaryPart part) const;

private:
  std::vector<BoundaryPart> labels_;
  bool per_node_ = false;
};

/// Orthonormal basis of the column space of A (SVD, rank tol 1e-12 sigma_max).
Eigen::MatrixXd range_basis(const Eigen::MatrixXd &A);

/// Orthogonal projector onto ran(L_nu).
Eigen::MatrixXd pointwise_projector(const Eigen::MatrixXd &Lnu);

/// Trace machinery for a tuple L on a split box boundary. All maps act on
/// split fields: m1-fields for gamma0 and the projected traces, m2-fields for
/// the L_nu trace. Outputs are stacked per face-node entry (m1 values each).
struct TraceOperators
{
  FaceNodeSet geometry;
  BoundarySplitting split;
  int m1 = 0;
  int m2 = 0;

  SparseMatrix gamma0;                         // m1-field -> entries x m1
  std::vector<Eigen::MatrixXd> lnu;            // per entry, m1 x m2
  std::vector<Eigen::MatrixXd> projector;      // per entry, m1 x m1
  std::vector<Eigen::MatrixXd> basis;          // per entry, m1 x rank orthonormal
  SparseMatrix pi_gamma0;                      // m1-field -> entries x m1
  SparseMatrix pi_gamma1;
  SparseMatrix pi_boundary;
  SparseMatrix lnu_trace;                      // m2-field -> entries x m1
  Eigen::VectorXd weights;                     // per entry

  /// <a, b>_d = sum_e w_e a_e . b_e on stacked entry values.
  double boundary_inner(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const;
};

TraceOperators assemble_traces(const MatrixTupled &L, const BoxGrid &grid,
                               const BoundarySplitting &split);

/// ker(projector onto ran L_nu) == ker(L_nu^T), tested by mutual containment.
bool kernel_identity_check(const MatrixTupled &L, const Eigen::VectorXd &nu);

/// Same test for a bare L_nu matrix.
bool kernel_identity_check(const Eigen::MatrixXd &Lnu);

}  // namespace phbc

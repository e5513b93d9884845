// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Boundary colligation (G, L, K) of a discretized port-Hamiltonian system and
// its energy balances.
//
// State x is node-major with m = m1 + m2 components per node. The energy is
// E(x) = x^T M_X x with M_X = 1/2 (W (x) I) H_block, where W holds the
// quadrature weights.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phbc/algebra.hpp"
#include "phbc/bc.hpp"
#include "phbc/boundary.hpp"
#include "phbc/sbpgrid.hpp"

namespace phbc
{

struct Colligation
{
  BoxGrid grid;
  MatrixTupled tuple;
  StructureMatricesd structure;
  HamiltonianDensity H;
  TraceOperators traces;
  BoundaryPorts ports;

  SparseMatrix H_block;
  SparseMatrix M_X;
  SparseMatrix Lp;  // (D_P + I (x) P0) H_block, plus internal dissipation if added
  SparseMatrix J;   // internal dissipation acting on x (zero unless added)

  // Current input and output maps with their Gram matrices. In impedance form
  // G and K are the boundary-triple maps and both Grams are the boundary Gram.
  SparseMatrix G;
  SparseMatrix K;
  SparseMatrix gram_U;
  SparseMatrix gram_Y;
  bool scattering = false;
  SparseMatrix R;  // b x b, set in scattering form

  int state_size() const { return static_cast<int>(Lp.rows()); }
  int b() const { return ports.b(); }
  int m1() const { return structure.m1; }
  int m2() const { return structure.m2; }
};

/// Assembles the colligation. `T` is the optional pointwise boundary transform.
Colligation assemble_colligation(const StructureMatricesd &S, const HamiltonianDensity &H,
                                 const BoxGrid &grid, const BoundarySplitting &split,
                                 const EntryMatrixField &T = {});

/// G' = (G + R K) / sqrt 2, K' = (G - R K) / sqrt 2 with Grams G_d R^{-1}.
/// R must be block diagonal per boundary entry and SPD.
Colligation scattering_transform(const Colligation &c, const Eigen::MatrixXd &R);

Colligation scattering_transform(const Colligation &c, const EntryMatrixField &R);

/// Back to impedance form: G = (G' + K') / sqrt 2, K = R^{-1} (G' - K') / sqrt 2.
Colligation inverse_scattering_transform(const Colligation &c);

/// Input and output maps with Grams in scattering form (R = I if `c` is in
/// impedance form).
struct ScatteringView
{
  SparseMatrix G;
  SparseMatrix K;
  SparseMatrix gram_U;
  SparseMatrix gram_Y;
};

ScatteringView scattering_view(const Colligation &c);

double energy(const Colligation &c, const Eigen::VectorXd &x);

/// -2 <J x, x>_X, the internal dissipation rate.
double dissipation_rate(const Colligation &c, const Eigen::VectorXd &x);

/// 2 <L_p x, x>_X + ||K x||_Y^2 - ||G x||_U^2 with the internal dissipation
/// rate added back. `x` must satisfy the Gamma0 clamp (ClampViolated).
double power_balance_residual(const Colligation &c, const Eigen::VectorXd &x);

/// 2 <L_p x, x>_X - 2 <B1 x, B2 x> (lossless part, impedance form).
double impedance_balance_residual(const Colligation &c, const Eigen::VectorXd &x);

/// Adds J(zeta) H(zeta) to the generator; J must satisfy J + J^T <= 0 pointwise.
Colligation add_dissipation(const Colligation &c, const MatrixField &J);

/// Dense generator restricted to ker C.
struct RestrictedGenerator
{
  Eigen::MatrixXd Z;   // ker C basis, Z^T M_X Z = I
  Eigen::MatrixXd Ar;  // Z^T M_X L_p Z
  Eigen::MatrixXd MA;  // M_X A_d with A_d = Pi L_p Pi
};

RestrictedGenerator restricted_generator(const Colligation &c, const ConstraintSet &cs);

/// max |M_X A_d + (M_X A_d)^T| for the fully clamped generator.
double full_clamp_skewness(const Colligation &c);

struct GeneratorReport
{
  double max_sym_eig = 0.0;  // of sym(M_X A_d)
  double scale = 0.0;        // max |M_X A_d|
  bool dissipative = false;
  double skew_residual = 0.0;
  bool skew_ok = false;
  std::vector<double> exp_norms;  // ||exp(dt A_d)||_X for dt in {0.1, 1}
  bool contraction = false;
  bool pass = false;
};

/// Dense checks on small grids: dissipativity under the condition, skewness of
/// the full clamp, and contractivity of the restricted exponential.
GeneratorReport generator_check(const Colligation &c, const BoundaryConditionSpec &spec);

}  // namespace phbc

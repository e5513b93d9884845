// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Built-in systems: wave equation, Maxwell equations, Mindlin plate and a 1D
// two-component system whose boundary triple shows that a restriction with
// zero traces is not the adjoint one expects.
//
// Physical parameters are constants by default. Field overrides may be given
// as evaluators; the Hamiltonian bounds then have to be supplied explicitly.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phbc/algebra.hpp"
#include "phbc/bc.hpp"
#include "phbc/system.hpp"

namespace phbc
{

using ScalarField = std::function<double(const Point &)>;

struct DensityBounds
{
  double c = 0.0;
  double C = 0.0;
};

struct ExampleSystem
{
  std::string name;
  MatrixTupled tuple;
  Eigen::MatrixXd P0;
  HamiltonianDensity H;
  EntryMatrixField T;  // empty: identity
  EntryMatrixField R;  // empty: identity
  MatrixField J;       // empty: no internal dissipation
  std::vector<std::string> state_labels;
  std::vector<std::string> costate_labels;
  std::vector<std::string> input_labels;   // per entry coordinate, G side
  std::vector<std::string> output_labels;  // per entry coordinate, K side

  StructureMatricesd structure() const { return build_block_tuple(tuple, P0); }

  /// Impedance-form colligation with J added when present.
  Colligation colligation(const BoxGrid &grid, const BoundarySplitting &split) const;
};

struct WaveParameters
{
  double rho = 1.0;
  Eigen::MatrixXd young;  // n x n SPD, empty: identity
  ScalarField rho_field;
  MatrixField young_field;
  std::optional<DensityBounds> bounds;
};

ExampleSystem wave_system(int n, const WaveParameters &p = {});

struct MaxwellParameters
{
  double eps = 1.0;
  double mu = 1.0;
  double g = 0.0;
  double r = 1.0;
  ScalarField eps_field;
  ScalarField mu_field;
  ScalarField g_field;
  ScalarField r_field;
  std::optional<DensityBounds> bounds;
};

ExampleSystem maxwell_system(const MaxwellParameters &p = {});

struct MindlinParameters
{
  double rho = 1.0;
  double h = 1.0;
  Eigen::MatrixXd Db;  // 3 x 3 SPD, empty: identity
  Eigen::MatrixXd Ds;  // 2 x 2 SPD, empty: identity
  ScalarField rho_field;
  ScalarField h_field;
  MatrixField Db_field;
  MatrixField Ds_field;
  std::optional<DensityBounds> bounds;
};

MatrixTupled mindlin_tuple();
Eigen::MatrixXd mindlin_P0();

/// Per-entry rotation [[1,0,0],[0,nu1,nu2],[0,-nu2,nu1]].
Eigen::MatrixXd mindlin_rotation(const Eigen::VectorXd &nu);

ExampleSystem mindlin_system(const MindlinParameters &p = {});

ExampleSystem appendix_counterexample();

struct AppendixReport
{
  int N = 0;
  double green_residual = 0.0;  // worst over the random pairs
  int f_rank = 0;               // rank of the F rows on the restricted space
  double angle_correct = 0.0;   // adjoint space vs the swapped conditions
  double angle_naive = 0.0;     // adjoint space vs all traces zero
  bool pass = false;
};

/// Discrete checks of the 1D system on N nodes with `pairs` random field pairs.
AppendixReport appendix_regression(int N = 33, int pairs = 20, unsigned seed = 7);

/// Largest principal angle between the column spaces of A and B (pi/2 if the
/// dimensions differ).
double max_principal_angle(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B);

/// Orthonormal basis of ker A (SVD, rank tolerance 1e-12 sigma_max).
Eigen::MatrixXd null_space(const Eigen::MatrixXd &A);

}  // namespace phbc

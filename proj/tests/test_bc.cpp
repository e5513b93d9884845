// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "helpers.hpp"
#include "phbc/bc.hpp"
#include "phbc/examples.hpp"

using namespace phbc;

namespace
{

BoundarySplitting all_controlled(const BoxGrid &grid)
{
  return BoundarySplitting::uniform(boundary_geometry(grid), BoundaryPart::Gamma1);
}

// Random matrix that is symmetric positive definite in the boundary Gram
// inner product: M = gram^{-1} S with S SPD.
Eigen::MatrixXd gram_spd(std::mt19937_64 &rng, const Eigen::VectorXd &gram)
{
  const auto b = gram.size();
  return gram.cwiseInverse().asDiagonal() * test::random_spd(rng, b, 0.1);
}

}  // namespace

TEST_CASE("wave ports pair velocity with normal stress")
{
  const BoxGrid grid({5, 4}, {0, 0}, {1, 2});
  const ExampleSystem wave = wave_system(2);
  const auto tr = assemble_traces(wave.tuple, grid, all_controlled(grid));
  const BoundaryPorts ports = boundary_ports(tr, wave.H, grid);
  CHECK(ports.b() == static_cast<int>(tr.geometry.size()));
  // Gram is half the transverse weight, so it sums to half the perimeter.
  CHECK(ports.gram.sum() == doctest::Approx(3.0));

  std::mt19937_64 rng(31);
  const Eigen::VectorXd x = test::randn(rng, grid.num_nodes() * 3);
  // Oracle: sum over boundary entries of w * v * (nu . sigma) from node values.
  double oracle = 0.0;
  for (const auto &e : tr.geometry.entries)
  {
    const Eigen::Vector3d xn = x.segment(e.node * 3, 3);
    oracle += e.weight * xn(0) * (e.normal(0) * xn(1) + e.normal(1) * xn(2));
  }
  const Eigen::VectorXd G = ports.G * x;
  const Eigen::VectorXd K = ports.K * x;
  CHECK(2.0 * G.dot(ports.gram.asDiagonal() * K) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("Maxwell ports keep two tangential coordinates per entry")
{
  const BoxGrid grid = BoxGrid::unit({3, 3, 3});
  const ExampleSystem mx = maxwell_system();
  const auto tr = assemble_traces(mx.tuple, grid, all_controlled(grid));
  const BoundaryPorts ports = boundary_ports(tr, mx.H, grid);
  CHECK(ports.b() == 2 * static_cast<int>(tr.geometry.size()));
  for (const auto &pe : ports.entries)
  {
    CHECK(pe.rank == 2);
  }
}

TEST_CASE("Mindlin rotation leaves the pairing unchanged")
{
  const BoxGrid grid = BoxGrid::unit({5, 5});
  const ExampleSystem ms = mindlin_system();
  const auto tr = assemble_traces(ms.tuple, grid, all_controlled(grid));
  const BoundaryPorts plain = boundary_ports(tr, ms.H, grid);
  const BoundaryPorts rotated = boundary_ports(tr, ms.H, grid, ms.T);
  std::mt19937_64 rng(32);
  const Eigen::VectorXd x = test::randn(rng, grid.num_nodes() * 8);
  const double a = (plain.G * x).dot(plain.gram.asDiagonal() * (plain.K * x));
  const double b = (rotated.G * x).dot(rotated.gram.asDiagonal() * (rotated.K * x));
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
  CHECK((Eigen::MatrixXd(plain.G) - Eigen::MatrixXd(rotated.G)).norm() > 0.1);
}

TEST_CASE("a transform that mixes range and kernel is rejected")
{
  const BoxGrid grid = BoxGrid::unit({3, 3, 3});
  const ExampleSystem mx = maxwell_system();
  const auto tr = assemble_traces(mx.tuple, grid, all_controlled(grid));
  const EntryMatrixField bad = [](const FaceNodeEntry &, const Point &) -> Eigen::MatrixXd {
    Eigen::MatrixXd T = Eigen::MatrixXd::Identity(3, 3);
    T(0, 1) = 1.0;
    T(1, 0) = 0.3;
    T(2, 0) = 0.7;
    return T;
  };
  CHECK_THROWS_AS(boundary_ports(tr, mx.H, grid, bad), DimensionMismatch);
}

TEST_CASE("contraction conditions on textbook cases")
{
  const int b = 4;
  const Eigen::VectorXd gram = Eigen::VectorXd::LinSpaced(b, 0.5, 2.0);
  std::mt19937_64 rng(33);

  auto rep = check_contraction_conditions(impedance_condition(gram_spd(rng, gram)), gram);
  CHECK(rep.verdict);

  rep = check_contraction_conditions(impedance_condition(-Eigen::MatrixXd::Identity(b, b)), gram);
  CHECK_FALSE(rep.injective);
  CHECK_FALSE(rep.inequality_ok);
  CHECK_FALSE(rep.verdict);

  CHECK(check_contraction_conditions(clamp_condition(b), gram).verdict);
  CHECK(check_contraction_conditions(free_condition(b), gram).verdict);

  // Anti-dissipative: W2 = -M with M SPD in the Gram inner product.
  rep = check_contraction_conditions(impedance_condition(-0.5 * gram_spd(rng, gram)), gram);
  CHECK_FALSE(rep.inequality_ok);
}

TEST_CASE("relation dissipativity against explicit graphs")
{
  const int b = 5;
  std::mt19937_64 rng(34);
  const Eigen::VectorXd gram = test::randn(rng, b).cwiseAbs().array() + 0.5;
  const Eigen::MatrixXd M = gram_spd(rng, gram);

  // ker [I M] = {(-M p, p)}.
  DissipativeRelation graph;
  graph.gram = gram;
  graph.basis.resize(2 * b, b);
  graph.basis << -M, Eigen::MatrixXd::Identity(b, b);
  const RelationReport direct = relation_dissipativity(graph);
  CHECK(direct.dissipative);
  CHECK(direct.maximal);

  const RelationReport via_kernel =
      relation_dissipativity(kernel_relation(Eigen::MatrixXd::Identity(b, b), M, gram));
  CHECK(via_kernel.dimension == b);
  CHECK(via_kernel.maximal);

  // Too few rows leave a relation of dimension > b, which cannot be dissipative.
  const Eigen::MatrixXd V1 = Eigen::MatrixXd::Identity(b, b).topRows(b - 1);
  const Eigen::MatrixXd V2 = M.topRows(b - 1);
  const RelationReport big = relation_dissipativity(kernel_relation(V1, V2, gram));
  CHECK(big.dimension == b + 1);
  CHECK_FALSE(big.dissipative);

  // Graph of +I is accretive.
  graph.basis << Eigen::MatrixXd::Identity(b, b), Eigen::MatrixXd::Identity(b, b);
  CHECK_FALSE(relation_dissipativity(graph).dissipative);
}

TEST_CASE("V-form conditions follow the relation")
{
  const int b = 6;
  std::mt19937_64 rng(35);
  const Eigen::VectorXd gram = Eigen::VectorXd::Constant(b, 0.25);
  BoundaryConditionSpec good = impedance_condition(gram_spd(rng, gram));
  good.form = ConditionForm::V;
  const auto g = check_key_theorem_conditions(good, gram);
  CHECK(g.verdict);
  CHECK(g.relation.maximal);
  BoundaryConditionSpec bad = impedance_condition(-Eigen::MatrixXd::Identity(b, b));
  bad.form = ConditionForm::V;
  CHECK_FALSE(check_key_theorem_conditions(bad, gram).verdict);
}

TEST_CASE("dependent rows are pruned with a warning")
{
  SparseMatrix C(4, 5);
  C.insert(0, 0) = 1.0;
  C.insert(1, 0) = 2.0;  // multiple of row 0
  C.insert(2, 3) = 1.0;
  C.insert(2, 4) = 1.0;
  C.insert(3, 4) = -1.0;
  SparseMatrix inj(4, 2);
  inj.insert(2, 0) = 1.0;
  inj.insert(3, 1) = 1.0;
  const ConstraintSet cs = prune_rows(C, inj, 2);
  CHECK(cs.rows() == 3);
  CHECK(cs.pruned_rows == 1);
  CHECK(cs.clamp_rows == 1);
  CHECK(cs.warnings.size() == 1);
  CHECK(cs.inputs() == 2);
}

TEST_CASE("constraint kernel basis is mass-orthonormal")
{
  const BoxGrid grid = BoxGrid::unit({5, 5});
  const ExampleSystem wave = wave_system(2);
  const FaceNodeSet geo = boundary_geometry(grid);
  const auto split = BoundarySplitting::from_faces(
      geo, {BoundaryPart::Gamma0, BoundaryPart::Gamma1, BoundaryPart::Gamma0, BoundaryPart::Gamma1});
  const auto tr = assemble_traces(wave.tuple, grid, split);
  const BoundaryPorts ports = boundary_ports(tr, wave.H, grid);
  const ConstraintSet cs = constraint_matrix(clamp_condition(ports.b()), ports);
  CHECK(cs.pruned_rows > 0);  // corners appear on two faces
  const SparseMatrix M = quadrature_mass(grid, 3);
  const Eigen::MatrixXd Z = kernel_basis(cs.C, M);
  CHECK((cs.C * Z).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Z.transpose() * M * Z - Eigen::MatrixXd::Identity(Z.cols(), Z.cols())).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(Z.cols() == grid.num_nodes() * 3 - cs.rows());

  std::mt19937_64 rng(36);
  const Eigen::VectorXd x = test::randn(rng, grid.num_nodes() * 3);
  const Eigen::VectorXd p = project_onto_kernel(cs.C, M, x);
  CHECK((cs.C * p).cwiseAbs().maxCoeff() < 1e-12);
  // x - p is M-orthogonal to the kernel.
  CHECK((Z.transpose() * (M * (x - p))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("condition shape errors")
{
  BoundaryConditionSpec s = clamp_condition(3);
  s.second = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(validate_spec(s), DimensionMismatch);
  CHECK_THROWS_AS(scattering_condition(-Eigen::MatrixXd::Identity(2, 2)), NotSPD);
}

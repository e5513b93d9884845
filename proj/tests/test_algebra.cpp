// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "helpers.hpp"
#include "phbc/algebra.hpp"

using namespace phbc;

TEST_CASE("div/grad tuple rows are unit vectors")
{
  const auto L = div_grad_tuple(3);
  CHECK(L.n() == 3);
  CHECK(L.m1() == 1);
  CHECK(L.m2() == 3);
  Eigen::MatrixXd L1(1, 3);
  L1 << 1, 0, 0;
  CHECK(L[0] == L1);
}

TEST_CASE("rot tuple realizes the cross product")
{
  const auto L = rot_tuple();
  std::mt19937_64 rng(3);
  const Eigen::Vector3d nu = test::randn(rng, 3);
  const Eigen::Vector3d f = test::randn(rng, 3);
  const Eigen::VectorXd got = l_nu(L, nu) * f;
  CHECK((got - Eigen::VectorXd(nu.cross(f))).norm() < 1e-14);
}

TEST_CASE("block tuple is symmetric with L in the corner")
{
  std::mt19937_64 rng(1);
  const MatrixTupled L({test::randn(rng, 2, 3), test::randn(rng, 2, 3)});
  const StructureMatricesd S = build_block_tuple(L, Eigen::MatrixXd(Eigen::MatrixXd::Zero(5, 5)));
  REQUIRE(S.n() == 2);
  for (int i = 0; i < 2; ++i)
  {
    CHECK(S.P[i] == S.P[i].transpose());
    CHECK(S.P[i].topRightCorner(2, 3) == L[i]);
    CHECK(S.P[i].topLeftCorner(2, 2).isZero());
    CHECK(S.P[i].bottomRightCorner(3, 3).isZero());
  }
}

TEST_CASE("non-skew P0 is rejected")
{
  const auto L = div_grad_tuple(2);
  Eigen::MatrixXd P0 = Eigen::MatrixXd::Zero(3, 3);
  P0(0, 1) = 1.0;
  P0(1, 0) = -1.0 + 1e-9;
  CHECK_THROWS_AS(build_block_tuple(L, P0, 1e-14), NotSkew);
  P0(1, 0) = -1.0;
  CHECK_NOTHROW(build_block_tuple(L, P0, 1e-14));
}

TEST_CASE("tuple shape mismatch throws")
{
  CHECK_THROWS_AS(MatrixTupled({Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Zero(2, 2)}), DimensionMismatch);
  CHECK_THROWS_AS(l_nu(div_grad_tuple(2), Eigen::Vector3d(1, 0, 0)), DimensionMismatch);
}

TEST_CASE("Hamiltonian validation checks the claimed bounds")
{
  Eigen::MatrixXd H(2, 2);
  H << 2, 1, 1, 2;  // eigenvalues 1 and 3
  const std::vector<Point> pts = {Point::Zero(2), Point::Ones(2)};
  CHECK(validate_hamiltonian(HamiltonianDensity::constant(H, 1.0, 3.0), pts).pass);
  CHECK_FALSE(validate_hamiltonian(HamiltonianDensity::constant(H, 1.5, 3.0), pts).pass);
  const auto rep = validate_hamiltonian(HamiltonianDensity::constant(H), pts);
  CHECK(rep.min_eig == doctest::Approx(1.0));
  CHECK(rep.max_eig == doctest::Approx(3.0));

  Eigen::MatrixXd A = H;
  A(0, 1) += 1e-6;
  CHECK_THROWS_AS(validate_hamiltonian(HamiltonianDensity::constant(A, 1.0, 3.0), pts), NotSymmetric);
}

// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Pointwise algebra of first-order port-Hamiltonian operators: the matrix
// tuple L = (L_1, ..., L_n) defining L_d = sum_i d_i L_i, its conormal symbol
// L_nu = sum_i nu_i L_i, the block tuple P_i = [[0, L_i], [L_i^T, 0]] and the
// Hamiltonian density H(zeta).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phbc/errors.hpp"

namespace phbc
{

using Point = Eigen::VectorXd;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Ordered tuple of n real m1 x m2 matrices.
template <typename Scalar>
class MatrixTuple
{
public:
  using Matrix = DenseMatrix<Scalar>;

  MatrixTuple() = default;

  explicit MatrixTuple(std::vector<Matrix> matrices) : matrices_(std::move(matrices))
  {
    if (matrices_.empty())
    {
      throw DimensionMismatch("matrix tuple needs at least one matrix");
    }
    const auto r = matrices_.front().rows();
    const auto c = matrices_.front().cols();
    if (r < 1 || c < 1)
    {
      throw DimensionMismatch("matrix tuple entries must be at least 1x1");
    }
    for (const auto &Li : matrices_)
    {
      if (Li.rows() != r || Li.cols() != c)
      {
        throw DimensionMismatch("matrix tuple entries differ in shape");
      }
    }
  }

  int n() const { return static_cast<int>(matrices_.size()); }
  int m1() const { return static_cast<int>(matrices_.front().rows()); }
  int m2() const { return static_cast<int>(matrices_.front().cols()); }

  const Matrix &operator[](int i) const { return matrices_[static_cast<std::size_t>(i)]; }
  const std::vector<Matrix> &matrices() const { return matrices_; }

  /// Elementwise-transposed tuple L^H (real case).
  MatrixTuple adjoint() const
  {
    std::vector<Matrix> t;
    t.reserve(matrices_.size());
    for (const auto &Li : matrices_)
    {
      t.push_back(Li.transpose());
    }
    return MatrixTuple(std::move(t));
  }

private:
  std::vector<Matrix> matrices_;
};

template <typename Scalar>
struct StructureMatrices
{
  std::vector<DenseMatrix<Scalar>> P;  // symmetric m x m blocks
  DenseMatrix<Scalar> P0;              // skew-symmetric m x m
  int m1 = 0;
  int m2 = 0;

  int n() const { return static_cast<int>(P.size()); }
  int m() const { return m1 + m2; }
};

using MatrixTupled = MatrixTuple<double>;
using StructureMatricesd = StructureMatrices<double>;

/// Conormal symbol L_nu = sum_i nu_i L_i.
template <typename Scalar, typename Derived>
DenseMatrix<Scalar> l_nu(const MatrixTuple<Scalar> &L, const Eigen::MatrixBase<Derived> &nu)
{
  if (nu.size() != L.n())
  {
    throw DimensionMismatch("normal has length " + std::to_string(nu.size()) +
                            ", tuple has n = " + std::to_string(L.n()));
  }
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(L.m1(), L.m2());
  for (int i = 0; i < L.n(); ++i)
  {
    out += static_cast<Scalar>(nu(i)) * L[i];
  }
  return out;
}

/// [[0, A], [A^T, 0]] for an m1 x m2 block A.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> block_symmetric(const Eigen::MatrixBase<Derived> &A)
{
  using Scalar = typename Derived::Scalar;
  const auto m1 = A.rows();
  const auto m2 = A.cols();
  DenseMatrix<Scalar> P = DenseMatrix<Scalar>::Zero(m1 + m2, m1 + m2);
  P.topRightCorner(m1, m2) = A;
  P.bottomLeftCorner(m2, m1) = A.transpose();
  return P;
}

/// Builds P_i = [[0, L_i], [L_i^T, 0]] and validates P0 skew-symmetry.
/// `skew_tolerance` is relative to max(1, max|P0|); zero means exact.
template <typename Scalar>
StructureMatrices<Scalar> build_block_tuple(const MatrixTuple<Scalar> &L,
                                            const DenseMatrix<Scalar> &P0,
                                            Scalar skew_tolerance = Scalar(0))
{
  const int m = L.m1() + L.m2();
  if (P0.rows() != m || P0.cols() != m)
  {
    throw DimensionMismatch("P0 must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  const Scalar scale = std::max(Scalar(1), P0.cwiseAbs().maxCoeff());
  const Scalar asym = (P0 + P0.transpose()).cwiseAbs().maxCoeff();
  if (asym > skew_tolerance * scale)
  {
    throw NotSkew("max|P0 + P0^T| = " + std::to_string(static_cast<double>(asym)));
  }
  StructureMatrices<Scalar> S;
  S.m1 = L.m1();
  S.m2 = L.m2();
  S.P0 = P0;
  S.P.reserve(static_cast<std::size_t>(L.n()));
  for (const auto &Li : L.matrices())
  {
    S.P.push_back(block_symmetric(Li));
  }
  return S;
}

/// Tuple whose L_d is the divergence and L_d^H the gradient: L_i = e_i^T.
template <typename Scalar = double>
MatrixTuple<Scalar> div_grad_tuple(int n)
{
  if (n < 1)
  {
    throw DimensionMismatch("div/grad tuple needs n >= 1");
  }
  std::vector<DenseMatrix<Scalar>> Ls;
  for (int i = 0; i < n; ++i)
  {
    DenseMatrix<Scalar> Li = DenseMatrix<Scalar>::Zero(1, n);
    Li(0, i) = Scalar(1);
    Ls.push_back(std::move(Li));
  }
  return MatrixTuple<Scalar>(std::move(Ls));
}

/// Tuple whose L_d is the curl; L_nu f = nu x f.
template <typename Scalar = double>
MatrixTuple<Scalar> rot_tuple()
{
  DenseMatrix<Scalar> L1(3, 3), L2(3, 3), L3(3, 3);
  L1 << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  L2 << 0, 0, 1, 0, 0, 0, -1, 0, 0;
  L3 << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  return MatrixTuple<Scalar>({L1, L2, L3});
}

// --- Hamiltonian density -----------------------------------------------------

using MatrixField = std::function<Eigen::MatrixXd(const Point &)>;

/// Pointwise symmetric H(zeta) with claimed uniform bounds c I <= H <= C I.
struct HamiltonianDensity
{
  int m = 0;
  MatrixField evaluator;
  double c = 1.0;
  double C = 1.0;

  Eigen::MatrixXd operator()(const Point &zeta) const { return evaluator(zeta); }

  static HamiltonianDensity constant(const Eigen::MatrixXd &H, double c, double C)
  {
    HamiltonianDensity h;
    h.m = static_cast<int>(H.rows());
    h.evaluator = [H](const Point &) { return H; };
    h.c = c;
    h.C = C;
    return h;
  }

  /// Constant density with bounds taken from its extreme eigenvalues.
  static HamiltonianDensity constant(const Eigen::MatrixXd &H)
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return constant(H, es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff());
  }
};

struct PointEigenRange
{
  double min_eig = 0.0;
  double max_eig = 0.0;
};

struct ValidationReport
{
  std::vector<PointEigenRange> points;
  double min_eig = 0.0;
  double max_eig = 0.0;
  bool pass = false;
};

/// Samples H at each point and checks c I <= H <= C I to 1e-12 C.
inline ValidationReport validate_hamiltonian(const HamiltonianDensity &H,
                                             const std::vector<Point> &sample_points)
{
  if (sample_points.empty())
  {
    throw DimensionMismatch("validate_hamiltonian needs at least one sample point");
  }
  if (!(H.c > 0.0) || H.C < H.c)
  {
    throw NotSPD("bounds must satisfy 0 < c <= C");
  }
  ValidationReport rep;
  rep.min_eig = std::numeric_limits<double>::infinity();
  rep.max_eig = -std::numeric_limits<double>::infinity();
  for (const auto &zeta : sample_points)
  {
    const Eigen::MatrixXd Hz = H(zeta);
    if (Hz.rows() != H.m || Hz.cols() != H.m)
    {
      throw DimensionMismatch("H(zeta) has wrong shape");
    }
    const double scale = Hz.cwiseAbs().maxCoeff();
    if ((Hz - Hz.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    {
      throw NotSymmetric("H(zeta) is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hz, Eigen::EigenvaluesOnly);
    PointEigenRange r{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
    rep.min_eig = std::min(rep.min_eig, r.min_eig);
    rep.max_eig = std::max(rep.max_eig, r.max_eig);
    rep.points.push_back(r);
  }
  const double tol = 1e-12 * H.C;
  rep.pass = rep.min_eig >= H.c - tol && rep.max_eig <= H.C + tol;
  return rep;
}

}  // namespace phbc

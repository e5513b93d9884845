// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Finite-dimensional quasi Gelfand triples.
//
// The pivot space is R^N with the dot product. The plus space is spanned by the
// columns of a basis B (N x k, full column rank) and carries the inner product
// <Bc, Bd>_+ = c^T G d with G symmetric positive definite. The minus norm is
// the dual norm sup_{f in D+} |<g, f>_0| / ||f||_+ = ||G^{-1/2} B^T g||.
//
// In finite dimensions every closability condition holds automatically; the
// only way to get D- strictly smaller than the pivot is a basis that does not
// span R^N, and then functionals with a component outside ran(B) are not
// separated by the pairing. dual_norm reports +inf for those.

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "phbc/algebra.hpp"

namespace phbc
{

template <typename Scalar>
class FiniteQuasiTriple
{
public:
  using Matrix = DenseMatrix<Scalar>;
  using Vector = DenseVector<Scalar>;

  FiniteQuasiTriple(Matrix basis, Matrix gram) : basis_(std::move(basis)), gram_(std::move(gram))
  {
    if (gram_.rows() != gram_.cols() || gram_.rows() != basis_.cols())
    {
      throw DimensionMismatch("Gram matrix must be k x k for an N x k basis");
    }
    if (basis_.cols() > basis_.rows())
    {
      throw DimensionMismatch("basis has more columns than the pivot dimension");
    }
    const Scalar asym = (gram_ - gram_.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-12) * std::max(Scalar(1), gram_.cwiseAbs().maxCoeff()))
    {
      throw NotSymmetric("plus Gram matrix is not symmetric");
    }
    llt_.compute(gram_);
    if (llt_.info() != Eigen::Success)
    {
      throw NotSPD("plus Gram matrix is not positive definite");
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(basis_);
    qr.setThreshold(Scalar(1e-12));
    if (qr.rank() != basis_.cols())
    {
      throw DimensionMismatch("basis of D+ must have full column rank");
    }
    spans_pivot_ = basis_.cols() == basis_.rows();
  }

  /// Full-space triple: B = I, plus Gram G.
  static FiniteQuasiTriple full(const Matrix &gram)
  {
    return FiniteQuasiTriple(Matrix::Identity(gram.rows(), gram.rows()), gram);
  }

  int N() const { return static_cast<int>(basis_.rows()); }
  int k() const { return static_cast<int>(basis_.cols()); }
  const Matrix &basis() const { return basis_; }
  const Matrix &gram() const { return gram_; }
  bool spans_pivot() const { return spans_pivot_; }

  /// G^{-1} y.
  Vector solve_gram(const Vector &y) const { return llt_.solve(y); }

  /// ||Bc||_+ from plus coordinates c.
  Scalar plus_norm(const Vector &c) const { return std::sqrt(c.dot(gram_ * c)); }

  /// Plus coordinates of f in D+ (least squares; f must lie in ran B).
  Vector coordinates(const Vector &f) const { return basis_.colPivHouseholderQr().solve(f); }

private:
  Matrix basis_;
  Matrix gram_;
  Eigen::LLT<Matrix> llt_;
  bool spans_pivot_ = true;
};

using FiniteQuasiTripled = FiniteQuasiTriple<double>;

template <typename Scalar>
Scalar dual_norm(const FiniteQuasiTriple<Scalar> &t, const DenseVector<Scalar> &g)
{
  if (g.size() != t.N())
  {
    throw DimensionMismatch("functional has wrong length");
  }
  if (!t.spans_pivot())
  {
    const auto &B = t.basis();
    const DenseVector<Scalar> proj = B * B.colPivHouseholderQr().solve(g);
    if ((g - proj).norm() > Scalar(1e-12) * g.norm())
    {
      return std::numeric_limits<Scalar>::infinity();
    }
  }
  const DenseVector<Scalar> a = t.basis().transpose() * g;
  return std::sqrt(std::max(Scalar(0), a.dot(t.solve_gram(a))));
}

/// Psi g in plus coordinates: the solution of <Psi g, f>_+ = <g, f>_0 for all f in D+.
template <typename Scalar>
DenseVector<Scalar> duality_map(const FiniteQuasiTriple<Scalar> &t, const DenseVector<Scalar> &g)
{
  if (std::isinf(dual_norm(t, g)))
  {
    throw InfiniteNorm("functional is not in D-");
  }
  return t.solve_gram(t.basis().transpose() * g);
}

template <typename Scalar>
struct TransformedTriple
{
  FiniteQuasiTriple<Scalar> triple;
  Scalar condition = Scalar(1);
};

/// Image of the triple under an invertible T: D+ -> T D+, ||f||_{Y+} = ||T^{-1} f||_+.
/// In plus coordinates the Gram is unchanged and the basis becomes T B.
template <typename Scalar>
TransformedTriple<Scalar> transform_triple(const FiniteQuasiTriple<Scalar> &t,
                                           const DenseMatrix<Scalar> &T)
{
  if (T.rows() != t.N() || T.cols() != t.N())
  {
    throw DimensionMismatch("transform must be N x N");
  }
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(T);
  const auto &s = svd.singularValues();
  const Scalar smax = s(0);
  const Scalar smin = s(s.size() - 1);
  if (!(smin >= Scalar(1e-12) * smax) || smax == Scalar(0))
  {
    throw Singular("transform is numerically singular");
  }
  return {FiniteQuasiTriple<Scalar>(T * t.basis(), t.gram()), smax / smin};
}

/// Triple with the roles of plus and minus interchanged. Needs D+ = R^N.
template <typename Scalar>
FiniteQuasiTriple<Scalar> interchange(const FiniteQuasiTriple<Scalar> &t)
{
  if (!t.spans_pivot())
  {
    throw DimensionMismatch("interchange needs a basis spanning the pivot space");
  }
  const auto &B = t.basis();
  DenseMatrix<Scalar> Ginv = t.gram().llt().solve(DenseMatrix<Scalar>::Identity(t.k(), t.k()));
  DenseMatrix<Scalar> minus_gram = B * Ginv * B.transpose();
  minus_gram = (minus_gram + minus_gram.transpose()) / Scalar(2);
  return FiniteQuasiTriple<Scalar>::full(minus_gram);
}

struct VonNeumannReport
{
  double asym_TtT = 0.0;   // max|T^T T - (T^T T)^T|
  double asym_TTt = 0.0;
  double min_eig_left = 0.0;   // of I + T^T T
  double min_eig_right = 0.0;  // of I + T T^T
  double inverse_asym = 0.0;   // worst asymmetry of the two inverses
  bool pass = false;
};

/// T^T T and T T^T are self-adjoint and I + T^T T, I + T T^T are boundedly
/// invertible with self-adjoint inverses.
template <typename Scalar>
VonNeumannReport von_neumann_check(const DenseMatrix<Scalar> &T)
{
  using Matrix = DenseMatrix<Scalar>;
  VonNeumannReport rep;
  const Matrix TtT = T.transpose() * T;
  const Matrix TTt = T * T.transpose();
  rep.asym_TtT = static_cast<double>((TtT - TtT.transpose()).cwiseAbs().maxCoeff());
  rep.asym_TTt = static_cast<double>((TTt - TTt.transpose()).cwiseAbs().maxCoeff());
  const Matrix left = Matrix::Identity(TtT.rows(), TtT.cols()) + TtT;
  const Matrix right = Matrix::Identity(TTt.rows(), TTt.cols()) + TTt;
  Eigen::SelfAdjointEigenSolver<Matrix> esl(left, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> esr(right, Eigen::EigenvaluesOnly);
  rep.min_eig_left = static_cast<double>(esl.eigenvalues().minCoeff());
  rep.min_eig_right = static_cast<double>(esr.eigenvalues().minCoeff());
  const Matrix inv_left = left.partialPivLu().inverse();
  const Matrix inv_right = right.partialPivLu().inverse();
  rep.inverse_asym = static_cast<double>(std::max((inv_left - inv_left.transpose()).cwiseAbs().maxCoeff(),
                                                  (inv_right - inv_right.transpose()).cwiseAbs().maxCoeff()));
  const double scale = std::max(1.0, static_cast<double>(TtT.cwiseAbs().maxCoeff()));
  rep.pass = rep.asym_TtT <= 1e-12 * scale && rep.asym_TTt <= 1e-12 * scale &&
             rep.min_eig_left >= 1.0 - 1e-12 * scale && rep.min_eig_right >= 1.0 - 1e-12 * scale &&
             rep.inverse_asym <= 1e-10;
  return rep;
}

}  // namespace phbc

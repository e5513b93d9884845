// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include <Eigen/Dense>

#include "phbc/algebra.hpp"
#include "phbc/gelfand.hpp"
#include "phbc/sbpgrid.hpp"

namespace phbc::test
{

inline Eigen::VectorXd randn(std::mt19937_64 &rng, Eigen::Index n)
{
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = nd(rng);
  }
  return v;
}

inline Eigen::MatrixXd randn(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c)
{
  return randn(rng, r * c).reshaped(r, c);
}

inline Eigen::MatrixXd random_spd(std::mt19937_64 &rng, Eigen::Index n, double shift = 1.0)
{
  const Eigen::MatrixXd A = randn(rng, n, n);
  return A * A.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

// Boundary form computed axis by axis from the grid multi-indices:
// sum over faces of the transverse trapezoid weight times +-(L_i f) . g.
inline double boundary_form_by_axis(const MatrixTupled &L, const BoxGrid &grid, const Eigen::VectorXd &f,
                             const Eigen::VectorXd &g)
{
  const int m1 = L.m1();
  const int m2 = L.m2();
  double sum = 0.0;
  for (int node = 0; node < grid.num_nodes(); ++node)
  {
    const auto idx = grid.multi_index(node);
    for (int axis = 0; axis < grid.n(); ++axis)
    {
      const int i = idx[static_cast<std::size_t>(axis)];
      const int sign = i == 0 ? -1 : (i == grid.count(axis) - 1 ? 1 : 0);
      if (sign == 0)
      {
        continue;
      }
      double w = 1.0;
      for (int j = 0; j < grid.n(); ++j)
      {
        if (j == axis)
        {
          continue;
        }
        const int ij = idx[static_cast<std::size_t>(j)];
        const bool end = ij == 0 || ij == grid.count(j) - 1;
        w *= (end ? 0.5 : 1.0) * grid.spacing(j);
      }
      sum += sign * w * (L[axis] * f.segment(node * m2, m2)).dot(g.segment(node * m1, m1));
    }
  }
  return sum;
}

// Sup of |<g, Bc>| / ||Bc||_+ over the columns of a dense sample plus a local
// refinement; independent of the closed formula.
inline double sampled_dual_norm(const FiniteQuasiTripled &t, const Eigen::VectorXd &g, std::mt19937_64 &rng,
                                int samples = 20000, int refinements = 30000)
{
  const Eigen::VectorXd a = t.basis().transpose() * g;
  auto ratio = [&](const Eigen::VectorXd &c) { return std::abs(a.dot(c)) / std::sqrt(c.dot(t.gram() * c)); };
  Eigen::VectorXd best = test::randn(rng, t.k());
  double val = ratio(best);
  for (int i = 0; i < samples; ++i)
  {
    const Eigen::VectorXd c = test::randn(rng, t.k());
    if (ratio(c) > val)
    {
      val = ratio(c);
      best = c;
    }
  }
  double radius = 0.5 * best.norm();
  for (int i = 0; i < refinements; ++i)
  {
    const Eigen::VectorXd c = best + radius * test::randn(rng, t.k()) / std::sqrt(double(t.k()));
    const double r = ratio(c);
    if (r > val)
    {
      val = r;
      best = c;
      radius *= 1.5;
    }
    else
    {
      radius *= 0.98;
    }
    radius = std::max(radius, 1e-9 * best.norm());
  }
  return val;
}

}  // namespace phbc::test

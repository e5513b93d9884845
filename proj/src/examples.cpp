// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/examples.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace phbc
{

Colligation ExampleSystem::colligation(const BoxGrid &grid, const BoundarySplitting &split) const
{
  Colligation c = assemble_colligation(structure(), H, grid, split, T);
  if (J)
  {
    c = add_dissipation(c, J);
  }
  return c;
}

namespace
{

HamiltonianDensity make_density(int m, MatrixField eval, bool has_fields, const std::optional<DensityBounds> &bounds)
{
  if (bounds)
  {
    HamiltonianDensity h;
    h.m = m;
    h.evaluator = std::move(eval);
    h.c = bounds->c;
    h.C = bounds->C;
    return h;
  }
  if (has_fields)
  {
    throw ConfigError("field-valued parameters need explicit Hamiltonian bounds");
  }
  // Constant density: the bounds are its extreme eigenvalues.
  return HamiltonianDensity::constant(eval(Point::Zero(1)));
}

ScalarField or_constant(const ScalarField &f, double v)
{
  if (f)
  {
    return f;
  }
  return [v](const Point &) { return v; };
}

MatrixField or_constant(const MatrixField &f, const Eigen::MatrixXd &v)
{
  if (f)
  {
    return f;
  }
  return [v](const Point &) { return v; };
}

void require_spd(const Eigen::MatrixXd &A, int size, const char *what)
{
  if (A.rows() != size || A.cols() != size)
  {
    throw DimensionMismatch(std::string(what) + " must be " + std::to_string(size) + " x " + std::to_string(size));
  }
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
  {
    throw NotSymmetric(std::string(what) + " is not symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(A).info() != Eigen::Success)
  {
    throw NotSPD(std::string(what) + " is not positive definite");
  }
}

void require_positive(double v, const char *what)
{
  if (!(v > 0.0) || !std::isfinite(v))
  {
    throw NotSPD(std::string(what) + " must be positive");
  }
}

}  // namespace

ExampleSystem wave_system(int n, const WaveParameters &p)
{
  if (n < 1 || n > 3)
  {
    throw DimensionMismatch("wave system supports n = 1, 2, 3");
  }
  require_positive(p.rho, "rho");
  const Eigen::MatrixXd young = p.young.size() == 0 ? Eigen::MatrixXd::Identity(n, n) : p.young;
  require_spd(young, n, "Young tensor");

  ExampleSystem s;
  s.name = "wave";
  s.tuple = div_grad_tuple(n);
  s.P0 = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const ScalarField rho = or_constant(p.rho_field, p.rho);
  const MatrixField T = or_constant(p.young_field, young);
  s.H = make_density(
      n + 1,
      [rho, T, n](const Point &z) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n + 1, n + 1);
        H(0, 0) = 1.0 / rho(z);
        H.bottomRightCorner(n, n) = T(z);
        return H;
      },
      p.rho_field || p.young_field, p.bounds);
  s.state_labels.push_back("rho*dw/dt");
  s.costate_labels.push_back("v");
  for (int i = 0; i < n; ++i)
  {
    s.state_labels.push_back("d" + std::to_string(i + 1) + "w");
    s.costate_labels.push_back("(T grad w)_" + std::to_string(i + 1));
  }
  s.input_labels = {"v"};
  s.output_labels = {"nu.(T grad w)"};
  return s;
}

ExampleSystem maxwell_system(const MaxwellParameters &p)
{
  require_positive(p.eps, "eps");
  require_positive(p.mu, "mu");
  require_positive(p.r, "r");
  if (p.g < 0.0)
  {
    throw NotDissipative("conductivity g must be nonnegative");
  }
  ExampleSystem s;
  s.name = "maxwell";
  s.tuple = rot_tuple();
  s.P0 = Eigen::MatrixXd::Zero(6, 6);
  const ScalarField eps = or_constant(p.eps_field, p.eps);
  const ScalarField mu = or_constant(p.mu_field, p.mu);
  s.H = make_density(
      6,
      [eps, mu](const Point &z) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(6, 6);
        H.topLeftCorner(3, 3).diagonal().setConstant(1.0 / eps(z));
        H.bottomRightCorner(3, 3).diagonal().setConstant(1.0 / mu(z));
        return H;
      },
      p.eps_field || p.mu_field, p.bounds);
  if (p.g_field || p.g != 0.0)
  {
    const ScalarField g = or_constant(p.g_field, p.g);
    s.J = [g](const Point &z) {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, 6);
      J.topLeftCorner(3, 3).diagonal().setConstant(-g(z));
      return J;
    };
  }
  const ScalarField r = or_constant(p.r_field, p.r);
  s.R = [r](const FaceNodeEntry &, const Point &z) -> Eigen::MatrixXd {
    return r(z) * Eigen::MatrixXd::Identity(3, 3);
  };
  s.state_labels = {"D1", "D2", "D3", "B1", "B2", "B3"};
  s.costate_labels = {"E1", "E2", "E3", "H1", "H2", "H3"};
  s.input_labels = {"(nu x E) x nu", "(nu x E) x nu"};
  s.output_labels = {"nu x H", "nu x H"};
  return s;
}

MatrixTupled mindlin_tuple()
{
  Eigen::MatrixXd L1(3, 5), L2(3, 5);
  L1 << 0, 0, 0, 1, 0,
        1, 0, 0, 0, 0,
        0, 0, 1, 0, 0;
  L2 << 0, 0, 0, 0, 1,
        0, 0, 1, 0, 0,
        0, 1, 0, 0, 0;
  return MatrixTupled({L1, L2});
}

Eigen::MatrixXd mindlin_P0()
{
  Eigen::MatrixXd P0 = Eigen::MatrixXd::Zero(8, 8);
  P0(1, 6) = 1.0;
  P0(2, 7) = 1.0;
  P0(6, 1) = -1.0;
  P0(7, 2) = -1.0;
  return P0;
}

Eigen::MatrixXd mindlin_rotation(const Eigen::VectorXd &nu)
{
  if (nu.size() != 2)
  {
    throw DimensionMismatch("Mindlin normals are 2D");
  }
  Eigen::MatrixXd T(3, 3);
  T << 1, 0, 0,
       0, nu(0), nu(1),
       0, -nu(1), nu(0);
  return T;
}

ExampleSystem mindlin_system(const MindlinParameters &p)
{
  require_positive(p.rho, "rho");
  require_positive(p.h, "h");
  const Eigen::MatrixXd Db = p.Db.size() == 0 ? Eigen::MatrixXd::Identity(3, 3) : p.Db;
  const Eigen::MatrixXd Ds = p.Ds.size() == 0 ? Eigen::MatrixXd::Identity(2, 2) : p.Ds;
  require_spd(Db, 3, "D_b");
  require_spd(Ds, 2, "D_s");

  ExampleSystem s;
  s.name = "mindlin";
  s.tuple = mindlin_tuple();
  s.P0 = mindlin_P0();
  const ScalarField rho = or_constant(p.rho_field, p.rho);
  const ScalarField h = or_constant(p.h_field, p.h);
  const MatrixField db = or_constant(p.Db_field, Db);
  const MatrixField ds = or_constant(p.Ds_field, Ds);
  s.H = make_density(
      8,
      [rho, h, db, ds](const Point &z) {
        const double rh = rho(z) * h(z);
        const double hz = h(z);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(8, 8);
        H(0, 0) = 1.0 / rh;
        H(1, 1) = 12.0 / (rh * hz * hz);
        H(2, 2) = H(1, 1);
        H.block(3, 3, 3, 3) = db(z);
        H.block(6, 6, 2, 2) = ds(z);
        return H;
      },
      p.rho_field || p.h_field || p.Db_field || p.Ds_field, p.bounds);
  s.T = [](const FaceNodeEntry &e, const Point &) { return mindlin_rotation(e.normal); };
  s.state_labels = {"rho*h*v", "rho*h^3/12*w1", "rho*h^3/12*w2", "kappa11", "kappa22", "kappa12", "gamma13", "gamma23"};
  s.costate_labels = {"v", "w1", "w2", "M11", "M22", "M12", "Q1", "Q2"};
  s.input_labels = {"v", "w_nu", "w_eta"};
  s.output_labels = {"Q_nu", "M_nunu", "M_nueta"};
  return s;
}

ExampleSystem appendix_counterexample()
{
  ExampleSystem s;
  s.name = "appendix1d";
  s.tuple = MatrixTupled({Eigen::MatrixXd::Ones(1, 1)});
  s.P0 = Eigen::MatrixXd::Zero(2, 2);
  s.H = HamiltonianDensity::constant(Eigen::MatrixXd::Identity(2, 2), 1.0, 1.0);
  s.state_labels = {"f1", "f2"};
  s.costate_labels = {"f1", "f2"};
  s.input_labels = {"f1"};
  s.output_labels = {"nu f2"};
  return s;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd &A)
{
  if (A.rows() == 0)
  {
    return Eigen::MatrixXd::Identity(A.cols(), A.cols());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
  {
    if (s(0) > 0.0 && s(i) > 1e-12 * s(0))
    {
      ++rank;
    }
  }
  return svd.matrixV().rightCols(A.cols() - rank);
}

double max_principal_angle(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B)
{
  const Eigen::MatrixXd Qa = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ() *
                             Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const Eigen::MatrixXd Qb = Eigen::HouseholderQR<Eigen::MatrixXd>(B).householderQ() *
                             Eigen::MatrixXd::Identity(B.rows(), B.cols());
  if (Qa.cols() != Qb.cols())
  {
    return std::numbers::pi / 2.0;
  }
  // Sine of the largest angle is the norm of the part of Qa outside ran Qb.
  const Eigen::MatrixXd outside = Qa - Qb * (Qb.transpose() * Qa);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(outside);
  const double s = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  return std::asin(std::min(1.0, s));
}

AppendixReport appendix_regression(int N, int pairs, unsigned seed)
{
  const ExampleSystem sys = appendix_counterexample();
  const BoxGrid grid = BoxGrid::unit({N});
  const SparseMatrix A = assemble_full_operator(sys.structure(), sys.H, grid);
  const SparseMatrix M = quadrature_mass(grid, 2);
  const int n = 2 * N;
  auto f1 = [](int node) { return 2 * node; };
  auto f2 = [](int node) { return 2 * node + 1; };
  const int last = N - 1;

  AppendixReport rep;
  rep.N = N;

  // (a) Green identity with B1 f = (f1(1), f1(0)), B2 f = (f2(1), -f2(0)).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < pairs; ++k)
  {
    Eigen::VectorXd f(n), g(n);
    for (int i = 0; i < n; ++i)
    {
      f(i) = normal(rng);
      g(i) = normal(rng);
    }
    const double lhs = g.dot(M * (A * f)) + f.dot(M * (A * g));
    const Eigen::Vector2d B1f(f(f1(last)), f(f1(0)));
    const Eigen::Vector2d B2f(f(f2(last)), -f(f2(0)));
    const Eigen::Vector2d B1g(g(f1(last)), g(f1(0)));
    const Eigen::Vector2d B2g(g(f2(last)), -g(f2(0)));
    const double rhs = B1f.dot(B2g) + B2f.dot(B1g);
    rep.green_residual = std::max(rep.green_residual, std::abs(lhs - rhs) / std::max(1.0, f.norm() * g.norm()));
  }

  // Restricted space: f1(1) = 0, f2(0) = f2(1).
  Eigen::MatrixXd rows_hat = Eigen::MatrixXd::Zero(2, n);
  rows_hat(0, f1(last)) = 1.0;
  rows_hat(1, f2(0)) = 1.0;
  rows_hat(1, f2(last)) = -1.0;
  const Eigen::MatrixXd Z = null_space(rows_hat);

  // F1 f = -f1(0), F2 f = f2(0).
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2, n);
  F(0, f1(0)) = -1.0;
  F(1, f2(0)) = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F * Z);
  qr.setThreshold(1e-12);
  rep.f_rank = static_cast<int>(qr.rank());

  // Adjoint space: g with f^T E g = 0 for every f in the restricted space.
  const Eigen::MatrixXd MA = Eigen::MatrixXd(M) * Eigen::MatrixXd(A);
  const Eigen::MatrixXd E = MA + MA.transpose();
  const Eigen::MatrixXd adj = null_space(Z.transpose() * E);

  Eigen::MatrixXd rows_swapped = Eigen::MatrixXd::Zero(2, n);
  rows_swapped(0, f1(0)) = 1.0;
  rows_swapped(0, f1(last)) = -1.0;
  rows_swapped(1, f2(0)) = 1.0;
  Eigen::MatrixXd rows_naive = Eigen::MatrixXd::Zero(4, n);
  rows_naive(0, f1(0)) = 1.0;
  rows_naive(1, f1(last)) = 1.0;
  rows_naive(2, f2(0)) = 1.0;
  rows_naive(3, f2(last)) = 1.0;

  rep.angle_correct = max_principal_angle(adj, null_space(rows_swapped));
  rep.angle_naive = max_principal_angle(adj, null_space(rows_naive));
  rep.pass = rep.green_residual <= 1e-13 && rep.f_rank == 2 && rep.angle_correct <= 1e-10 && rep.angle_naive >= 0.1;
  return rep;
}

}  // namespace phbc

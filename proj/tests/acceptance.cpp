// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and not configurable.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "phbc/cli.hpp"
#include "phbc/examples.hpp"
#include "phbc/gelfand.hpp"
#include "phbc/timestepper.hpp"

using namespace phbc;
namespace fs = std::filesystem;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

struct Outcome
{
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what)
  {
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [FAILED]");
  }
};

BoundarySplitting uniform_split(const BoxGrid &grid, BoundaryPart part)
{
  return BoundarySplitting::uniform(boundary_geometry(grid), part);
}

// Face 0 clamped, every other face controlled.
BoundarySplitting face0_clamped(const BoxGrid &grid)
{
  const FaceNodeSet geo = boundary_geometry(grid);
  std::vector<BoundaryPart> labels(static_cast<std::size_t>(geo.num_faces), BoundaryPart::Gamma1);
  labels[0] = BoundaryPart::Gamma0;
  return BoundarySplitting::from_faces(geo, labels);
}

// Matrix self-adjoint and positive definite in the boundary Gram inner product.
Eigen::MatrixXd gram_spd(std::mt19937_64 &rng, const Eigen::VectorXd &gram, double shift)
{
  return gram.cwiseInverse().asDiagonal() * test::random_spd(rng, gram.size(), shift);
}

Outcome criterion1()
{
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  struct Case
  {
    std::string name;
    MatrixTupled L;
    BoxGrid grid;
  };
  const std::vector<Case> cases = {
      {"grad1", div_grad_tuple(1), BoxGrid::unit({17})},
      {"grad2", div_grad_tuple(2), BoxGrid::unit({17, 17})},
      {"grad3", div_grad_tuple(3), BoxGrid::unit({9, 9, 9})},
      {"rot", rot_tuple(), BoxGrid::unit({9, 9, 9})},
      {"mindlin", mindlin_tuple(), BoxGrid::unit({17, 17})},
      {"appendix", appendix_counterexample().tuple, BoxGrid::unit({17})},
  };
  double worst = 0.0;
  for (const auto &c : cases)
  {
    const auto op = assemble_diffop(c.L, c.grid);
    for (int k = 0; k < 100; ++k)
    {
      const Eigen::VectorXd f = test::randn(rng, c.grid.num_nodes() * c.L.m2());
      const Eigen::VectorXd g = test::randn(rng, c.grid.num_nodes() * c.L.m1());
      const double lhs = quadrature_inner(c.grid, c.L.m1(), op.forward * f, g) +
                         quadrature_inner(c.grid, c.L.m2(), f, op.adjoint * g);
      const double res = std::abs(lhs - test::boundary_form_by_axis(c.L, c.grid, f, g));
      worst = std::max(worst, res / std::max(1.0, f.norm() * g.norm()));
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst <= 1e-12, "worst scaled residual " + sci(worst) + " <= 1e-12 over 6 tuples x 100 pairs");
  o.require(secs <= 30.0, "runtime " + sci(secs) + " s <= 30 s");
  return o;
}

// Independent route: skew part of the restricted matrix Z^T M_X L_p Z.
double restricted_skew_defect(const Colligation &c)
{
  const ConstraintSet cs = full_clamp_constraints(c.ports);
  const Eigen::MatrixXd Z = kernel_basis(cs.C, c.M_X);
  const Eigen::MatrixXd MZ = c.M_X * Z;
  const Eigen::MatrixXd Ar = MZ.transpose() * (c.Lp * Z);
  return (Ar + Ar.transpose()).cwiseAbs().maxCoeff();
}

Outcome criterion2()
{
  Outcome o;
  const BoxGrid g17 = BoxGrid::unit({17, 17});
  const BoxGrid g13 = BoxGrid::unit({13, 13});
  const Colligation wave = wave_system(2).colligation(g17, uniform_split(g17, BoundaryPart::Gamma1));
  const Colligation plate = mindlin_system().colligation(g13, uniform_split(g13, BoundaryPart::Gamma1));
  const double sw = full_clamp_skewness(wave);
  const double sm = full_clamp_skewness(plate);
  o.require(sw <= 1e-11, "wave 17^2 max|MA + MA^T| " + sci(sw));
  o.require(sm <= 1e-11, "mindlin 13^2 max|MA + MA^T| " + sci(sm));
  const double rw = restricted_skew_defect(wave);
  const double rm = restricted_skew_defect(plate);
  o.require(rw <= 1e-11 && rm <= 1e-11, "kernel-coordinate route " + sci(rw) + ", " + sci(rm));
  return o;
}

Outcome criterion3()
{
  Outcome o;
  const BoxGrid grid = BoxGrid::unit({9, 9});
  const Colligation c = wave_system(2).colligation(grid, uniform_split(grid, BoundaryPart::Gamma1));
  const Eigen::VectorXd &gram = c.ports.gram;
  const int b = c.b();
  std::mt19937_64 rng(303);

  int good_ok = 0;
  double worst_eig = -1e300;
  for (int k = 0; k < 20; ++k)
  {
    BoundaryConditionSpec spec = impedance_condition(gram_spd(rng, gram, 0.05));
    spec.form = ConditionForm::V;
    const auto verdict = check_key_theorem_conditions(spec, gram);
    const auto gen = generator_check(c, spec);
    worst_eig = std::max(worst_eig, gen.max_sym_eig / std::max(gen.scale, 1e-300));
    good_ok += verdict.verdict && gen.dissipative ? 1 : 0;
  }
  o.require(good_ok == 20, std::to_string(good_ok) + "/20 SPD M pass verdict and discrete dissipativity (worst eig/scale " +
                               sci(worst_eig) + ")");

  BoundaryConditionSpec bad = impedance_condition(-Eigen::MatrixXd::Identity(b, b));
  bad.form = ConditionForm::V;
  const auto bv = check_key_theorem_conditions(bad, gram);
  const auto bg = generator_check(c, bad);
  o.require(!bv.verdict && !bg.dissipative,
            "M = -I: verdict fail, max sym eig " + sci(bg.max_sym_eig) + " > 1e-10 scale");

  // Cross-form agreement on a mix of dissipative, accretive and singular pairs.
  int agree = 0;
  int passing = 0;
  for (int k = 0; k < 50; ++k)
  {
    const Eigen::MatrixXd A = test::randn(rng, b, b) + 4.0 * Eigen::MatrixXd::Identity(b, b);
    Eigen::MatrixXd S;
    switch (k % 5)
    {
    case 0:
    case 1:
      S = gram_spd(rng, gram, 0.05);
      break;
    case 2:
      S = -gram_spd(rng, gram, 0.05);
      break;
    case 3:
    {
      // Indefinite but Gram-self-adjoint.
      Eigen::MatrixXd X = test::randn(rng, b, b);
      S = gram.cwiseInverse().asDiagonal() * (X + X.transpose());
      break;
    }
    default:
      S = gram_spd(rng, gram, 0.05);
      break;
    }
    BoundaryConditionSpec spec;
    spec.first = A;
    spec.second = A * S;
    if (k % 5 == 4)
    {
      // Rank deficient: one dropped row leaves too large a relation.
      spec.first.row(0).setZero();
      spec.second.row(0).setZero();
    }
    spec.form = ConditionForm::W;
    const bool w = check_contraction_conditions(spec, gram).verdict;
    spec.form = ConditionForm::V;
    const bool v = check_key_theorem_conditions(spec, gram).verdict;
    agree += w == v ? 1 : 0;
    passing += w ? 1 : 0;
  }
  o.require(agree == 50, "W/V agreement " + std::to_string(agree) + "/50 (" + std::to_string(passing) + " admissible)");
  return o;
}

double max_energy_drift(const SimulationResult &r)
{
  const double E0 = r.records.front().E;
  double worst = 0.0;
  for (const auto &s : r.records)
  {
    worst = std::max(worst, std::abs(s.E - E0) / E0);
  }
  return worst;
}

Outcome criterion4()
{
  Outcome o;
  const auto t0 = Clock::now();
  const BoxGrid grid = BoxGrid::unit({17, 17});
  const Colligation c = wave_system(2).colligation(grid, uniform_split(grid, BoundaryPart::Gamma1));
  std::mt19937_64 rng(404);
  SimulationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 10.0;
  cfg.x0 = test::randn(rng, c.state_size());
  const SimulationResult clamp = simulate(c, clamp_condition(c.b()), cfg);
  const double d1 = max_energy_drift(clamp);
  const double secs = seconds_since(t0);
  const SimulationResult freeb = simulate(c, free_condition(c.b()), cfg);
  const double d2 = max_energy_drift(freeb);
  o.require(clamp.records.size() == 1001, std::to_string(clamp.records.size() - 1) + " steps");
  o.require(d1 <= 1e-10, "clamp |E-E0|/E0 " + sci(d1));
  o.require(d2 <= 1e-10, "zero normal stress |E-E0|/E0 " + sci(d2));
  o.require(secs <= 20.0, "clamp run " + sci(secs) + " s <= 20 s");
  return o;
}

Outcome criterion5()
{
  Outcome o;
  std::mt19937_64 rng(505);
  struct Case
  {
    ExampleSystem sys;
    BoxGrid grid;
  };
  MaxwellParameters lossy;
  lossy.g = 0.1;
  const std::vector<Case> cases = {
      {wave_system(2), BoxGrid::unit({17, 17})},
      {wave_system(3), BoxGrid::unit({9, 9, 9})},
      {maxwell_system(), BoxGrid::unit({9, 9, 9})},
      {maxwell_system(lossy), BoxGrid::unit({9, 9, 9})},
      {mindlin_system(), BoxGrid::unit({13, 13})},
      {appendix_counterexample(), BoxGrid::unit({33})},
  };
  double worst_static = 0.0;
  for (const auto &cs : cases)
  {
    const Colligation imp = cs.sys.colligation(cs.grid, face0_clamped(cs.grid));
    const Colligation sc =
        scattering_transform(imp, cs.sys.R ? cs.sys.R : identity_entry_field(imp.m1()));
    const ConstraintSet clamp = clamp_constraints(sc.ports);
    for (int k = 0; k < 200; ++k)
    {
      Eigen::VectorXd x = project_onto_kernel(clamp.C, sc.M_X, test::randn(rng, sc.state_size()));
      x /= std::sqrt(energy(sc, x));  // unit energy
      worst_static = std::max(worst_static, std::abs(power_balance_residual(sc, x)));
    }
  }
  o.require(worst_static <= 1e-11,
            "static residual " + sci(worst_static) + " <= 1e-11 on 6 systems x 200 unit-energy clamped states");

  // Forced scattering runs with a smooth input on every controlled coordinate.
  double worst_forced = 0.0;
  const std::vector<Case> forced = {
      {wave_system(2), BoxGrid::unit({17, 17})},
      {maxwell_system(lossy), BoxGrid::unit({7, 7, 7})},
      {mindlin_system(), BoxGrid::unit({13, 13})},
  };
  for (const auto &cs : forced)
  {
    const Colligation imp = cs.sys.colligation(cs.grid, face0_clamped(cs.grid));
    const EntryMatrixField Rf = cs.sys.R ? cs.sys.R : identity_entry_field(imp.m1());
    const Eigen::MatrixXd R = pointwise_boundary_matrix(imp.ports, imp.traces, imp.grid, Rf);
    const Colligation sc = scattering_transform(imp, R);
    const int b = sc.b();
    const Eigen::VectorXd pattern = test::randn(rng, b);
    SimulationConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 1.0;
    cfg.input = [pattern](double t) { return Eigen::VectorXd(std::sin(5.0 * t) * pattern); };
    cfg.x0 = test::randn(rng, sc.state_size());
    const SimulationResult r = simulate(sc, scattering_condition(R), cfg);
    for (std::size_t k = 1; k < r.records.size(); ++k)
    {
      worst_forced = std::max(worst_forced, std::abs(r.records[k].balance_residual) / r.records[k].balance_scale);
    }
  }
  o.require(worst_forced <= 1e-10, "forced per-step relative residual " + sci(worst_forced) + " <= 1e-10");
  return o;
}

Outcome criterion6()
{
  Outcome o;
  const BoxGrid grid = BoxGrid::unit({9, 9, 9});
  std::mt19937_64 rng(606);
  const Eigen::VectorXd x0 = test::randn(rng, grid.num_nodes() * 6);
  SimulationConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 2.0;
  cfg.x0 = x0;

  MaxwellParameters lossy;
  lossy.g = 0.1;
  const Colligation cl = maxwell_system(lossy).colligation(grid, uniform_split(grid, BoundaryPart::Gamma1));
  const SimulationResult r = simulate(cl, clamp_condition(cl.b()), cfg);
  const double E0 = r.records.front().E;
  double worst_rise = -1e300;
  for (std::size_t k = 1; k < r.records.size(); ++k)
  {
    worst_rise = std::max(worst_rise, r.records[k].E - r.records[k - 1].E);
  }
  o.require(worst_rise <= 1e-12 * E0, "g = 0.1: max step increase " + sci(worst_rise / E0) + " E0 over " +
                                          std::to_string(r.records.size() - 1) + " steps");
  o.require(r.records.back().E < E0, "E(T)/E(0) = " + sci(r.records.back().E / E0));

  const Colligation c0 = maxwell_system().colligation(grid, uniform_split(grid, BoundaryPart::Gamma1));
  const double drift = max_energy_drift(simulate(c0, clamp_condition(c0.b()), cfg));
  o.require(drift <= 1e-10, "g = 0: |E-E0|/E0 " + sci(drift));
  return o;
}

Outcome criterion7()
{
  Outcome o;
  std::mt19937_64 rng(707);
  double worst_mc = 0.0;
  for (int N : {5, 10, 20})
  {
    for (int k : {N, N - 2})
    {
      const FiniteQuasiTripled t(test::randn(rng, N, k), test::random_spd(rng, k));
      // Functionals in D- (the span of the basis when k < N).
      const Eigen::VectorXd g = t.basis() * test::randn(rng, k) + (k == N ? test::randn(rng, N) : Eigen::VectorXd::Zero(N));
      const double exact = dual_norm(t, g);
      const double sampled = test::sampled_dual_norm(t, g, rng, 50000, 50000);
      worst_mc = std::max(worst_mc, std::abs(sampled - exact) / exact);
    }
  }
  o.require(worst_mc <= 1e-4, "dual norm vs sampled sup (1e5 directions) " + sci(worst_mc));

  double worst_iso = 0.0;
  double worst_tr = 0.0;
  for (int k = 0; k < 100; ++k)
  {
    const int N = 3 + k % 10;
    const FiniteQuasiTripled t(test::randn(rng, N, N), test::random_spd(rng, N));
    const Eigen::VectorXd g = test::randn(rng, N);
    const double dn = dual_norm(t, g);
    worst_iso = std::max(worst_iso, std::abs(t.plus_norm(duality_map(t, g)) - dn) / dn);
    const Eigen::MatrixXd T = test::randn(rng, N, N) + 3.0 * Eigen::MatrixXd::Identity(N, N);
    const auto tt = transform_triple(t, T);
    const double ref = dual_norm(t, Eigen::VectorXd(T.transpose() * g));
    worst_tr = std::max(worst_tr, std::abs(dual_norm(tt.triple, g) - ref) / ref);
  }
  o.require(worst_iso <= 1e-10, "Psi isometry " + sci(worst_iso));
  o.require(worst_tr <= 1e-9, "transform rule " + sci(worst_tr));

  int vn = 0;
  for (int k = 0; k < 100; ++k)
  {
    std::uniform_int_distribution<int> dim(1, 12);
    vn += von_neumann_check<double>(test::randn(rng, dim(rng), dim(rng))).pass ? 1 : 0;
  }
  o.require(vn == 100, "von Neumann " + std::to_string(vn) + "/100");
  return o;
}

Outcome criterion8()
{
  Outcome o;
  const AppendixReport r = appendix_regression(33, 20, 808);
  o.require(r.green_residual <= 1e-13, "Green residual " + sci(r.green_residual));
  o.require(r.f_rank == 2, "F rank " + std::to_string(r.f_rank));
  o.require(r.angle_correct <= 1e-10, "swapped-condition angle " + sci(r.angle_correct));
  o.require(r.angle_naive >= 0.1, "zero-trace angle " + sci(r.angle_naive));
  return o;
}

std::string slurp(const fs::path &p)
{
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome criterion9()
{
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "phbc_acceptance";
  fs::create_directories(dir);
  for (const char *name : {"wave_impedance", "wave_forced"})
  {
    CliOptions opts;
    opts.config_path = std::string(PHBC_CONFIG_DIR) + "/" + name + ".json";
    opts.seed = 2026;
    std::ostringstream sink;
    opts.out_path = (dir / "first.csv").string();
    const int a = cmd_simulate(opts, sink, sink);
    opts.out_path = (dir / "second.csv").string();
    const int b = cmd_simulate(opts, sink, sink);
    const std::string first = slurp(dir / "first.csv");
    o.require(a == 0 && b == 0 && !first.empty() && first == slurp(dir / "second.csv"),
              std::string(name) + " CSV byte-identical (" + std::to_string(first.size()) + " bytes)");
  }
  const auto t0 = Clock::now();
  std::ostringstream sink;
  const int code = cmd_selftest(CliOptions{}, sink, sink);
  const double secs = seconds_since(t0);
  o.require(code == 0, "selftest exit " + std::to_string(code));
  o.require(secs <= 120.0, "selftest " + sci(secs) + " s <= 120 s");
  return o;
}

}  // namespace

int main()
{
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i)
  {
    const auto t0 = Clock::now();
    Outcome o;
    try
    {
      o = criteria[i]();
    }
    catch (const std::exception &e)
    {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu: %s  %s  (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("acceptance: %d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

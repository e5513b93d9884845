// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "phbc/gelfand.hpp"

namespace phbc
{

using nlohmann::json;

namespace
{

// --- strict JSON helpers -------------------------------------------------------

void check_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &where)
{
  if (!j.is_object())
  {
    throw ConfigError(where + " must be an object");
  }
  for (const auto &[key, value] : j.items())
  {
    bool ok = false;
    for (const char *a : allowed)
    {
      ok = ok || key == a;
    }
    if (!ok)
    {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

const json &require(const json &j, const char *key, const std::string &where)
{
  if (!j.contains(key))
  {
    throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  }
  return j.at(key);
}

double number(const json &j, const std::string &where)
{
  if (!j.is_number())
  {
    throw ConfigError(where + " must be a number");
  }
  return j.get<double>();
}

double number_or(const json &j, const char *key, double fallback, const std::string &where)
{
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

Eigen::VectorXd vector_of(const json &j, const std::string &where)
{
  if (!j.is_array())
  {
    throw ConfigError(where + " must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    v(static_cast<Eigen::Index>(i)) = number(j[i], where);
  }
  return v;
}

Eigen::MatrixXd matrix_of(const json &j, const std::string &where)
{
  if (!j.is_array() || j.empty() || !j[0].is_array())
  {
    throw ConfigError(where + " must be a nonempty array of rows");
  }
  const auto rows = j.size();
  const auto cols = j[0].size();
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
  {
    if (!j[r].is_array() || j[r].size() != cols)
    {
      throw ConfigError(where + " has ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c)
    {
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], where);
    }
  }
  return A;
}

// A number s stands for s * I of the given size.
Eigen::MatrixXd matrix_or_scalar(const json &j, int size, const std::string &where)
{
  if (j.is_number())
  {
    return j.get<double>() * Eigen::MatrixXd::Identity(size, size);
  }
  return matrix_of(j, where);
}

// --- system selection ----------------------------------------------------------

ExampleSystem build_system(const std::string &name, const json &params, const json *custom, int n)
{
  const std::string where = "parameters";
  if (name == "wave")
  {
    check_keys(params, {"rho", "young"}, where);
    WaveParameters p;
    p.rho = number_or(params, "rho", 1.0, where);
    if (params.contains("young"))
    {
      p.young = matrix_or_scalar(params.at("young"), n, where + ".young");
    }
    return wave_system(n, p);
  }
  if (name == "maxwell")
  {
    check_keys(params, {"eps", "mu", "g", "r"}, where);
    if (n != 3)
    {
      throw ConfigError("maxwell needs a 3D grid");
    }
    MaxwellParameters p;
    p.eps = number_or(params, "eps", 1.0, where);
    p.mu = number_or(params, "mu", 1.0, where);
    p.g = number_or(params, "g", 0.0, where);
    p.r = number_or(params, "r", 1.0, where);
    return maxwell_system(p);
  }
  if (name == "mindlin")
  {
    check_keys(params, {"rho", "h", "Db", "Ds"}, where);
    if (n != 2)
    {
      throw ConfigError("mindlin needs a 2D grid");
    }
    MindlinParameters p;
    p.rho = number_or(params, "rho", 1.0, where);
    p.h = number_or(params, "h", 1.0, where);
    if (params.contains("Db"))
    {
      p.Db = matrix_or_scalar(params.at("Db"), 3, where + ".Db");
    }
    if (params.contains("Ds"))
    {
      p.Ds = matrix_or_scalar(params.at("Ds"), 2, where + ".Ds");
    }
    return mindlin_system(p);
  }
  if (name == "appendix1d")
  {
    check_keys(params, {}, where);
    if (n != 1)
    {
      throw ConfigError("appendix1d needs a 1D grid");
    }
    return appendix_counterexample();
  }
  if (name == "custom")
  {
    check_keys(params, {}, where);
    if (custom == nullptr)
    {
      throw ConfigError("system 'custom' needs a 'custom' block");
    }
    check_keys(*custom, {"L", "P0", "H"}, "custom");
    const json &Lj = require(*custom, "L", "custom");
    if (!Lj.is_array() || Lj.empty())
    {
      throw ConfigError("custom.L must be a nonempty array of matrices");
    }
    std::vector<Eigen::MatrixXd> Ls;
    for (std::size_t i = 0; i < Lj.size(); ++i)
    {
      Ls.push_back(matrix_of(Lj[i], "custom.L[" + std::to_string(i) + "]"));
    }
    ExampleSystem s;
    s.name = "custom";
    s.tuple = MatrixTupled(Ls);
    const int m = s.tuple.m1() + s.tuple.m2();
    s.P0 = custom->contains("P0") ? matrix_of(custom->at("P0"), "custom.P0") : Eigen::MatrixXd::Zero(m, m);
    const Eigen::MatrixXd H = custom->contains("H") ? matrix_of(custom->at("H"), "custom.H")
                                                     : Eigen::MatrixXd::Identity(m, m);
    if (H.rows() != m || H.cols() != m)
    {
      throw DimensionMismatch("custom.H must be m x m");
    }
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    {
      throw NotSymmetric("custom.H is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0))
    {
      throw NotSPD("custom.H is not positive definite");
    }
    s.H = HamiltonianDensity::constant(H);
    if (s.tuple.n() != n)
    {
      throw DimensionMismatch("custom.L has n = " + std::to_string(s.tuple.n()) + " but the grid is " +
                              std::to_string(n) + "D");
    }
    return s;
  }
  throw ConfigError("unknown system '" + name + "'");
}

BoxGrid build_grid(const json &g)
{
  check_keys(g, {"nodes", "lower", "upper"}, "grid");
  const json &nodes = require(g, "nodes", "grid");
  if (!nodes.is_array() || nodes.empty())
  {
    throw ConfigError("grid.nodes must be a nonempty array");
  }
  std::vector<int> counts;
  for (const auto &v : nodes)
  {
    if (!v.is_number_integer())
    {
      throw ConfigError("grid.nodes must hold integers");
    }
    counts.push_back(v.get<int>());
  }
  const auto n = counts.size();
  std::vector<double> lower(n, 0.0), upper(n, 1.0);
  if (g.contains("lower"))
  {
    const Eigen::VectorXd v = vector_of(g.at("lower"), "grid.lower");
    lower.assign(v.data(), v.data() + v.size());
  }
  if (g.contains("upper"))
  {
    const Eigen::VectorXd v = vector_of(g.at("upper"), "grid.upper");
    upper.assign(v.data(), v.data() + v.size());
  }
  return BoxGrid(counts, lower, upper);
}

BoundarySplitting build_split(const json *s, const FaceNodeSet &geometry)
{
  std::vector<BoundaryPart> labels(static_cast<std::size_t>(geometry.num_faces), BoundaryPart::Gamma1);
  if (s != nullptr)
  {
    check_keys(*s, {"gamma1"}, "splitting");
    std::fill(labels.begin(), labels.end(), BoundaryPart::Gamma0);
    const json &g1 = require(*s, "gamma1", "splitting");
    if (!g1.is_array())
    {
      throw ConfigError("splitting.gamma1 must be an array of face ids");
    }
    for (const auto &f : g1)
    {
      if (!f.is_number_integer() || f.get<int>() < 0 || f.get<int>() >= geometry.num_faces)
      {
        throw SplitMismatch("face ids must lie in [0, " + std::to_string(geometry.num_faces) + ")");
      }
      labels[static_cast<std::size_t>(f.get<int>())] = BoundaryPart::Gamma1;
    }
  }
  return BoundarySplitting::from_faces(geometry, labels);
}

EntryMatrixField constant_entry(const Eigen::MatrixXd &A)
{
  return [A](const FaceNodeEntry &, const Point &) { return A; };
}

void build_condition(RunSetup &rs, const json &bc)
{
  const std::string where = "boundary_condition";
  const json &kind_j = require(bc, "kind", where);
  if (!kind_j.is_string())
  {
    throw ConfigError(where + ".kind must be a string");
  }
  const std::string kind = kind_j.get<std::string>();
  Colligation &c = rs.colligation;
  const int b = c.b();
  const int m1 = c.m1();
  if (kind == "preset")
  {
    check_keys(bc, {"kind", "preset", "M", "R"}, where);
    const std::string preset = require(bc, "preset", where).get<std::string>();
    if (preset == "clamp")
    {
      rs.spec = clamp_condition(b);
    }
    else if (preset == "impedance-M")
    {
      const Eigen::MatrixXd M = matrix_or_scalar(require(bc, "M", where), m1, where + ".M");
      rs.spec = impedance_condition(pointwise_boundary_matrix(c.ports, c.traces, c.grid, constant_entry(M)));
      rs.spec.form = ConditionForm::V;
    }
    else if (preset == "scattering-R")
    {
      EntryMatrixField R = rs.system.R;
      if (bc.contains("R"))
      {
        R = constant_entry(matrix_or_scalar(bc.at("R"), m1, where + ".R"));
      }
      if (!R)
      {
        R = identity_entry_field(m1);
      }
      const Eigen::MatrixXd Rb = pointwise_boundary_matrix(c.ports, c.traces, c.grid, R);
      rs.spec = scattering_condition(Rb);
      c = scattering_transform(c, Rb);
    }
    else
    {
      throw ConfigError("unknown preset '" + preset + "'");
    }
    return;
  }
  if (kind == "W" || kind == "V")
  {
    const char *a = kind == "W" ? "W1" : "V1";
    const char *z = kind == "W" ? "W2" : "V2";
    check_keys(bc, {"kind", a, z, "T"}, where);
    rs.spec.form = kind == "W" ? ConditionForm::W : ConditionForm::V;
    rs.spec.first = matrix_or_scalar(require(bc, a, where), b, where + "." + a);
    rs.spec.second = matrix_or_scalar(require(bc, z, where), b, where + "." + z);
    if (bc.contains("T"))
    {
      rs.spec.T = matrix_or_scalar(bc.at("T"), b, where + ".T");
    }
    rs.spec.label = kind + "-form";
    if (rs.spec.b() != b)
    {
      throw DimensionMismatch("condition matrices need " + std::to_string(b) + " columns (boundary dimension)");
    }
    validate_spec(rs.spec);
    return;
  }
  throw ConfigError("unknown boundary condition kind '" + kind + "'");
}

InputSignal build_input(const RunSetup &rs, const json &in)
{
  const std::string where = "input";
  const std::string type = require(in, "type", where).get<std::string>();
  const int k = rs.spec.k();
  if (type == "zero")
  {
    check_keys(in, {"type"}, where);
    return {};
  }
  if (type == "sine")
  {
    check_keys(in, {"type", "face", "amplitude", "frequency", "t_on", "t_off", "component"}, where);
    const int face = require(in, "face", where).get<int>();
    const double amp = number_or(in, "amplitude", 1.0, where);
    const double freq = number_or(in, "frequency", 1.0, where);
    const double t_on = number_or(in, "t_on", 0.0, where);
    const double t_off = number_or(in, "t_off", std::numeric_limits<double>::infinity(), where);
    const int comp = in.contains("component") ? in.at("component").get<int>() : 0;
    if (k != rs.colligation.b())
    {
      throw ConfigError("sine input needs one condition row per boundary coordinate");
    }
    Eigen::VectorXd pattern = Eigen::VectorXd::Zero(k);
    const auto &geo = rs.colligation.traces.geometry;
    for (const auto &pe : rs.colligation.ports.entries)
    {
      if (geo.entries[static_cast<std::size_t>(pe.entry)].face == face)
      {
        if (comp < 0 || comp >= pe.rank)
        {
          throw ConfigError("input component out of range");
        }
        pattern(pe.offset + comp) = 1.0;
      }
    }
    if (pattern.isZero())
    {
      throw ConfigError("input face " + std::to_string(face) + " is not part of Gamma1");
    }
    return [=](double t) -> Eigen::VectorXd {
      if (t < t_on || t > t_off)
      {
        return Eigen::VectorXd::Zero(k);
      }
      return amp * std::sin(2.0 * std::numbers::pi * freq * t) * pattern;
    };
  }
  if (type == "table")
  {
    check_keys(in, {"type", "times", "values"}, where);
    const Eigen::VectorXd times = vector_of(require(in, "times", where), where + ".times");
    const Eigen::MatrixXd values = matrix_of(require(in, "values", where), where + ".values");
    if (values.rows() != times.size() || values.cols() != k)
    {
      throw ConfigError("input table needs one row of " + std::to_string(k) + " values per time");
    }
    for (Eigen::Index i = 1; i < times.size(); ++i)
    {
      if (!(times(i) > times(i - 1)))
      {
        throw ConfigError("input table times must increase");
      }
    }
    return [=](double t) -> Eigen::VectorXd {
      if (times.size() == 0 || t < times(0) || t > times(times.size() - 1))
      {
        return Eigen::VectorXd::Zero(k);
      }
      Eigen::Index i = 0;
      while (i + 1 < times.size() && times(i + 1) < t)
      {
        ++i;
      }
      if (i + 1 == times.size())
      {
        return values.row(i).transpose();
      }
      const double s = (t - times(i)) / (times(i + 1) - times(i));
      return ((1.0 - s) * values.row(i) + s * values.row(i + 1)).transpose();
    };
  }
  throw ConfigError("unknown input type '" + type + "'");
}

Eigen::VectorXd build_initial_state(const RunSetup &rs, const json &init)
{
  const std::string where = "initial_state";
  const std::string type = require(init, "type", where).get<std::string>();
  const int n = rs.colligation.state_size();
  const int m = rs.colligation.structure.m();
  if (type == "zero")
  {
    check_keys(init, {"type"}, where);
    return Eigen::VectorXd::Zero(n);
  }
  if (type == "gaussian")
  {
    check_keys(init, {"type", "center", "width", "amplitude", "component"}, where);
    const double width = number_or(init, "width", 0.1, where);
    const double amp = number_or(init, "amplitude", 1.0, where);
    const int comp = init.contains("component") ? init.at("component").get<int>() : 0;
    if (comp < 0 || comp >= m || !(width > 0.0))
    {
      throw ConfigError("gaussian needs a valid component and a positive width");
    }
    Eigen::VectorXd center = Eigen::VectorXd::Constant(rs.grid.n(), 0.5);
    if (init.contains("center"))
    {
      center = vector_of(init.at("center"), where + ".center");
      if (center.size() != rs.grid.n())
      {
        throw ConfigError("gaussian center has wrong dimension");
      }
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int node = 0; node < rs.grid.num_nodes(); ++node)
    {
      const double d2 = (rs.grid.coordinates(node) - center).squaredNorm();
      x(node * m + comp) = amp * std::exp(-d2 / (2.0 * width * width));
    }
    return x;
  }
  if (type == "random")
  {
    check_keys(init, {"type", "amplitude"}, where);
    const double amp = number_or(init, "amplitude", 1.0, where);
    std::mt19937_64 rng(rs.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
    {
      x(i) = amp * dist(rng);
    }
    return x;
  }
  throw ConfigError("unknown initial state type '" + type + "'");
}

}  // namespace

RunSetup load_config(const json &config, std::optional<std::uint64_t> seed_override)
{
  check_keys(config, {"system", "parameters", "custom", "grid", "splitting", "boundary_condition", "time", "input",
                      "initial_state", "output", "seed"},
             "config");
  RunSetup rs;
  rs.seed = config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;
  if (seed_override)
  {
    rs.seed = *seed_override;
  }
  rs.system_name = require(config, "system", "config").get<std::string>();
  rs.grid = build_grid(require(config, "grid", "config"));
  const json params = config.contains("parameters") ? config.at("parameters") : json::object();
  rs.system = build_system(rs.system_name, params, config.contains("custom") ? &config.at("custom") : nullptr,
                           rs.grid.n());
  const FaceNodeSet geometry = boundary_geometry(rs.grid);
  rs.split = build_split(config.contains("splitting") ? &config.at("splitting") : nullptr, geometry);
  rs.colligation = rs.system.colligation(rs.grid, rs.split);

  if (config.contains("boundary_condition"))
  {
    build_condition(rs, config.at("boundary_condition"));
  }
  else
  {
    rs.spec = clamp_condition(rs.colligation.b());
  }

  if (config.contains("time"))
  {
    const json &t = config.at("time");
    check_keys(t, {"dt", "t_final"}, "time");
    rs.sim.dt = number(require(t, "dt", "time"), "time.dt");
    rs.sim.t_final = number(require(t, "t_final", "time"), "time.t_final");
    step_count(rs.sim);
    rs.has_time = true;
  }
  if (config.contains("input"))
  {
    rs.sim.input = build_input(rs, config.at("input"));
    rs.forced = static_cast<bool>(rs.sim.input);
  }
  if (config.contains("initial_state"))
  {
    rs.sim.x0 = build_initial_state(rs, config.at("initial_state"));
  }
  if (config.contains("output"))
  {
    const json &o = config.at("output");
    check_keys(o, {"csv", "report"}, "output");
    if (o.contains("csv"))
    {
      rs.csv_path = o.at("csv").get<std::string>();
    }
    if (o.contains("report"))
    {
      rs.report_path = o.at("report").get<std::string>();
    }
  }
  return rs;
}

RunSetup load_config_file(const std::string &path, std::optional<std::uint64_t> seed_override)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config '" + path + "'");
  }
  json j;
  try
  {
    j = json::parse(in);
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return load_config(j, seed_override);
}

void write_csv(std::ostream &os, const SimulationResult &result)
{
  os << "step,t,E,u_norm_sq,y_norm_sq,multiplier_work,balance_residual\n";
  char buf[512];
  for (const auto &r : result.records)
  {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.step, r.t, r.E, r.u_norm_sq,
                  r.y_norm_sq, r.multiplier_work, r.balance_residual);
    os << buf;
  }
}

// --- commands -----------------------------------------------------------------

namespace
{

// Maps library exceptions onto exit codes.
int classify(const std::exception &e)
{
  if (dynamic_cast<const ConfigError *>(&e) != nullptr || dynamic_cast<const InvalidGrid *>(&e) != nullptr ||
      dynamic_cast<const SplitMismatch *>(&e) != nullptr || dynamic_cast<const DimensionMismatch *>(&e) != nullptr ||
      dynamic_cast<const json::exception *>(&e) != nullptr)
  {
    return kExitUsage;
  }
  return kExitFailure;
}

template <typename F>
int guarded(std::ostream &err, F &&body)
{
  try
  {
    return body();
  }
  catch (const std::exception &e)
  {
    const int code = classify(e);
    err << (code == kExitUsage ? "error: " : "failed: ") << e.what() << "\n";
    return code;
  }
}

struct Verdicts
{
  std::ostringstream text;
  std::string first_failure;
  std::vector<std::string> failures;

  void add(const std::string &name, bool pass, const std::string &detail)
  {
    text << (pass ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    if (!pass)
    {
      if (first_failure.empty())
      {
        first_failure = name;
      }
      failures.push_back(name);
    }
  }

  std::string failure_list() const
  {
    std::string s;
    for (const auto &f : failures)
    {
      s += (s.empty() ? "" : ", ") + f;
    }
    return s;
  }
};

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void emit(const std::string &text, const std::string &path, std::ostream &out)
{
  out << text;
  if (!path.empty())
  {
    std::ofstream f(path);
    if (!f)
    {
      throw ConfigError("cannot write '" + path + "'");
    }
    f << text;
  }
}

void validate_setup(const RunSetup &rs, Verdicts &v)
{
  const Colligation &c = rs.colligation;
  const auto &S = c.structure;

  double p_asym = 0.0;
  for (const auto &P : S.P)
  {
    p_asym = std::max(p_asym, (P - P.transpose()).cwiseAbs().maxCoeff());
  }
  v.add("hermitian-blocks", p_asym == 0.0, "max|P_i - P_i^T| = " + fmt(p_asym));
  const double p0 = (S.P0 + S.P0.transpose()).cwiseAbs().maxCoeff();
  v.add("p0-skew", p0 <= 1e-14 * std::max(1.0, S.P0.cwiseAbs().maxCoeff()), "max|P0 + P0^T| = " + fmt(p0));

  const ValidationReport hr = validate_hamiltonian(c.H, rs.grid.all_coordinates());
  v.add("hamiltonian-bounds", hr.pass,
        "eig range [" + fmt(hr.min_eig) + ", " + fmt(hr.max_eig) + "], claimed [" + fmt(c.H.c) + ", " +
            fmt(c.H.C) + "]");

  double sbp = 0.0;
  for (int i = 0; i < rs.grid.n(); ++i)
  {
    sbp = std::max(sbp, sbp_1d(rs.grid.count(i), rs.grid.spacing(i)).sbp_defect().cwiseAbs().maxCoeff());
  }
  v.add("sbp-identity", sbp <= 1e-13, "max defect " + fmt(sbp));

  std::mt19937_64 rng(rs.seed);
  std::normal_distribution<double> nd;
  double green = 0.0;
  for (int k = 0; k < 5; ++k)
  {
    Eigen::VectorXd f(rs.grid.num_nodes() * S.m2), g(rs.grid.num_nodes() * S.m1);
    for (auto &x : f.reshaped())
    {
      x = nd(rng);
    }
    for (auto &x : g.reshaped())
    {
      x = nd(rng);
    }
    green = std::max(green, green_identity_residual(c.tuple, rs.grid, f, g) / std::max(1.0, f.norm() * g.norm()));
  }
  v.add("green-identity", green <= 1e-12, "relative residual " + fmt(green));

  bool kernel = true;
  for (std::size_t e = 0; e < c.traces.geometry.size(); ++e)
  {
    kernel = kernel && kernel_identity_check(c.traces.lnu[e]);
  }
  v.add("kernel-identity", kernel, "ker pi_L = ker L_nu^T on every boundary entry");

  if (rs.split.count(BoundaryPart::Gamma1) == 0)
  {
    v.add("boundary-condition", true, "Gamma1 empty, clamp only");
    return;
  }
  const Eigen::VectorXd &gram = c.ports.gram;
  if (rs.spec.form == ConditionForm::W)
  {
    const ContractionReport cr = check_contraction_conditions(rs.spec, gram);
    v.add("w-range", cr.range_ok, "max residual " + fmt(cr.max_range_residual));
    v.add("w-injectivity", cr.injective, "sigma_min / sigma_max = " + fmt(cr.sigma_ratio));
    v.add("w-inequality", cr.inequality_ok, "min eig " + fmt(cr.min_form_eig));
  }
  else
  {
    const KeyTheoremReport kr = check_key_theorem_conditions(rs.spec, gram);
    v.add("v-closedness", kr.closedness_automatic, "automatic in finite dimensions");
    v.add("v-inequality", kr.inequality_ok, "min eig " + fmt(kr.min_form_eig));
  }
  const RelationReport rel = relation_dissipativity(kernel_relation(rs.spec.first, rs.spec.second, gram));
  v.add("relation-dissipative", rel.dissipative, "max form eig " + fmt(rel.max_form_eig));
  v.add("relation-maximal", rel.maximal,
        "dimension " + std::to_string(rel.dimension) + " of " + std::to_string(rs.spec.b()));

  if (c.state_size() <= 2500)
  {
    const GeneratorReport gr = generator_check(c, rs.spec);
    v.add("generator-dissipative", gr.dissipative, "max sym eig " + fmt(gr.max_sym_eig) + ", scale " + fmt(gr.scale));
    v.add("generator-contraction", gr.contraction,
          "||exp(dt A)|| = " + fmt(gr.exp_norms[0]) + ", " + fmt(gr.exp_norms[1]));
  }
}

std::string header(const RunSetup &rs)
{
  std::ostringstream os;
  os << "system " << rs.system_name << ", grid";
  for (int i = 0; i < rs.grid.n(); ++i)
  {
    os << (i ? "x" : " ") << rs.grid.count(i);
  }
  os << ", state size " << rs.colligation.state_size() << ", boundary dimension " << rs.colligation.b()
     << ", condition " << rs.spec.label << "\n";
  return os.str();
}

}  // namespace

int cmd_validate(const CliOptions &opts, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    const RunSetup rs = load_config_file(opts.config_path, opts.seed);
    Verdicts v;
    validate_setup(rs, v);
    std::string text = header(rs) + v.text.str();
    text += v.first_failure.empty() ? "validate: all conditions hold\n"
                                    : "validate: failed conditions " + v.failure_list() + "\n";
    emit(text, opts.out_path.empty() ? rs.report_path : opts.out_path, out);
    return v.first_failure.empty() ? kExitPass : kExitFailure;
  });
}

int cmd_simulate(const CliOptions &opts, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    RunSetup rs = load_config_file(opts.config_path, opts.seed);
    if (!rs.has_time)
    {
      throw ConfigError("simulate needs a 'time' block");
    }
    const std::string csv_path = opts.out_path.empty() ? rs.csv_path : opts.out_path;
    if (csv_path.empty())
    {
      throw ConfigError("no CSV output path (use --out or output.csv)");
    }
    Verdicts pre;
    if (rs.split.count(BoundaryPart::Gamma1) > 0)
    {
      const Eigen::VectorXd &gram = rs.colligation.ports.gram;
      const bool ok = rs.spec.form == ConditionForm::W ? check_contraction_conditions(rs.spec, gram).verdict
                                                       : check_key_theorem_conditions(rs.spec, gram).verdict;
      pre.add("boundary-condition", ok, rs.spec.label);
    }
    if (!pre.first_failure.empty())
    {
      out << header(rs) << pre.text.str();
      return kExitFailure;
    }

    const SimulationResult res = simulate(rs.colligation, rs.spec, rs.sim);
    {
      std::ofstream f(csv_path, std::ios::binary);
      if (!f)
      {
        throw ConfigError("cannot write '" + csv_path + "'");
      }
      write_csv(f, res);
    }

    Verdicts v;
    double worst = 0.0;
    bool monotone = true;
    const double E0 = res.records.front().E;
    for (std::size_t i = 1; i < res.records.size(); ++i)
    {
      const auto &r = res.records[i];
      worst = std::max(worst, std::abs(r.balance_residual) / std::max(r.balance_scale, 1e-300));
      monotone = monotone && r.E <= res.records[i - 1].E + 1e-12 * std::max(E0, 1e-300);
    }
    const double EN = res.records.back().E;
    std::ostringstream summary;
    summary << header(rs);
    for (const auto &w : res.warnings)
    {
      summary << "warning: " << w << "\n";
    }
    summary << "steps " << res.records.size() - 1 << ", E(0) = " << fmt(E0) << ", E(T) = " << fmt(EN)
            << ", relative change " << fmt(E0 > 0.0 ? (EN - E0) / E0 : EN) << "\n";
    v.add("energy-balance", worst <= 1e-10, "max relative per-step residual " + fmt(worst));
    if (!rs.forced)
    {
      v.add("energy-monotone", monotone, monotone ? "E non-increasing" : "E increased");
    }
    std::string text = summary.str() + v.text.str();
    text += "csv written to " + csv_path + "\n";
    emit(text, rs.report_path, out);
    return v.first_failure.empty() ? kExitPass : kExitFailure;
  });
}

// --- selftest -----------------------------------------------------------------

namespace
{

Eigen::VectorXd random_vector(std::mt19937_64 &rng, Eigen::Index n)
{
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    v(i) = nd(rng);
  }
  return v;
}

Eigen::MatrixXd random_matrix(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c)
{
  return random_vector(rng, r * c).reshaped(r, c);
}

Eigen::MatrixXd random_spd(std::mt19937_64 &rng, Eigen::Index n)
{
  const Eigen::MatrixXd A = random_matrix(rng, n, n);
  return A * A.transpose() + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
}

// Sampled lower bound for sup |<g, Bc>| / ||Bc||_+: random directions, then
// a shrinking local search around the best one.
double sampled_dual_norm(const FiniteQuasiTripled &t, const Eigen::VectorXd &g, int samples, std::mt19937_64 &rng)
{
  const Eigen::VectorXd a = t.basis().transpose() * g;
  auto ratio = [&](const Eigen::VectorXd &c) { return std::abs(a.dot(c)) / t.plus_norm(c); };
  Eigen::VectorXd best = random_vector(rng, t.k());
  double best_val = ratio(best);
  const int global = samples / 2;
  for (int i = 1; i < global; ++i)
  {
    const Eigen::VectorXd c = random_vector(rng, t.k());
    const double r = ratio(c);
    if (r > best_val)
    {
      best_val = r;
      best = c;
    }
  }
  double radius = 0.5 * best.norm();
  for (int i = global; i < samples; ++i)
  {
    const Eigen::VectorXd c = best + radius * random_vector(rng, t.k()) / std::sqrt(static_cast<double>(t.k()));
    const double r = ratio(c);
    if (r > best_val)
    {
      best_val = r;
      best = c;
      radius *= 1.5;
    }
    else
    {
      radius *= 0.98;
    }
    radius = std::max(radius, 1e-8 * best.norm());
  }
  return best_val;
}

}  // namespace

int cmd_selftest(const CliOptions &opts, std::ostream &out, std::ostream &err)
{
  return guarded(err, [&] {
    if (!opts.fault.empty() && opts.fault != "sbp")
    {
      throw ConfigError("unknown fault '" + opts.fault + "'");
    }
    const std::uint64_t seed = opts.seed.value_or(20260101);
    std::mt19937_64 rng(seed);
    Verdicts v;
    const auto start = std::chrono::steady_clock::now();

    // SBP identity, optionally on a deliberately corrupted stencil.
    {
      double worst = 0.0;
      for (int N : {3, 5, 17, 33})
      {
        auto op = sbp_1d(N, 1.0 / (N - 1));
        if (opts.fault == "sbp")
        {
          op.D(1, 2) *= 1.01;
        }
        worst = std::max(worst, op.sbp_defect().cwiseAbs().maxCoeff());
      }
      v.add("sbp-identity", worst <= 1e-13, "max defect " + fmt(worst));
    }

    // Discrete Green identity for every built-in tuple.
    {
      struct Case
      {
        std::string name;
        MatrixTupled L;
        BoxGrid grid;
      };
      const std::vector<Case> cases = {
          {"div/grad 1D", div_grad_tuple(1), BoxGrid::unit({17})},
          {"div/grad 2D", div_grad_tuple(2), BoxGrid::unit({9, 9})},
          {"div/grad 3D", div_grad_tuple(3), BoxGrid::unit({5, 5, 5})},
          {"rot", rot_tuple(), BoxGrid::unit({5, 5, 5})},
          {"mindlin", mindlin_tuple(), BoxGrid::unit({9, 9})},
          {"appendix", appendix_counterexample().tuple, BoxGrid::unit({17})},
      };
      double worst = 0.0;
      for (const auto &cs : cases)
      {
        for (int k = 0; k < 10; ++k)
        {
          const Eigen::VectorXd f = random_vector(rng, cs.grid.num_nodes() * cs.L.m2());
          const Eigen::VectorXd g = random_vector(rng, cs.grid.num_nodes() * cs.L.m1());
          worst = std::max(worst, green_identity_residual(cs.L, cs.grid, f, g) / std::max(1.0, f.norm() * g.norm()));
        }
      }
      v.add("green-identity", worst <= 1e-12, "relative residual " + fmt(worst));
    }

    // Kernel identity ker pi = ker L_nu^T on random unit normals.
    {
      bool ok = true;
      for (const auto &L : {div_grad_tuple(3), rot_tuple(), mindlin_tuple()})
      {
        for (int k = 0; k < 10; ++k)
        {
          Eigen::VectorXd nu = random_vector(rng, L.n());
          nu.normalize();
          ok = ok && kernel_identity_check(L, nu);
        }
      }
      v.add("kernel-identity", ok, "random unit normals");
    }

    // Quasi Gelfand triple formulas.
    {
      double mc = 0.0, iso = 0.0, tr = 0.0;
      bool vn = true;
      for (int k = 0; k < 5; ++k)
      {
        const int N = 4 + k;
        const FiniteQuasiTripled t(random_matrix(rng, N, N), random_spd(rng, N));
        const Eigen::VectorXd g = random_vector(rng, N);
        const double exact = dual_norm(t, g);
        mc = std::max(mc, std::abs(sampled_dual_norm(t, g, 20000, rng) - exact) / exact);
        const Eigen::VectorXd psi = duality_map(t, g);
        iso = std::max(iso, std::abs(t.plus_norm(psi) - exact) / exact);
        const Eigen::MatrixXd T = random_matrix(rng, N, N) + 3.0 * Eigen::MatrixXd::Identity(N, N);
        const auto tt = transform_triple(t, T);
        const Eigen::VectorXd Ttg = T.transpose() * g;
        tr = std::max(tr, std::abs(dual_norm(tt.triple, g) - dual_norm(t, Ttg)) / dual_norm(t, Ttg));
        vn = vn && von_neumann_check<double>(random_matrix(rng, N + 2, N)).pass;
      }
      v.add("gelfand-dual-norm", mc <= 1e-4, "sampled vs exact " + fmt(mc));
      v.add("gelfand-isometry", iso <= 1e-10, "||Psi g||_+ vs ||g||_- " + fmt(iso));
      v.add("gelfand-transform", tr <= 1e-9, "||g||_Y- vs ||T^T g||_H- " + fmt(tr));
      v.add("von-neumann", vn, "random rectangular T");
    }

    // Appendix regression.
    {
      const AppendixReport ar = appendix_regression(33, 20, static_cast<unsigned>(seed));
      v.add("appendix-regression", ar.pass,
            "green " + fmt(ar.green_residual) + ", F rank " + std::to_string(ar.f_rank) + ", angles " +
                fmt(ar.angle_correct) + " / " + fmt(ar.angle_naive));
    }

    // Static balances on clamped random states.
    {
      struct Sys
      {
        ExampleSystem sys;
        BoxGrid grid;
      };
      const std::vector<Sys> systems = {{wave_system(2), BoxGrid::unit({7, 7})},
                                        {maxwell_system(), BoxGrid::unit({4, 4, 4})},
                                        {mindlin_system(), BoxGrid::unit({7, 7})}};
      double worst = 0.0;
      for (const auto &s : systems)
      {
        const FaceNodeSet geo = boundary_geometry(s.grid);
        std::vector<BoundaryPart> labels(static_cast<std::size_t>(geo.num_faces), BoundaryPart::Gamma1);
        labels[0] = BoundaryPart::Gamma0;
        Colligation c = s.sys.colligation(s.grid, BoundarySplitting::from_faces(geo, labels));
        const ConstraintSet cl = clamp_constraints(c.ports);
        const Colligation cs = scattering_transform(c, scalar_entry_field(c.m1(), 2.0));
        for (int k = 0; k < 10; ++k)
        {
          const Eigen::VectorXd x = project_onto_kernel(cl.C, c.M_X, random_vector(rng, c.state_size()));
          const double scale = std::max(1.0, energy(c, x));
          worst = std::max({worst, std::abs(impedance_balance_residual(c, x)) / scale,
                            std::abs(power_balance_residual(cs, x)) / scale});
        }
      }
      v.add("power-balance", worst <= 1e-11, "relative residual " + fmt(worst));
    }

    // Generator conditions for a dissipative and an anti-dissipative relation.
    {
      const BoxGrid grid = BoxGrid::unit({6, 6});
      const Colligation c = wave_system(2).colligation(
          grid, BoundarySplitting::uniform(boundary_geometry(grid), BoundaryPart::Gamma1));
      BoundaryConditionSpec good = impedance_condition(Eigen::MatrixXd::Identity(c.b(), c.b()));
      good.form = ConditionForm::V;
      BoundaryConditionSpec bad = impedance_condition(-Eigen::MatrixXd::Identity(c.b(), c.b()));
      bad.form = ConditionForm::V;
      const bool vg = check_key_theorem_conditions(good, c.ports.gram).verdict;
      const bool vb = check_key_theorem_conditions(bad, c.ports.gram).verdict;
      const GeneratorReport gg = generator_check(c, good);
      const GeneratorReport gb = generator_check(c, bad);
      v.add("generator-conditions", vg && gg.pass && !vb && !gb.dissipative,
            "max sym eig " + fmt(gg.max_sym_eig) + " (pass) / " + fmt(gb.max_sym_eig) + " (fail)");
    }

    // Midpoint runs: conservation, forced balance, dissipation.
    {
      const BoxGrid grid = BoxGrid::unit({9, 9});
      const Colligation c = wave_system(2).colligation(
          grid, BoundarySplitting::uniform(boundary_geometry(grid), BoundaryPart::Gamma1));
      SimulationConfig cfg;
      cfg.dt = 0.01;
      cfg.t_final = 1.0;
      cfg.x0 = random_vector(rng, c.state_size());
      const SimulationResult r = simulate(c, clamp_condition(c.b()), cfg);
      const double drift = std::abs(r.records.back().E - r.records.front().E) / r.records.front().E;
      v.add("midpoint-conservation", drift <= 1e-10, "relative energy drift " + fmt(drift));

      const Colligation cs = scattering_transform(c, scalar_entry_field(1, 1.0));
      const int b = c.b();
      cfg.x0 = Eigen::VectorXd();
      cfg.input = [b](double t) { return Eigen::VectorXd::Constant(b, std::sin(2.0 * std::numbers::pi * t)); };
      const SimulationResult f = simulate(cs, scattering_condition(Eigen::MatrixXd::Identity(b, b)), cfg);
      double worst = 0.0;
      for (std::size_t i = 1; i < f.records.size(); ++i)
      {
        worst = std::max(worst, std::abs(f.records[i].balance_residual) / f.records[i].balance_scale);
      }
      v.add("forced-balance", worst <= 1e-10, "max relative residual " + fmt(worst));
    }
    {
      const BoxGrid grid = BoxGrid::unit({5, 5, 5});
      MaxwellParameters p;
      p.g = 0.1;
      const Colligation c = maxwell_system(p).colligation(
          grid, BoundarySplitting::uniform(boundary_geometry(grid), BoundaryPart::Gamma0));
      SimulationConfig cfg;
      cfg.dt = 0.01;
      cfg.t_final = 0.2;
      cfg.x0 = random_vector(rng, c.state_size());
      const SimulationResult r = simulate(c, clamp_condition(0), cfg);
      bool mono = true;
      for (std::size_t i = 1; i < r.records.size(); ++i)
      {
        mono = mono && r.records[i].E <= r.records[i - 1].E + 1e-12 * r.records.front().E;
      }
      v.add("dissipation-monotone", mono && r.records.back().E < r.records.front().E, "Maxwell with g = 0.1");
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string text = v.text.str();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", secs);
    text += v.first_failure.empty() ? std::string("selftest: all invariants hold (") + buf + " s)\n"
                                    : "selftest: failed invariant " + v.first_failure + "\n";
    emit(text, opts.out_path, out);
    return v.first_failure.empty() ? kExitPass : kExitFailure;
  });
}

}  // namespace phbc

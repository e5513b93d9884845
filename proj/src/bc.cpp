// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include "phbc/bc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SparseLU>

namespace phbc
{

EntryMatrixField identity_entry_field(int m1)
{
  return [m1](const FaceNodeEntry &, const Point &) { return Eigen::MatrixXd::Identity(m1, m1); };
}

EntryMatrixField scalar_entry_field(int m1, double s)
{
  return [m1, s](const FaceNodeEntry &, const Point &) -> Eigen::MatrixXd {
    return s * Eigen::MatrixXd::Identity(m1, m1);
  };
}

namespace
{

void add_block(std::vector<Triplet> &t, int row0, int col0, const Eigen::MatrixXd &B)
{
  for (int r = 0; r < B.rows(); ++r)
  {
    for (int c = 0; c < B.cols(); ++c)
    {
      if (B(r, c) != 0.0)
      {
        t.emplace_back(row0 + r, col0 + c, B(r, c));
      }
    }
  }
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet> &t)
{
  SparseMatrix A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

// Compresses a pointwise m1 x m1 matrix to the entry's range coordinates and
// checks that ran L_nu is invariant.
Eigen::MatrixXd compress(const Eigen::MatrixXd &A, const Eigen::MatrixXd &U, const char *what)
{
  if (A.rows() != U.rows() || A.cols() != U.rows())
  {
    throw DimensionMismatch(std::string(what) + " must be m1 x m1 at every boundary entry");
  }
  const Eigen::MatrixXd Ar = U.transpose() * A * U;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A * U - U * Ar).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw DimensionMismatch(std::string(what) + " does not leave ran L_nu invariant");
  }
  return Ar;
}

}  // namespace

BoundaryPorts boundary_ports(const TraceOperators &traces, const HamiltonianDensity &H,
                             const BoxGrid &grid, const EntryMatrixField &T)
{
  const int m1 = traces.m1;
  const int m2 = traces.m2;
  const int m = m1 + m2;
  if (H.m != m)
  {
    throw DimensionMismatch("Hamiltonian density size differs from m1 + m2");
  }
  BoundaryPorts ports;
  ports.m1 = m1;
  ports.m2 = m2;
  ports.state_size = grid.num_nodes() * m;

  std::vector<Triplet> clamp, g, k, b1, b2;
  std::vector<double> gram;
  int clamp_row = 0;
  int port_row = 0;
  int all_row = 0;
  for (std::size_t e = 0; e < traces.geometry.size(); ++e)
  {
    const auto &entry = traces.geometry.entries[e];
    const Point zeta = grid.coordinates(entry.node);
    const Eigen::MatrixXd Hz = H(zeta);
    const Eigen::MatrixXd &U = traces.basis[e];
    const int r = static_cast<int>(U.cols());
    const int col0 = entry.node * m;
    const Eigen::MatrixXd e1 = U.transpose() * Hz.topRows(m1);
    const Eigen::MatrixXd e2 = U.transpose() * traces.lnu[e] * Hz.bottomRows(m2);

    add_block(b1, all_row, col0, e1);
    add_block(b2, all_row, col0, e2);
    all_row += r;

    if (traces.split[e] == BoundaryPart::Gamma0)
    {
      add_block(clamp, clamp_row, col0, e1);
      clamp_row += r;
      continue;
    }
    PortEntry pe;
    pe.entry = static_cast<int>(e);
    pe.offset = port_row;
    pe.rank = r;
    pe.basis = U;
    pe.T = T ? compress(T(entry, zeta), U, "T") : Eigen::MatrixXd::Identity(r, r);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(pe.T);
    if (!lu.isInvertible())
    {
      throw Singular("pointwise T is not invertible on ran L_nu");
    }
    add_block(g, port_row, col0, pe.T * e1);
    add_block(k, port_row, col0, lu.inverse().transpose() * e2);
    for (int i = 0; i < r; ++i)
    {
      gram.push_back(0.5 * entry.weight);
    }
    port_row += r;
    ports.entries.push_back(std::move(pe));
  }
  const int n = ports.state_size;
  ports.clamp = from_triplets(clamp_row, n, clamp);
  ports.G = from_triplets(port_row, n, g);
  ports.K = from_triplets(port_row, n, k);
  ports.B1_all = from_triplets(all_row, n, b1);
  ports.B2_all = from_triplets(all_row, n, b2);
  ports.gram = Eigen::Map<Eigen::VectorXd>(gram.data(), static_cast<Eigen::Index>(gram.size()));
  return ports;
}

Eigen::MatrixXd pointwise_boundary_matrix(const BoundaryPorts &ports, const TraceOperators &traces,
                                          const BoxGrid &grid, const EntryMatrixField &field)
{
  const int b = ports.b();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(b, b);
  for (const auto &pe : ports.entries)
  {
    const auto &entry = traces.geometry.entries[static_cast<std::size_t>(pe.entry)];
    out.block(pe.offset, pe.offset, pe.rank, pe.rank) =
        compress(field(entry, grid.coordinates(entry.node)), pe.basis, "pointwise boundary matrix");
  }
  return out;
}

// --- specifications ----------------------------------------------------------

void validate_spec(const BoundaryConditionSpec &spec)
{
  if (spec.first.rows() != spec.second.rows() || spec.first.cols() != spec.second.cols())
  {
    throw DimensionMismatch("the two boundary condition matrices must have the same shape");
  }
  const int b = spec.b();
  if (spec.T.size() > 0)
  {
    if (spec.T.rows() != b || spec.T.cols() != b)
    {
      throw DimensionMismatch("T must be b x b");
    }
    if (!Eigen::FullPivLU<Eigen::MatrixXd>(spec.T).isInvertible())
    {
      throw Singular("T is not invertible");
    }
  }
  if (spec.R.size() > 0)
  {
    if (spec.R.rows() != b || spec.R.cols() != b)
    {
      throw DimensionMismatch("R must be b x b");
    }
    const double scale = std::max(1.0, spec.R.cwiseAbs().maxCoeff());
    if ((spec.R - spec.R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    {
      throw NotSymmetric("R is not symmetric");
    }
    if (Eigen::LLT<Eigen::MatrixXd>(spec.R).info() != Eigen::Success)
    {
      throw NotSPD("R is not positive definite");
    }
  }
}

BoundaryConditionSpec clamp_condition(int b)
{
  return {ConditionForm::W, Eigen::MatrixXd::Identity(b, b), Eigen::MatrixXd::Zero(b, b), {}, {}, "clamp"};
}

BoundaryConditionSpec free_condition(int b)
{
  return {ConditionForm::W, Eigen::MatrixXd::Zero(b, b), Eigen::MatrixXd::Identity(b, b), {}, {}, "free"};
}

BoundaryConditionSpec impedance_condition(const Eigen::MatrixXd &M)
{
  const auto b = M.rows();
  return {ConditionForm::W, Eigen::MatrixXd::Identity(b, b), M, {}, {}, "impedance"};
}

BoundaryConditionSpec scattering_condition(const Eigen::MatrixXd &R)
{
  const auto b = R.rows();
  const double s = 1.0 / std::sqrt(2.0);
  BoundaryConditionSpec spec{ConditionForm::W, s * Eigen::MatrixXd::Identity(b, b), s * R, {}, R, "scattering"};
  validate_spec(spec);
  return spec;
}

// --- relation and generator conditions ---------------------------------------

namespace
{

Eigen::VectorXd gram_or_identity(const Eigen::VectorXd &gram, int b)
{
  if (gram.size() == 0)
  {
    return Eigen::VectorXd::Ones(b);
  }
  if (gram.size() != b)
  {
    throw DimensionMismatch("boundary Gram has wrong length");
  }
  if ((gram.array() <= 0.0).any())
  {
    throw NotSPD("boundary Gram must be positive");
  }
  return gram;
}

double min_sym_eig(const Eigen::MatrixXd &A)
{
  if (A.size() == 0)
  {
    return 0.0;
  }
  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Orthonormal basis of the column space (column-pivoted QR).
Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd &A)
{
  if (A.cols() == 0)
  {
    return Eigen::MatrixXd(A.rows(), 0);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  const auto rank = qr.rank();
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), rank);
  return Q;
}

// W1 Gram^{-1} W2^T + W2 Gram^{-1} W1^T.
Eigen::MatrixXd cross_form(const Eigen::MatrixXd &A1, const Eigen::MatrixXd &A2, const Eigen::VectorXd &gram)
{
  const Eigen::MatrixXd A2g = A2 * gram.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd X = A1 * A2g.transpose();
  return X + X.transpose();
}

}  // namespace

RelationReport relation_dissipativity(const DissipativeRelation &rel)
{
  const auto b = rel.gram.size();
  if (rel.basis.rows() != 2 * b)
  {
    throw DimensionMismatch("relation basis must have 2b rows");
  }
  RelationReport rep;
  const Eigen::MatrixXd Q = orthonormal_columns(rel.basis);
  rep.dimension = static_cast<int>(Q.cols());
  if (rep.dimension == 0)
  {
    rep.dissipative = true;
    rep.maximal = b == 0;
    return rep;
  }
  const Eigen::MatrixXd q = Q.topRows(b);
  const Eigen::MatrixXd p = Q.bottomRows(b);
  const Eigen::MatrixXd form = q.transpose() * rel.gram.asDiagonal() * p;
  const Eigen::MatrixXd S = 0.5 * (form + form.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  rep.max_form_eig = es.eigenvalues().maxCoeff();
  const double scale = std::max(1.0, rel.gram.maxCoeff());
  rep.dissipative = rep.max_form_eig <= 1e-12 * scale;
  rep.maximal = rep.dissipative && rep.dimension == b;
  return rep;
}

DissipativeRelation kernel_relation(const Eigen::MatrixXd &A1, const Eigen::MatrixXd &A2,
                                    const Eigen::VectorXd &gram)
{
  if (A1.rows() != A2.rows() || A1.cols() != A2.cols())
  {
    throw DimensionMismatch("relation matrices must have the same shape");
  }
  const auto b = A1.cols();
  Eigen::MatrixXd A(A1.rows(), 2 * b);
  A << A1, A2;
  DissipativeRelation rel;
  rel.gram = gram_or_identity(gram, static_cast<int>(b));
  if (A.rows() == 0)
  {
    rel.basis = Eigen::MatrixXd::Identity(2 * b, 2 * b);
    return rel;
  }
  // ker A is the orthogonal complement of ran A^T.
  const Eigen::MatrixXd At = A.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
  qr.setThreshold(1e-12);
  const auto rank = qr.rank();
  const Eigen::MatrixXd Qfull = qr.householderQ();
  rel.basis = Qfull.rightCols(2 * b - rank);
  return rel;
}

ContractionReport check_contraction_conditions(const BoundaryConditionSpec &spec, const Eigen::VectorXd &gram)
{
  validate_spec(spec);
  const Eigen::VectorXd g = gram_or_identity(gram, spec.b());
  const Eigen::MatrixXd &W1 = spec.first;
  const Eigen::MatrixXd &W2 = spec.second;
  ContractionReport rep;
  const Eigen::MatrixXd S = W1 + W2;
  const Eigen::MatrixXd Dm = W1 - W2;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double smin = (sv.size() == spec.b() && sv.size() > 0) ? sv(sv.size() - 1) : 0.0;
  rep.sigma_ratio = smax > 0.0 ? smin / smax : 0.0;
  rep.injective = spec.b() == 0 || (smax > 0.0 && smin > 1e-12 * smax);

  // ran(W1 - W2) within ran(W1 + W2), judged by least-squares residuals.
  svd.setThreshold(1e-12);
  const Eigen::MatrixXd X = svd.solve(Dm);
  const Eigen::MatrixXd res = S * X - Dm;
  rep.max_range_residual = 0.0;
  bool range_ok = true;
  for (int j = 0; j < Dm.cols(); ++j)
  {
    const double r = res.col(j).norm();
    rep.max_range_residual = std::max(rep.max_range_residual, r);
    if (r > 1e-10 * std::max(1.0, Dm.col(j).norm()))
    {
      range_ok = false;
    }
  }
  rep.range_ok = range_ok;

  const Eigen::MatrixXd F = cross_form(W1, W2, g);
  rep.min_form_eig = min_sym_eig(F);
  const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
  rep.inequality_ok = rep.min_form_eig >= -1e-12 * scale;
  rep.verdict = rep.range_ok && rep.injective && rep.inequality_ok;
  return rep;
}

KeyTheoremReport check_key_theorem_conditions(const BoundaryConditionSpec &spec, const Eigen::VectorXd &gram)
{
  validate_spec(spec);
  const Eigen::VectorXd g = gram_or_identity(gram, spec.b());
  KeyTheoremReport rep;
  rep.relation = relation_dissipativity(kernel_relation(spec.first, spec.second, g));
  const Eigen::MatrixXd F = cross_form(spec.first, spec.second, g);
  rep.min_form_eig = min_sym_eig(F);
  const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
  rep.inequality_ok = rep.min_form_eig >= -1e-12 * scale;
  rep.verdict = rep.closedness_automatic && rep.relation.dissipative && rep.inequality_ok;
  return rep;
}

// --- constraints --------------------------------------------------------------

ConstraintSet prune_rows(const SparseMatrix &C, const SparseMatrix &injection, int clamp_rows)
{
  const auto rows = static_cast<int>(C.rows());
  Eigen::SparseMatrix<double, Eigen::RowMajor> R(C);

  // Rows sharing a column end up in one group.
  std::vector<int> parent(static_cast<std::size_t>(rows));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a)
    {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  std::vector<int> owner(static_cast<std::size_t>(C.cols()), -1);
  for (int r = 0; r < rows; ++r)
  {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(R, r); it; ++it)
    {
      auto &o = owner[static_cast<std::size_t>(it.col())];
      if (o < 0)
      {
        o = r;
      }
      else
      {
        parent[static_cast<std::size_t>(find(r))] = find(o);
      }
    }
  }
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r)
  {
    groups[static_cast<std::size_t>(find(r))].push_back(r);
  }

  std::vector<int> keep;
  keep.reserve(static_cast<std::size_t>(rows));
  for (const auto &grp : groups)
  {
    if (grp.empty())
    {
      continue;
    }
    std::vector<int> cols;
    for (int r : grp)
    {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(R, r); it; ++it)
      {
        cols.push_back(static_cast<int>(it.col()));
      }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    if (cols.empty())
    {
      continue;  // zero rows carry no constraint
    }
    Eigen::MatrixXd blockT = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cols.size()),
                                                   static_cast<Eigen::Index>(grp.size()));
    for (std::size_t i = 0; i < grp.size(); ++i)
    {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(R, grp[i]); it; ++it)
      {
        const auto pos = std::lower_bound(cols.begin(), cols.end(), static_cast<int>(it.col())) - cols.begin();
        blockT(pos, static_cast<Eigen::Index>(i)) = it.value();
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(blockT);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    for (Eigen::Index i = 0; i < rank; ++i)
    {
      keep.push_back(grp[static_cast<std::size_t>(qr.colsPermutation().indices()(i))]);
    }
  }
  std::sort(keep.begin(), keep.end());

  ConstraintSet cs;
  const auto kept = static_cast<int>(keep.size());
  std::vector<Triplet> sel;
  sel.reserve(keep.size());
  for (int i = 0; i < kept; ++i)
  {
    sel.emplace_back(i, keep[static_cast<std::size_t>(i)], 1.0);
    if (keep[static_cast<std::size_t>(i)] < clamp_rows)
    {
      ++cs.clamp_rows;
    }
  }
  const SparseMatrix S = from_triplets(kept, rows, sel);
  cs.C = S * C;
  cs.injection = S * injection;
  cs.C.makeCompressed();
  cs.injection.makeCompressed();
  cs.pruned_rows = rows - kept;
  if (cs.pruned_rows > 0)
  {
    cs.warnings.push_back("pruned " + std::to_string(cs.pruned_rows) + " linearly dependent constraint rows");
  }
  return cs;
}

ConstraintSet constraint_matrix(const BoundaryConditionSpec &spec, const BoundaryPorts &ports)
{
  validate_spec(spec);
  const int b = ports.b();
  if (spec.b() != b)
  {
    throw DimensionMismatch("condition acts on " + std::to_string(spec.b()) + " boundary coordinates, ports have " +
                            std::to_string(b));
  }
  SparseMatrix G = ports.G;
  SparseMatrix K = ports.K;
  if (spec.T.size() > 0)
  {
    const Eigen::MatrixXd Tinv_t = spec.T.inverse().transpose();
    const SparseMatrix Ts = spec.T.sparseView();
    const SparseMatrix Tis = Tinv_t.sparseView();
    G = Ts * ports.G;
    K = Tis * ports.K;
  }
  const SparseMatrix W1 = spec.first.sparseView();
  const SparseMatrix W2 = spec.second.sparseView();
  const SparseMatrix rowsW = W1 * G + W2 * K;

  const auto nclamp = static_cast<int>(ports.clamp.rows());
  const int k = spec.k();
  const int total = nclamp + k;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(ports.clamp.nonZeros() + rowsW.nonZeros()));
  for (int c = 0; c < ports.clamp.outerSize(); ++c)
  {
    for (SparseMatrix::InnerIterator it(ports.clamp, c); it; ++it)
    {
      t.emplace_back(static_cast<int>(it.row()), c, it.value());
    }
  }
  for (int c = 0; c < rowsW.outerSize(); ++c)
  {
    for (SparseMatrix::InnerIterator it(rowsW, c); it; ++it)
    {
      if (it.value() != 0.0)
      {
        t.emplace_back(nclamp + static_cast<int>(it.row()), c, it.value());
      }
    }
  }
  const SparseMatrix C = from_triplets(total, ports.state_size, t);
  std::vector<Triplet> inj;
  for (int i = 0; i < k; ++i)
  {
    inj.emplace_back(nclamp + i, i, 1.0);
  }
  return prune_rows(C, from_triplets(total, k, inj), nclamp);
}

ConstraintSet constraint_matrix(const BoundaryConditionSpec &spec, const TraceOperators &traces,
                                const HamiltonianDensity &H, const BoxGrid &grid)
{
  return constraint_matrix(spec, boundary_ports(traces, H, grid));
}

ConstraintSet clamp_constraints(const BoundaryPorts &ports)
{
  const auto rows = static_cast<int>(ports.clamp.rows());
  return prune_rows(ports.clamp, SparseMatrix(rows, 0), rows);
}

ConstraintSet full_clamp_constraints(const BoundaryPorts &ports)
{
  const auto r1 = static_cast<int>(ports.B1_all.rows());
  const auto r2 = static_cast<int>(ports.B2_all.rows());
  SparseMatrix C(r1 + r2, ports.state_size);
  std::vector<Triplet> t;
  for (const auto *A : {&ports.B1_all, &ports.B2_all})
  {
    const int off = (A == &ports.B1_all) ? 0 : r1;
    for (int c = 0; c < A->outerSize(); ++c)
    {
      for (SparseMatrix::InnerIterator it(*A, c); it; ++it)
      {
        t.emplace_back(off + static_cast<int>(it.row()), c, it.value());
      }
    }
  }
  C.setFromTriplets(t.begin(), t.end());
  return prune_rows(C, SparseMatrix(r1 + r2, 0), r1 + r2);
}

Eigen::MatrixXd kernel_basis(const SparseMatrix &C, const SparseMatrix &M)
{
  const auto n = C.cols();
  if (M.rows() != n || M.cols() != n)
  {
    throw DimensionMismatch("mass matrix does not match the constraint columns");
  }
  Eigen::MatrixXd Z0;
  if (C.rows() == 0)
  {
    Z0 = Eigen::MatrixXd::Identity(n, n);
  }
  else
  {
    const Eigen::MatrixXd Ct = Eigen::MatrixXd(C).transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ct);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    const Eigen::MatrixXd Q = qr.householderQ();
    Z0 = Q.rightCols(n - rank);
  }
  const Eigen::MatrixXd Gz = Z0.transpose() * (M * Z0);
  Eigen::LLT<Eigen::MatrixXd> llt(Gz);
  if (llt.info() != Eigen::Success)
  {
    throw NotSPD("mass matrix is not positive definite on the constraint kernel");
  }
  // Z = Z0 L^{-T} gives Z^T M Z = I.
  return llt.matrixL().solve(Z0.transpose()).transpose();
}

Eigen::VectorXd project_onto_kernel(const SparseMatrix &C, const SparseMatrix &M, const Eigen::VectorXd &x)
{
  const auto n = M.rows();
  const auto r = C.rows();
  if (r == 0)
  {
    return x;
  }
  std::vector<Triplet> t;
  for (int c = 0; c < M.outerSize(); ++c)
  {
    for (SparseMatrix::InnerIterator it(M, c); it; ++it)
    {
      t.emplace_back(static_cast<int>(it.row()), c, it.value());
    }
  }
  for (int c = 0; c < C.outerSize(); ++c)
  {
    for (SparseMatrix::InnerIterator it(C, c); it; ++it)
    {
      t.emplace_back(static_cast<int>(n + it.row()), c, it.value());
      t.emplace_back(c, static_cast<int>(n + it.row()), it.value());
    }
  }
  SparseMatrix A(n + r, n + r);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
  {
    throw SaddleSingular("projection saddle-point matrix is singular");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + r);
  rhs.head(n) = M * x;
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
  {
    throw SolveFailure("projection solve failed");
  }
  return sol.head(n);
}

}  // namespace phbc

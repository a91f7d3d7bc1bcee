// Copyright 2026 lindfit contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lindfit/superop.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace lindfit {

DensityMatrix DensityMatrix::make(const CMat& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("DensityMatrix: non-square");
  if ((m - m.adjoint()).norm() > tol)
    throw NonPhysicalChannelError("DensityMatrix: not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol)
    throw NonPhysicalChannelError("DensityMatrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0);
  if (es.eigenvalues().minCoeff() < -tol)
    throw NonPhysicalChannelError("DensityMatrix: negative eigenvalue");
  return DensityMatrix{m};
}

CVec omega_vector(int d) {
  CVec w = CVec::Zero(d * d);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) w(j * d + j) = a;
  return w;
}

CVec vectorize(const CMat& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("vectorize: non-square");
  const int d = static_cast<int>(rho.rows());
  CVec v(d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) v(j * d + k) = rho(j, k);
  return v;
}

CMat unvectorize(const CVec& v) {
  int d = 1;
  while (d * d < v.size()) ++d;
  if (d * d != v.size()) throw DimensionError("unvectorize: length not a perfect square");
  CMat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) m(j, k) = v(j * d + k);
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

SuperOp transfer_from_map_pairs(const std::vector<std::pair<CMat, CMat>>& pairs) {
  if (pairs.empty()) throw DimensionError("transfer_from_map_pairs: empty list");
  const int d = static_cast<int>(pairs.front().first.rows());
  CMat e = CMat::Zero(d * d, d * d);
  for (const auto& [a, b] : pairs) {
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
      throw DimensionError("transfer_from_map_pairs: mixed dimensions");
    e += kron(a, b.transpose());
  }
  return SuperOp(std::move(e), d);
}

SuperOp transfer_from_unitary(const CMat& u) {
  return transfer_from_map_pairs({{u, u.adjoint()}});
}

CMat gamma_involution(const CMat& m) {
  const int side = static_cast<int>(m.rows());
  if (m.cols() != side) throw DimensionError("gamma_involution: non-square");
  int d = 1;
  while (d * d < side) ++d;
  if (d * d != side) throw DimensionError("gamma_involution: side not a perfect square");
  CMat out(side, side);
  // out[(j,l),(k,m)] = in[(j,k),(l,m)]
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int mm = 0; mm < d; ++mm) out(j * d + l, k * d + mm) = m(j * d + k, l * d + mm);
  return out;
}

SuperOp gamma_involution(const SuperOp& m) {
  return SuperOp(gamma_involution(m.mat), m.dim);
}

CMat EigenSystem::reconstruct() const {
  return right * eigenvalues.asDiagonal() * left;
}

namespace {

// Within numerically degenerate eigenvalue groups the eigensolver may return
// nearly dependent columns; any basis of the group span is equally valid, so
// re-orthonormalize per group. Leaves distinct-eigenvalue columns untouched.
void orthonormalize_degenerate_groups(const CMat& m, CVec& mus, CMat& v) {
  const Eigen::Index n = mus.size();
  const double tol = 1e-8 * std::max(1.0, mus.cwiseAbs().maxCoeff());
  std::vector<int> group(n, -1);
  std::vector<std::vector<int>> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (group[i] >= 0) continue;
    group[i] = static_cast<int>(groups.size());
    groups.push_back({static_cast<int>(i)});
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (group[j] < 0 && std::abs(mus(i) - mus(j)) <= tol) {
        group[j] = group[i];
        groups.back().push_back(static_cast<int>(j));
      }
  }
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    CMat block(v.rows(), g.size());
    for (size_t c = 0; c < g.size(); ++c) block.col(c) = v.col(g[c]);
    const Eigen::HouseholderQR<CMat> qr(block);
    const CMat q = qr.householderQ() * CMat::Identity(v.rows(), g.size());
    // A defective group spans fewer directions than its multiplicity; the
    // fabricated columns would not be eigenvectors, so keep the originals
    // (and let the condition check reject the matrix) unless every new
    // column still lies in the group eigenspace.
    bool valid = true;
    for (size_t c = 0; c < g.size() && valid; ++c)
      if ((m * q.col(c) - mus(g[c]) * q.col(c)).norm() > 100.0 * tol) valid = false;
    if (!valid) continue;
    for (size_t c = 0; c < g.size(); ++c) v.col(g[c]) = q.col(c);
  }
}

}  // namespace

EigenSystem eig_pairs(const CMat& m, double cond_threshold) {
  Eigen::ComplexEigenSolver<CMat> es(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw SolverFailure("eig_pairs: eigensolver failed");
  EigenSystem sys;
  sys.eigenvalues = es.eigenvalues();
  sys.right = es.eigenvectors();
  orthonormalize_degenerate_groups(m, sys.eigenvalues, sys.right);
  Eigen::JacobiSVD<CMat> svd(sys.right);
  const double smin = svd.singularValues().minCoeff();
  sys.condition_estimate =
      smin > 0.0 ? svd.singularValues().maxCoeff() / smin : std::numeric_limits<double>::infinity();
  if (!(sys.condition_estimate < cond_threshold))
    throw DefectiveMatrixError("eig_pairs: eigenvector condition " +
                               std::to_string(sys.condition_estimate) + " exceeds threshold");
  sys.left = sys.right.inverse();
  return sys;
}

CMat expm(const CMat& m) {
  CMat e = m.exp();
  if (!e.allFinite()) throw SolverFailure("expm: non-finite result");
  return e;
}

Complex principal_log(Complex mu) {
  if (mu == Complex(0.0, 0.0)) throw SolverFailure("principal_log: zero eigenvalue");
  Complex l = std::log(mu);
  // std::log returns Im ∈ [−π, π]; our convention places the cut at +π.
  if (l.imag() == -kPi) l = Complex(l.real(), kPi);
  return l;
}

CVec principal_log_eigs(const CVec& mus) {
  CVec out(mus.size());
  for (Eigen::Index j = 0; j < mus.size(); ++j) out(j) = principal_log(mus(j));
  return out;
}

double avg_gate_fidelity(const SuperOp& e_ideal, const SuperOp& e) {
  if (e_ideal.dim != e.dim) throw DimensionError("avg_gate_fidelity: dimension mismatch");
  const double d = e.dim;
  const Complex tr = (e_ideal.mat.adjoint() * e.mat).trace();
  return (tr.real() / d + 1.0) / (d + 1.0);
}

}  // namespace lindfit

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

#include "lindfit/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace lindfit {

CMat pauli_matrix(char p) {
  CMat m(2, 2);
  const Complex i(0.0, 1.0);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw ParseError(std::string("unknown Pauli '") + p + "'");
  }
  return m;
}

CMat pauli_string(const std::string& s) {
  if (s.empty()) throw ParseError("empty Pauli string");
  CMat m = pauli_matrix(s[0]);
  for (size_t k = 1; k < s.size(); ++k) m = kron(m, pauli_matrix(s[k]));
  return m;
}

std::vector<std::string> pauli_labels(int n_qubits) {
  static const char kAxes[] = {'I', 'X', 'Y', 'Z'};
  std::vector<std::string> out;
  const int total = 1 << (2 * n_qubits);
  out.reserve(total);
  for (int idx = 0; idx < total; ++idx) {
    std::string s(n_qubits, 'I');
    int v = idx;
    for (int q = n_qubits - 1; q >= 0; --q) {
      s[q] = kAxes[v & 3];
      v >>= 2;
    }
    out.push_back(std::move(s));
  }
  return out;
}

CMat omega_complement_basis(int d) {
  const int side = d * d;
  const CVec w = omega_vector(d);
  // Householder reflection mapping e_0 to ω, then drop the first column.
  CMat u = CMat::Identity(side, side);
  CVec v = w;
  v(0) -= 1.0;
  const double nv = v.norm();
  if (nv > 1e-14) u -= (2.0 / (nv * nv)) * (v * v.adjoint());
  return u.rightCols(side - 1);
}

namespace {

// TP constraint in Choi coordinates: Tr₁(C) = 0. Orthogonal projection is
// C ↦ C − (1/d)·1⊗Tr₁C, and it commutes with Hermitization.
CMat partial_trace_first(const CMat& c, int d) {
  CMat out = CMat::Zero(d, d);
  for (int j = 0; j < d; ++j) out += c.block(j * d, j * d, d, d);
  return out;
}

CMat project_linear_choi(const CMat& c, int d) {
  CMat h = (c + c.adjoint()) / 2.0;
  const CMat t = partial_trace_first(h, d) / static_cast<double>(d);
  for (int j = 0; j < d; ++j) h.block(j * d, j * d, d, d) -= t;
  return h;
}

CMat project_ccp_choi(const CMat& c, int d, const CMat& q) {
  CMat b = q.adjoint() * c * q;
  CMat bh = (b + b.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(bh);
  RVec ev = es.eigenvalues();
  bool any_negative = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0.0) {
      ev(i) = 0.0;
      any_negative = true;
    }
  CMat clipped;
  if (any_negative)
    clipped = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  else
    clipped = bh;
  return c + q * (clipped - b) * q.adjoint();
}

}  // namespace

ConeResiduals lindbladian_residuals(const SuperOp& m) {
  const int d = m.dim;
  const CMat c = gamma_involution(m.mat);
  ConeResiduals r;
  r.hermitian = 0.5 * (c - c.adjoint()).norm();
  const CMat q = omega_complement_basis(d);
  const CMat b = q.adjoint() * c * q;
  Eigen::SelfAdjointEigenSolver<CMat> es((b + b.adjoint()) / 2.0,
                                         Eigen::EigenvaluesOnly);
  r.ccp = std::max(0.0, -es.eigenvalues().minCoeff());
  r.tp = (omega_vector(d).adjoint() * m.mat).norm();
  return r;
}

bool is_lindbladian(const SuperOp& m, double tol, ConeResiduals* residuals) {
  const ConeResiduals r = lindbladian_residuals(m);
  if (residuals) *residuals = r;
  return r.hermitian <= tol && r.ccp <= tol && r.tp <= tol;
}

Lindbladian Lindbladian::certify(SuperOp op, double tol) {
  ConeResiduals r;
  if (!is_lindbladian(op, tol, &r))
    throw NotQuiteLindbladianError("cone residuals (" + std::to_string(r.hermitian) + ", " +
                                   std::to_string(r.ccp) + ", " + std::to_string(r.tp) +
                                   ") exceed tolerance " + std::to_string(tol));
  return Lindbladian{std::move(op), tol};
}

// --- Canonical decomposition -------------------------------------------------

CanonicalDecomposition canonical_decomposition(const Lindbladian& l, double decomp_tol) {
  const int d = l.op.dim;
  int n_qubits = 0;
  while ((1 << n_qubits) < d) ++n_qubits;
  if ((1 << n_qubits) != d)
    throw DimensionError("canonical_decomposition: dimension is not a power of two");
  const auto labels = pauli_labels(n_qubits);
  const int m = d * d - 1;  // non-identity Paulis

  std::vector<CMat> paulis;
  paulis.reserve(m);
  for (int k = 1; k <= m; ++k) paulis.push_back(pauli_string(labels[k]));

  const CMat& lm = l.op.mat;
  const CMat eye = CMat::Identity(d, d);

  CanonicalDecomposition dec;
  dec.hamiltonian = CMat::Zero(d, d);
  for (int k = 0; k < m; ++k) {
    const Complex z = (lm * kron(paulis[k], eye)).trace();
    const Complex hk = Complex(0, 1) * (z - std::conj(z)) / (2.0 * d);
    dec.hamiltonian += (hk / static_cast<double>(d)) * paulis[k];
  }

  CMat c(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) c(j, k) = (lm * kron(paulis[j], paulis[k].conjugate())).trace();

  Eigen::SelfAdjointEigenSolver<CMat> es((c + c.adjoint()) / 2.0);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index a = m - 1; a >= 0; --a) {
    double nu = es.eigenvalues()(a);
    if (nu < -decomp_tol * scale)
      throw NotQuiteLindbladianError("canonical_decomposition: C eigenvalue " +
                                     std::to_string(nu) + " below -decomp_tol");
    if (nu <= 0.0) continue;  // clipped
    const double gamma = nu / d;
    if (gamma < 1e-12) continue;
    CMat j = CMat::Zero(d, d);
    for (int k = 0; k < m; ++k) j += es.eigenvectors()(k, a) * paulis[k];
    j /= std::sqrt(static_cast<double>(d));
    dec.jumps.push_back({gamma, std::move(j)});
  }
  // Largest rates first.
  std::sort(dec.jumps.begin(), dec.jumps.end(),
            [](const auto& a, const auto& b) { return a.rate > b.rate; });
  return dec;
}

SuperOp hamiltonian_superop(const CMat& h) {
  const int d = static_cast<int>(h.rows());
  const CMat eye = CMat::Identity(d, d);
  CMat l = Complex(0, 1) * (kron(eye, h.transpose()) - kron(h, eye));
  return SuperOp(std::move(l), d);
}

SuperOp dissipator_superop(const CMat& j) {
  const int d = static_cast<int>(j.rows());
  const CMat eye = CMat::Identity(d, d);
  const CMat jj = j.adjoint() * j;
  CMat l = kron(j, j.conjugate()) - 0.5 * (kron(jj, eye) + kron(eye, jj.transpose()));
  return SuperOp(std::move(l), d);
}

Lindbladian assemble_lindbladian(const CanonicalDecomposition& dec) {
  const int d = static_cast<int>(dec.hamiltonian.rows());
  CMat l = hamiltonian_superop(dec.hamiltonian).mat;
  for (const auto& jump : dec.jumps) {
    if (jump.rate < 0.0)
      throw NotQuiteLindbladianError("assemble_lindbladian: negative rate");
    l += jump.rate * dissipator_superop(jump.op).mat;
  }
  return Lindbladian::certify(SuperOp(std::move(l), d), 1e-8);
}

// --- Noise models ------------------------------------------------------------

const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::Overrotation: return "overrotation";
    case NoiseKind::CoherentX: return "cohX";
    case NoiseKind::CoherentZ: return "cohZ";
    case NoiseKind::Bitflip: return "bitflip";
    case NoiseKind::Dephasing: return "dephasing";
    case NoiseKind::AmpDamp: return "ampdamp";
    case NoiseKind::IncoherentY: return "incohY";
  }
  return "?";
}

std::optional<NoiseKind> noise_kind_from_name(const std::string& s) {
  for (NoiseKind k : {NoiseKind::Overrotation, NoiseKind::CoherentX, NoiseKind::CoherentZ,
                      NoiseKind::Bitflip, NoiseKind::Dephasing, NoiseKind::AmpDamp,
                      NoiseKind::IncoherentY})
    if (s == noise_kind_name(k)) return k;
  return std::nullopt;
}

namespace {

// Pauli (or lowering operator) embedded on the target qubit(s) of an n-qubit
// register; target kBothQubits places the operator on every qubit.
CMat embed_on_target(const CMat& op1q, int target, int n_qubits) {
  CMat out(1, 1);
  out(0, 0) = 1.0;
  for (int q = 0; q < n_qubits; ++q) {
    const bool hit = (target == NoiseModel::kBothQubits) || (q == target);
    out = kron(out, hit ? op1q : CMat(pauli_matrix('I')));
  }
  return out;
}

CMat normalized(const CMat& m) { return m / m.norm(); }

SuperOp noise_term(const NoiseModel& nm, const Lindbladian& l_ideal,
                   const CanonicalDecomposition& dec_ideal, int n_qubits) {
  switch (nm.kind) {
    case NoiseKind::Overrotation:
      return SuperOp(nm.strength * hamiltonian_superop(dec_ideal.hamiltonian).mat, l_ideal.op.dim);
    case NoiseKind::CoherentX:
      return hamiltonian_superop(nm.strength * embed_on_target(pauli_matrix('X'), nm.target, n_qubits));
    case NoiseKind::CoherentZ:
      return hamiltonian_superop(nm.strength * embed_on_target(pauli_matrix('Z'), nm.target, n_qubits));
    case NoiseKind::Bitflip: {
      const CMat j = normalized(embed_on_target(pauli_matrix('X'), nm.target, n_qubits));
      return SuperOp(nm.strength * dissipator_superop(j).mat, l_ideal.op.dim);
    }
    case NoiseKind::Dephasing: {
      const CMat j = normalized(embed_on_target(pauli_matrix('Z'), nm.target, n_qubits));
      return SuperOp(nm.strength * dissipator_superop(j).mat, l_ideal.op.dim);
    }
    case NoiseKind::IncoherentY: {
      const CMat j = normalized(embed_on_target(pauli_matrix('Y'), nm.target, n_qubits));
      return SuperOp(nm.strength * dissipator_superop(j).mat, l_ideal.op.dim);
    }
    case NoiseKind::AmpDamp: {
      CMat lower(2, 2);
      lower << 0, 1, 0, 0;  // |0⟩⟨1|
      const CMat j = normalized(embed_on_target(lower, nm.target, n_qubits));
      return SuperOp(nm.strength * dissipator_superop(j).mat, l_ideal.op.dim);
    }
  }
  throw ParseError("make_noise: unknown noise kind");
}

}  // namespace

Lindbladian make_noise(const std::vector<NoiseModel>& models, const Lindbladian& l_ideal) {
  const int d = l_ideal.op.dim;
  int n_qubits = 0;
  while ((1 << n_qubits) < d) ++n_qubits;
  CanonicalDecomposition dec_ideal;
  bool have_dec = false;
  CMat l = l_ideal.op.mat;
  for (const auto& nm : models) {
    if (nm.strength < 0.0) throw ParseError("make_noise: negative strength");
    if (nm.kind == NoiseKind::Overrotation && !have_dec) {
      dec_ideal = canonical_decomposition(l_ideal);
      have_dec = true;
    }
    l += noise_term(nm, l_ideal, dec_ideal, n_qubits).mat;
  }
  return Lindbladian::certify(SuperOp(std::move(l), d), 1e-7);
}

std::vector<NoiseModel> calibrate_noise(std::vector<NoiseModel> models,
                                        const Lindbladian& l_ideal, double target_norm) {
  const Lindbladian raw = make_noise(models, l_ideal);
  const double cur = fro_dist(raw.op, l_ideal.op);
  if (cur < 1e-15) throw ParseError("calibrate_noise: zero-strength model");
  const double scale = target_norm / cur;
  for (auto& nm : models) nm.strength *= scale;
  return models;
}

}  // namespace lindfit

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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lindfit/superop.hpp"
#include "lindfit/types.hpp"

namespace lindfit {

// Pauli helpers. Labels for n qubits run lexicographically over {I,X,Y,Z}^n.
CMat pauli_matrix(char p);
CMat pauli_string(const std::string& s);
std::vector<std::string> pauli_labels(int n_qubits);

// Orthonormal completion of |ω⟩⟩: columns span ω⊥, Q†ω = 0, Q†Q = 1.
CMat omega_complement_basis(int d);

// Residuals of the three cone conditions:
//   (i)  hermitian: ‖(L^Γ − (L^Γ)†)/2‖_F
//   (ii) ccp:       max(0, −λ_min of the ω⊥-compressed Hermitian Choi part)
//   (iii) tp:       ‖⟨⟨ω|L‖₂
struct ConeResiduals {
  double hermitian = 0.0;
  double ccp = 0.0;
  double tp = 0.0;
  double max() const { return std::max(hermitian, std::max(ccp, tp)); }
};

ConeResiduals lindbladian_residuals(const SuperOp& m);
bool is_lindbladian(const SuperOp& m, double tol, ConeResiduals* residuals = nullptr);

// A SuperOp certified to satisfy the three cone conditions within tolerance.
struct Lindbladian {
  SuperOp op;
  double certificate_tol = 1e-6;

  static Lindbladian certify(SuperOp op, double tol = 1e-6);
  static Lindbladian zero(int d) { return certify(SuperOp(CMat::Zero(d * d, d * d), d), 1e-12); }
};

// --- Frobenius projection onto the Lindbladian cone -------------------------

struct ProjectionOptions {
  double tol = 1e-10;   // fixed-point residual target (relative to scale)
  int max_iters = 50000;
  double step = 1.0;    // prox parameter of the splitting
};

// Douglas-Rachford splitting between the subspace {Hermitian Choi, TP} (whose
// two projections commute, so the joint projection is closed-form) and the
// ccp cone (eigenvalue clip on the ω⊥-compressed Choi). Warm-startable: reuse
// one instance across nearby inputs to cut iteration counts.
class LindbladProjector {
 public:
  explicit LindbladProjector(int d, ProjectionOptions opts = {});

  SuperOp project(const SuperOp& x);
  void reset();  // drop warm-start state

  int last_iterations() const { return last_iterations_; }

 private:
  int d_;
  ProjectionOptions opts_;
  CMat q_;  // ω⊥ basis
  CMat z_;  // splitting state (Choi coordinates)
  bool warm_ = false;
  int last_iterations_ = 0;
};

Lindbladian project_to_lindbladian(const SuperOp& x, const ProjectionOptions& opts = {});

// --- Canonical decomposition -------------------------------------------------

// Hamiltonian H (traceless Hermitian) and jump operators (traceless, unit
// Frobenius norm, mutually orthogonal) with rates γ_α ≥ 0 realizing
//   𝓛(ρ) = i[ρ,H] + Σ_α γ_α (J_α ρ J_α† − ½{J_α†J_α, ρ}).
struct CanonicalDecomposition {
  CMat hamiltonian;
  struct Jump {
    double rate;
    CMat op;
  };
  std::vector<Jump> jumps;
};

// Negative eigenvalues of the jump matrix C below −decomp_tol raise
// NotQuiteLindbladian; eigenvalues in (−decomp_tol, 0] are clipped to 0.
CanonicalDecomposition canonical_decomposition(const Lindbladian& l, double decomp_tol = 1e-6);

Lindbladian assemble_lindbladian(const CanonicalDecomposition& dec);

// Elementary-basis building blocks: i(1⊗Hᵀ − H⊗1) and
// J⊗J̄ − ½(J†J⊗1 + 1⊗JᵀJ̄).
SuperOp hamiltonian_superop(const CMat& h);
SuperOp dissipator_superop(const CMat& j);

// --- Parametric noise models -------------------------------------------------

enum class NoiseKind {
  Overrotation,
  CoherentX,
  CoherentZ,
  Bitflip,
  Dephasing,
  AmpDamp,
  IncoherentY,  // SPAM-only model: jump Y on the target qubit
};

struct NoiseModel {
  NoiseKind kind = NoiseKind::Dephasing;
  double strength = 0.0;
  int target = 0;  // qubit index, or kBothQubits for a two-qubit Pauli term
  static constexpr int kBothQubits = -1;
};

const char* noise_kind_name(NoiseKind k);
std::optional<NoiseKind> noise_kind_from_name(const std::string& s);

// Ground-truth generator L* = L_ideal + noise terms. Overrotation scales the
// Hamiltonian part of L_ideal by (1+strength); coherent terms add i[ρ, s·P];
// dissipative terms add a normalized jump on the target with rate = strength.
Lindbladian make_noise(const std::vector<NoiseModel>& models, const Lindbladian& l_ideal);

// Scales all strengths by one factor so ‖L*−L_ideal‖ = target_norm
// (the perturbation is linear in the strength vector).
std::vector<NoiseModel> calibrate_noise(std::vector<NoiseModel> models,
                                        const Lindbladian& l_ideal, double target_norm);

}  // namespace lindfit

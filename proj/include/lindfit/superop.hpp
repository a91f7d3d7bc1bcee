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

#include <vector>

#include "lindfit/types.hpp"

namespace lindfit {

// A d×d state. Vector index (j,k) is linearized as j·d + k (row-major),
// fixed project-wide.
struct DensityMatrix {
  CMat mat;

  // Validates Hermiticity, unit trace and positivity within tol.
  static DensityMatrix make(const CMat& m, double tol = 1e-9);
};

// |ω⟩⟩ = (1/√d) Σ_j |e_j,e_j⟩⟩; entries 1/√d at indices j·d+j, 0 elsewhere.
CVec omega_vector(int d);

// |ρ⟩⟩ with component (j,k) = ⟨e_j|ρ|e_k⟩.
CVec vectorize(const CMat& rho);
CMat unvectorize(const CVec& v);

// Kronecker product with (i,j),(k,l) → A(i,k)·B(j,l), row index i·rowsB+j.
CMat kron(const CMat& a, const CMat& b);

// Transfer matrix E = Σ_k A_k ⊗ B_kᵀ of the map ρ ↦ Σ_k A_k ρ B_k.
SuperOp transfer_from_map_pairs(const std::vector<std::pair<CMat, CMat>>& pairs);

// Transfer matrix U ⊗ conj(U) of the unitary channel ρ ↦ UρU†.
SuperOp transfer_from_unitary(const CMat& u);

// Linear extension of (|e_j,e_k⟩⟩⟨⟨e_l,e_m|)^Γ = |e_j,e_l⟩⟩⟨⟨e_k,e_m|.
// Involution; maps a transfer matrix to its Choi-like form.
CMat gamma_involution(const CMat& m);
SuperOp gamma_involution(const SuperOp& m);

// Eigendecomposition with paired left/right eigenvectors.
// Left vectors are the rows of V⁻¹, so ⟨⟨l_i|r_j⟩⟩ = δ_ij by construction.
struct EigenSystem {
  CVec eigenvalues;        // μ_j
  CMat right;              // columns |r_j⟩⟩
  CMat left;               // rows ⟨⟨l_j|
  double condition_estimate = 1.0;  // κ₂ of the right-eigenvector matrix

  CMat reconstruct() const;  // Σ_j μ_j |r_j⟩⟩⟨⟨l_j|
};

// Throws DefectiveMatrixError when κ(V) exceeds cond_threshold.
EigenSystem eig_pairs(const CMat& m, double cond_threshold = 1e8);
inline EigenSystem eig_pairs(const SuperOp& m, double cond_threshold = 1e8) {
  return eig_pairs(m.mat, cond_threshold);
}

CMat expm(const CMat& m);
inline SuperOp expm(const SuperOp& m) { return SuperOp(expm(m.mat), m.dim); }

// λ_j with e^{λ_j} = μ_j and Im(λ_j) ∈ (−π, π]. Negative real axis maps to
// Im(λ) = +π. Throws on zero eigenvalues (singular channel).
CVec principal_log_eigs(const CVec& mus);
Complex principal_log(Complex mu);

// F_avg = ((1/d)·Tr[(E_ideal)† E] + 1) / (d + 1), real part.
double avg_gate_fidelity(const SuperOp& e_ideal, const SuperOp& e);

}  // namespace lindfit

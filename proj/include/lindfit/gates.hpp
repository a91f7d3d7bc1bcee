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

#include <string>

#include "lindfit/lindblad.hpp"
#include "lindfit/superop.hpp"

namespace lindfit {

// Unitary gate with an explicit orthonormal eigenbasis and eigenphases,
// U = V·diag(e^{iθ})·V†. The eigenphase data pins down a Lindbladian
// generator in the principal branch without a matrix logarithm.
struct Gate {
  std::string name;
  int dim = 0;
  CMat unitary;
  CMat eigvecs;   // unitary V
  RVec eigphases;  // θ_a ∈ (−π, π]
};

// Recognized names: 1-qubit I, X, Y, Z, H, T, sqrtX; 2-qubit CNOT, ISWAP,
// RZX(θ), RZZ(θ), and tensor products like "T@I", "X@H", "sqrtX@I".
Gate make_gate(const std::string& name);

SuperOp ideal_transfer(const Gate& g);

// Principal-branch generator: L = Σ_{ab} i·Δ_ab |v_a⊗v̄_b⟩⟩⟨⟨·| with
// Δ_ab = θ_a−θ_b wrapped into (−π, π]; exact ±π differences are assigned
// antisymmetrically so the spectrum stays conjugate-paired.
Lindbladian ideal_generator(const Gate& g);

// π − ρ(L_ideal); the diagonalizer is unitary so κ(V) = 1.
double theorem1_threshold(const Gate& g);

}  // namespace lindfit

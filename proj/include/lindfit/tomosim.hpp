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

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lindfit/superop.hpp"
#include "lindfit/types.hpp"

namespace lindfit {

// Sentinel for exact (infinite-shot) probabilities.
constexpr std::uint64_t kInfiniteShots = std::numeric_limits<std::uint64_t>::max();

// Measurement matrix A (rows = effects ⟨⟨F_i|) and preparation matrix B
// (columns = prepared states |ρ_j⟩⟩).
struct FiducialSet {
  CMat meas;  // A
  CMat prep;  // B
  std::vector<std::string> meas_labels;
  std::vector<std::string> prep_labels;
  int dim = 0;
};

// Preparations: tensor products of {|0⟩,|1⟩,|+⟩,|+i⟩}; measurements: +1
// eigenspace projectors of the n-qubit Pauli strings (identity string reads
// out the trace).
FiducialSet pauli_fiducials(int n_qubits);

// P_ij = k_ij/shots with k_ij ~ Binomial(shots, ⟨⟨F_i|E|ρ_j⟩⟩).
RMat simulate_probabilities(const SuperOp& e_true, const FiducialSet& fid, std::uint64_t shots,
                            std::uint64_t seed);

// E = A⁻¹ P B⁻¹; no physicality enforced.
SuperOp linear_inversion(const RMat& p, const FiducialSet& fid);

// Dykstra alternating projections between the PSD-Choi set and the TP affine
// set; stops when the per-sweep change drops below tol.
SuperOp project_to_cptp(const SuperOp& e_tilde, int max_iters = 2000, double tol = 1e-10);

struct SpamConfig {
  double prep_mean = 0.07;
  double prep_sd = 0.007;
  double meas_mean = 0.12;
  double meas_sd = 0.012;
};

// One random SPAM channel per preparation column and measurement row; the
// noise kind is drawn from {amp-damp, bitflip, incoherent Y, dephasing} on a
// random qubit, with rate γ from the configured normal (clipped at 0).
FiducialSet apply_spam(const FiducialSet& ideal, const SpamConfig& cfg, std::uint64_t seed);

// One gate-set experiment: Gram estimate plus one probability matrix per gate.
struct TomographyBundle {
  int dim = 0;
  CMat gram;
  std::vector<RMat> probs;
  std::vector<std::string> gate_labels;
  std::uint64_t shots_per_setting = kInfiniteShots;
  std::uint64_t gram_shots = kInfiniteShots;
  std::uint64_t seed = 0;

  struct Truth {
    CMat a_star;
    CMat b_star;
    std::vector<CMat> e_star;
    std::vector<CMat> l_star;  // may be empty when generators are unknown
  };
  std::optional<Truth> truth;
};

TomographyBundle simulate_gateset(const std::vector<SuperOp>& e_stars,
                                  const FiducialSet& fid_star,
                                  const std::vector<std::string>& labels, std::uint64_t shots,
                                  std::uint64_t gram_shots, std::uint64_t seed);

}  // namespace lindfit

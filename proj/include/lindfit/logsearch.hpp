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
#include <utility>
#include <vector>

#include "lindfit/lindblad.hpp"
#include "lindfit/parallel.hpp"
#include "lindfit/superop.hpp"

namespace lindfit {

// Integer logarithm-branch choice, one shift per eigenvalue index.
struct BranchVector {
  Eigen::VectorXi m;
};

// Partition of eigenvalue indices into approximate degenerate eigenspaces,
// with oblique projectors Π_k = Σ_{j∈C_k} |r_j⟩⟩⟨⟨l_j|.
struct ClusterSet {
  std::vector<std::vector<int>> clusters;
  std::vector<int> ranks;
  std::vector<CMat> projectors;  // filled by attach_projectors

  int count() const { return static_cast<int>(clusters.size()); }
};

// Single-linkage transitive closure of |μ_i − μ_j| ≤ β.
ClusterSet cluster_eigenvalues(const CVec& mus, double beta);
void attach_projectors(ClusterSet& cs, const EigenSystem& sys);

// β = 0 unless eigenvalues sit within 0.3 rad of the negative real axis,
// in which case β is the diameter of that group plus 10%.
double default_beta(const CVec& mus);

// Multiset closure under complex conjugation within tol (perfect matching,
// self-pairing allowed for near-real values).
bool conjugation_closed(const CVec& values, double tol);

// Smallest tolerance at which the multiset closes (bottleneck pairing
// distance); zero for exactly conjugate-symmetric spectra.
double closure_deficiency(const CVec& values);

// All branch vectors with entries in {−m_max..m_max}, constant within each
// cluster, whose shifted log-spectrum is conjugation-closed. Sorted by
// (Σ|m_j|, lexicographic), so the principal branch comes first when present.
std::vector<BranchVector> enumerate_branches(
    const ClusterSet& clusters, const CVec& principal_logs, int m_max,
    double pairing_tol = 1e-7,
    double im_bound = std::numeric_limits<double>::infinity());

// Assignment of model eigenvectors to cluster projectors by min-cost max-flow
// with integer weights ⌊10⁴·‖v_j − Π_k v_j‖⌋; cost-ties resolve to the
// lowest-index assignment.
struct FlowAssignment {
  std::vector<std::vector<int>> per_cluster;  // |C′_k| = rank(Π_k), ascending
  std::int64_t cost = 0;
};
FlowAssignment assign_eigenvectors_flow(const std::vector<CVec>& vectors,
                                        const ClusterSet& clusters);

struct SearchOptions {
  int m_max = 1;
  double beta = -1.0;  // < 0 selects the default_beta heuristic
  int depth = 8;       // T, max iterations of the core subroutine
  int starts = 1;      // N perturbed starts per branch
  std::uint64_t seed = 0;
  double pairing_tol = 1e-7;
  double perturb_magnitude = 0.05;
  double prune_margin = kPi / 2;  // skip branches with 2π‖m‖ > 2‖L0‖ + margin
  double prune_bound = -1.0;      // > 0 overrides the bound entirely
  double im_margin = 0.5;         // per-eigenvalue cap |Im λ̂| ≤ π + im_margin
  double cond_threshold = 1e8;
  ExecMode exec = ExecMode::Parallel;
  ProjectionOptions projection;
};

struct FitResult {
  Lindbladian L_est;
  double residual = 0.0;  // ‖exp(L_est) − E‖
  BranchVector branch;
  std::uint64_t perturbation_seed = 0;
  int iterations_used = 0;
};

// Enumerate branches of log(E), project each onto the cone, return the branch
// minimizing ‖e^L − E‖.
FitResult convex_solve(const SuperOp& e, int m_max);
FitResult convex_solve(const SuperOp& e, const SearchOptions& opts);

// One perturbed start: alternate eigenvector re-assignment against the data
// eigenspaces with projection back onto the cone, keeping strictly improving
// iterates. Returns nullopt when no projected iterate was accepted.
struct ApCoreResult {
  SuperOp l;
  double residual = 0.0;
  int iterations = 0;
};
std::optional<ApCoreResult> ap_core(const CMat& l0_tilde, int depth, const CVec& shifted_logs,
                                    const ClusterSet& clusters, const SuperOp& e,
                                    LindbladProjector& projector, double cond_threshold,
                                    std::vector<double>* residual_trace = nullptr);

FitResult alternating_projections(const SuperOp& e, const SuperOp& l0, double beta, int depth,
                                  int starts, std::uint64_t seed);
FitResult alternating_projections(const SuperOp& e, const SuperOp& l0,
                                  const SearchOptions& opts);

// (‖e^L − E‖ ≤ ‖E − E*‖, ‖e^L − E*‖ ≤ ‖E − E*‖)
std::pair<bool, bool> success_criteria(const Lindbladian& l, const SuperOp& e,
                                       const SuperOp& e_star);

}  // namespace lindfit

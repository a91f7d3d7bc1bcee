// Test-only reference implementations, kept independent of the library's
// solver paths so they can act as oracles.
#pragma once

#include <vector>

#include "lindfit/logsearch.hpp"
#include "lindfit/superop.hpp"
#include "lindfit/types.hpp"

namespace lindfit::testing {

// Cyclic Dykstra over {Hermitian Choi} ∩ {ccp} ∩ {TP affine}.
SuperOp dykstra_project_lindbladian(const SuperOp& x, int max_sweeps = 200000,
                                    double tol = 1e-9);

// High-precision CPTP projection (PSD Choi ∩ TP) by the same scheme.
SuperOp dykstra_project_cptp(const SuperOp& x, int max_sweeps = 200000, double tol = 1e-11);

// Exhaustive minimum assignment cost over all ways of distributing vectors
// into cluster slots, using the integerized flow weights.
std::int64_t brute_force_assignment_cost(const std::vector<CVec>& vectors,
                                         const ClusterSet& clusters);

// Exhaustive minimum over permutations of Σ ⌊10⁴·cost⌋.
std::int64_t brute_force_matching_cost(const std::vector<std::vector<double>>& cost);

// Deterministic random test matrices.
CMat random_complex(int rows, int cols, std::uint64_t seed, double scale = 1.0);
SuperOp random_lindbladian(int d, std::uint64_t seed, double scale = 0.3);

}  // namespace lindfit::testing

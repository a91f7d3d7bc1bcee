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

#include "lindfit/lindblad.hpp"
#include "lindfit/logsearch.hpp"
#include "lindfit/tomosim.hpp"

namespace lindfit {

// Near-physical gauge: columns of B near-density-matrices, rows of A = g̃B⁻¹
// near-effects, all within slack.
struct GaugeCandidate {
  CMat b;
  double slack = 1e-3;
  bool stalled = false;
};

// Numerically stabilized ln(Σ e^{x_i}).
double lse(const std::vector<double>& xs, double t);

// Per-gate residuals ‖B g̃⁻¹ P̃_i B⁻¹ − X_i‖ for fixed channels X_i.
std::vector<double> gate_residuals(const CMat& b, const CMat& gram,
                                   const std::vector<RMat>& probs,
                                   const std::vector<CMat>& exp_l);

double f_max(const CMat& b, const std::vector<Lindbladian>& ls, const TomographyBundle& bundle);
double h_objective(const CMat& b, const std::vector<Lindbladian>& ls,
                   const TomographyBundle& bundle, double t);

// Worst constraint violations for B columns (Hermiticity, trace, positivity)
// and A rows (Hermiticity, eigenvalue range [0,1]).
struct PhysicalityReport {
  struct Entry {
    double hermitian = 0.0;
    double trace_dev = 0.0;
    double eig_low = 0.0;
    double eig_high = 0.0;
    double worst() const;
  };
  std::vector<Entry> columns;
  std::vector<Entry> rows;
  double worst = 0.0;
  bool pass(double slack) const { return worst <= slack; }
};
PhysicalityReport check_physicality(const CMat& b, const CMat& gram, double slack);

// Similarity conjugation E ↦ B·E·B⁻¹ moving a channel between gauges.
SuperOp gauge_transform(const SuperOp& e, const CMat& b);

// Local constrained minimization of h over B with L fixed: projected gradient
// descent accepting only slack-feasible iterates. A stall on the first
// iteration returns B0 flagged.
GaugeCandidate optimize_gauge(const GaugeCandidate& b0, const std::vector<Lindbladian>& ls,
                              const TomographyBundle& bundle, double t, int budget);

// Analytic Euclidean gradient of h with respect to B (step B ← B − η·W†).
CMat gauge_gradient(const CMat& b, const CMat& gram, const std::vector<RMat>& probs,
                    const std::vector<CMat>& exp_l, double t);

enum class FitterKind { Auto, Convex, AlternatingProjections };

enum class FlipFlopOrder { LindbladFirst, GaugeFirst };

struct FlipFlopConfig {
  FlipFlopOrder order = FlipFlopOrder::LindbladFirst;
  int iterations = 3;
  double t = 50.0;
  double slack = 1e-3;
  std::vector<FitterKind> fitters;  // per gate; empty = Auto for all
  SearchOptions search;             // fit parameters (starts, depth, m_max, seed, ...)
  int gauge_budget = 200;
  double min_rel_improvement = 1e-4;
};

struct FlipFlopResult {
  CMat b;
  CMat a;  // g̃ B⁻¹
  std::vector<Lindbladian> ls;
  std::vector<double> h_history;  // recorded after every half-step
  std::vector<std::vector<double>> fidelity_trace;  // per iteration, per gate F_avg
  int iterations_run = 0;
  bool gauge_stalled = false;
  int fit_failures = 0;
};

FlipFlopResult flip_flop(const TomographyBundle& bundle,
                         const std::vector<Lindbladian>& l_ideal,
                         const std::vector<SuperOp>& e_ideal, const CMat& b_ideal,
                         const FlipFlopConfig& config);

// Spectrum-based fitter selection: Alternating Projections when eigenvalues
// approach the negative real axis, Convex Solve otherwise.
FitterKind auto_fitter(const SuperOp& e);

}  // namespace lindfit

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
#include <vector>

#include "lindfit/gates.hpp"
#include "lindfit/lindblad.hpp"
#include "lindfit/rng.hpp"
#include "lindfit/tomosim.hpp"

namespace lindfit {

// The ten benchmark noise models (multi-term models carry fixed relative
// base weights; aggregate strength comes from calibrate_noise).
constexpr int kBenchmarkNoiseModelCount = 10;
const char* benchmark_noise_name(int idx);
std::vector<NoiseModel> benchmark_noise_model(int idx, Rng& rng);

// Coherent X + amplitude damping + dephasing mixture (1 : 3 : 3) used in the
// noise-strength threshold sweep.
std::vector<NoiseModel> threshold_sweep_model();

// Gate noise pool for the six-gate joint-fit benchmark: overrotation+bitflip,
// overrotation+dephasing, cohZ+ampdamp+dephasing, cohZ+bitflip,
// cohX+dephasing, with normally distributed strengths.
std::vector<NoiseModel> gateset_gate_noise(Rng& rng);

// One synthetic QPT instance: channel from a noisy generator, finite-shot
// probabilities over the Pauli fiducials, linear inversion, CPTP projection.
struct QptInstance {
  Lindbladian l_star;
  SuperOp e_star;
  SuperOp e;  // tomographic estimate
  double floor_dist;  // ‖E − E*‖
};
QptInstance simulate_qpt(const Gate& gate, const std::vector<NoiseModel>& noise,
                         std::uint64_t shots, std::uint64_t seed);

// Full six-gate joint-fit case: SPAM-afflicted fiducials, per-gate noise from
// the pool, finite-shot bundle with ground truth attached.
struct GateSetCase {
  std::vector<std::string> labels;
  std::vector<Lindbladian> l_ideal;
  std::vector<SuperOp> e_ideal;
  std::vector<Lindbladian> l_star;
  FiducialSet fid_ideal;
  FiducialSet fid_star;
  TomographyBundle bundle;
};
GateSetCase make_gateset_case(std::uint64_t seed, std::uint64_t shots = 10000,
                              std::uint64_t gram_shots = 100000);

}  // namespace lindfit

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

#include "lindfit/protocols.hpp"

namespace lindfit {

const char* benchmark_noise_name(int idx) {
  static const char* kNames[] = {
      "overrotation",          "cohX",           "bitflip",
      "cohX+dephasing",        "cohX+ampdamp+bitflip",
      "ampdamp",               "cohZ",           "dephasing",
      "cohZ+bitflip",          "cohZ+ampdamp+dephasing",
  };
  if (idx < 0 || idx >= kBenchmarkNoiseModelCount)
    throw ParseError("benchmark_noise_name: index out of range");
  return kNames[idx];
}

std::vector<NoiseModel> benchmark_noise_model(int idx, Rng& rng) {
  auto q = [&] { return static_cast<int>(rng.below(2)); };
  switch (idx) {
    case 0: return {{NoiseKind::Overrotation, 1.0, 0}};
    case 1: return {{NoiseKind::CoherentX, 1.0, q()}};
    case 2: return {{NoiseKind::Bitflip, 1.0, q()}};
    case 3: return {{NoiseKind::CoherentX, 1.0, q()}, {NoiseKind::Dephasing, 0.7, q()}};
    case 4:
      return {{NoiseKind::CoherentX, 1.0, q()},
              {NoiseKind::AmpDamp, 0.7, q()},
              {NoiseKind::Bitflip, 0.7, q()}};
    case 5: return {{NoiseKind::AmpDamp, 1.0, q()}};
    case 6: return {{NoiseKind::CoherentZ, 1.0, q()}};
    case 7: return {{NoiseKind::Dephasing, 1.0, q()}};
    case 8: return {{NoiseKind::CoherentZ, 1.0, q()}, {NoiseKind::Bitflip, 0.7, q()}};
    case 9:
      return {{NoiseKind::CoherentZ, 1.0, q()},
              {NoiseKind::AmpDamp, 0.7, q()},
              {NoiseKind::Dephasing, 0.7, q()}};
  }
  throw ParseError("benchmark_noise_model: index out of range");
}

std::vector<NoiseModel> threshold_sweep_model() {
  return {{NoiseKind::CoherentX, 1.0, 0},
          {NoiseKind::AmpDamp, 3.0, 0},
          {NoiseKind::Dephasing, 3.0, 1}};
}

std::vector<NoiseModel> gateset_gate_noise(Rng& rng) {
  auto q = [&] { return static_cast<int>(rng.below(2)); };
  auto s = [&](double mean) { return std::max(0.0, rng.normal(mean, mean / 5.0)); };
  switch (rng.below(5)) {
    case 0: return {{NoiseKind::Overrotation, s(0.05), 0}, {NoiseKind::Bitflip, s(0.02), q()}};
    case 1: return {{NoiseKind::Overrotation, s(0.05), 0}, {NoiseKind::Dephasing, s(0.02), q()}};
    case 2:
      return {{NoiseKind::CoherentZ, s(0.03), q()},
              {NoiseKind::AmpDamp, s(0.02), q()},
              {NoiseKind::Dephasing, s(0.02), q()}};
    case 3: return {{NoiseKind::CoherentZ, s(0.03), q()}, {NoiseKind::Bitflip, s(0.02), q()}};
    default: return {{NoiseKind::CoherentX, s(0.03), q()}, {NoiseKind::Dephasing, s(0.02), q()}};
  }
}

QptInstance simulate_qpt(const Gate& gate, const std::vector<NoiseModel>& noise,
                         std::uint64_t shots, std::uint64_t seed) {
  QptInstance out;
  const Lindbladian li = ideal_generator(gate);
  out.l_star = make_noise(noise, li);
  out.e_star = SuperOp(expm(out.l_star.op.mat), gate.dim);
  int n_qubits = 0;
  while ((1 << n_qubits) < gate.dim) ++n_qubits;
  const FiducialSet fid = pauli_fiducials(n_qubits);
  const RMat p = simulate_probabilities(out.e_star, fid, shots, seed);
  if (shots == kInfiniteShots) {
    out.e = linear_inversion(p, fid);
  } else {
    out.e = project_to_cptp(linear_inversion(p, fid));
  }
  out.floor_dist = fro_dist(out.e, out.e_star);
  return out;
}

GateSetCase make_gateset_case(std::uint64_t seed, std::uint64_t shots,
                              std::uint64_t gram_shots) {
  GateSetCase c;
  c.labels = {"CNOT", "sqrtX@I", "I@sqrtX", "T@I", "I@T", "ISWAP"};
  Rng rng(derive_seed(seed, 0x6A7E));
  std::vector<SuperOp> e_stars;
  for (const auto& name : c.labels) {
    const Gate g = make_gate(name);
    c.l_ideal.push_back(ideal_generator(g));
    c.e_ideal.push_back(ideal_transfer(g));
    c.l_star.push_back(make_noise(gateset_gate_noise(rng), c.l_ideal.back()));
    e_stars.push_back(SuperOp(expm(c.l_star.back().op.mat), 4));
  }
  c.fid_ideal = pauli_fiducials(2);
  c.fid_star = apply_spam(c.fid_ideal, SpamConfig{}, derive_seed(seed, 0x5AA5));
  c.bundle = simulate_gateset(e_stars, c.fid_star, c.labels, shots, gram_shots,
                              derive_seed(seed, 0xB0B0));
  for (const auto& l : c.l_star) c.bundle.truth->l_star.push_back(l.op.mat);
  return c;
}

}  // namespace lindfit

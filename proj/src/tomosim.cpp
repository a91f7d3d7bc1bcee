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

#include "lindfit/tomosim.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lindfit/lindblad.hpp"
#include "lindfit/rng.hpp"

namespace lindfit {

FiducialSet pauli_fiducials(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2) throw ParseError("pauli_fiducials: n_qubits must be 1 or 2");
  const int d = 1 << n_qubits;

  struct State {
    const char* label;
    CMat rho;
  };
  std::vector<State> single;
  {
    CVec zero(2), one(2), plus(2), plus_i(2);
    zero << 1, 0;
    one << 0, 1;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    plus_i << 1.0 / std::sqrt(2.0), Complex(0, 1.0 / std::sqrt(2.0));
    single.push_back({"0", zero * zero.adjoint()});
    single.push_back({"1", one * one.adjoint()});
    single.push_back({"+", plus * plus.adjoint()});
    single.push_back({"+i", plus_i * plus_i.adjoint()});
  }

  FiducialSet fid;
  fid.dim = d;
  fid.prep.resize(d * d, d * d);
  for (int j = 0; j < d * d; ++j) {
    CMat rho;
    std::string label;
    if (n_qubits == 1) {
      rho = single[j].rho;
      label = single[j].label;
    } else {
      const int j1 = j / 4, j2 = j % 4;
      rho = kron(single[j1].rho, single[j2].rho);
      label = std::string(single[j1].label) + "," + single[j2].label;
    }
    fid.prep.col(j) = vectorize(rho);
    fid.prep_labels.push_back(std::move(label));
  }

  const auto labels = pauli_labels(n_qubits);
  fid.meas.resize(d * d, d * d);
  for (int i = 0; i < d * d; ++i) {
    const CMat p = pauli_string(labels[i]);
    const CMat effect =
        (i == 0) ? CMat(CMat::Identity(d, d)) : CMat((CMat::Identity(d, d) + p) / 2.0);
    fid.meas.row(i) = vectorize(effect).adjoint();
    fid.meas_labels.push_back(labels[i]);
  }
  return fid;
}

RMat simulate_probabilities(const SuperOp& e_true, const FiducialSet& fid, std::uint64_t shots,
                            std::uint64_t seed) {
  if (shots == 0) throw ParseError("simulate_probabilities: shots must be >= 1");
  const int side = fid.dim * fid.dim;
  if (e_true.side() != side) throw DimensionError("simulate_probabilities: dimension mismatch");

  const CMat exact = fid.meas * e_true.mat * fid.prep;
  RMat p(side, side);
  Rng rng(seed);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      const Complex v = exact(i, j);
      if (v.real() < -1e-9 || v.real() > 1.0 + 1e-9 || std::abs(v.imag()) > 1e-9)
        throw NonPhysicalChannelError("simulate_probabilities: probability " +
                                      std::to_string(v.real()) + " outside [0,1]");
      const double prob = std::min(1.0, std::max(0.0, v.real()));
      if (shots == kInfiniteShots) {
        p(i, j) = prob;
      } else {
        p(i, j) = static_cast<double>(rng.binomial(shots, prob)) / static_cast<double>(shots);
      }
    }
  return p;
}

namespace {

void check_invertible(const CMat& m, const char* what) {
  Eigen::JacobiSVD<CMat> svd(m);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0.0 || svd.singularValues().maxCoeff() / smin > 1e8)
    throw SolverFailure(std::string("linear_inversion: singular ") + what);
}

}  // namespace

SuperOp linear_inversion(const RMat& p, const FiducialSet& fid) {
  check_invertible(fid.meas, "measurement matrix");
  check_invertible(fid.prep, "preparation matrix");
  const CMat e = fid.meas.inverse() * p.cast<Complex>() * fid.prep.inverse();
  return SuperOp(e, fid.dim);
}

SuperOp project_to_cptp(const SuperOp& e_tilde, int max_iters, double tol) {
  const int d = e_tilde.dim;
  const CVec w = omega_vector(d);

  auto project_psd_choi = [&](const CMat& m) {
    CMat c = gamma_involution(m);
    c = ((c + c.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(c);
    RVec ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
    return gamma_involution(
        CMat(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint()));
  };
  auto project_tp = [&](const CMat& m) -> CMat {
    return m - w * (w.adjoint() * m - w.adjoint());
  };

  CMat x = e_tilde.mat;
  CMat p_corr = CMat::Zero(x.rows(), x.cols());
  CMat q_corr = CMat::Zero(x.rows(), x.cols());
  for (int it = 0; it < max_iters; ++it) {
    const CMat y = project_psd_choi(x + p_corr);
    p_corr = x + p_corr - y;
    const CMat x_new = project_tp(y + q_corr);
    q_corr = y + q_corr - x_new;
    const double change = (x_new - x).norm();
    x = x_new;
    if (change < tol) return SuperOp(x, d);
  }
  throw SolverFailure("project_to_cptp: no convergence after " + std::to_string(max_iters) +
                      " iterations");
}

FiducialSet apply_spam(const FiducialSet& ideal, const SpamConfig& cfg, std::uint64_t seed) {
  const int d = ideal.dim;
  int n_qubits = 0;
  while ((1 << n_qubits) < d) ++n_qubits;
  const int side = d * d;

  Rng rng(seed);
  const NoiseKind kinds[] = {NoiseKind::AmpDamp, NoiseKind::Bitflip, NoiseKind::IncoherentY,
                             NoiseKind::Dephasing};
  const Lindbladian zero = Lindbladian::zero(d);

  auto draw_channel = [&](double mean, double sd) {
    NoiseModel nm;
    nm.kind = kinds[rng.below(4)];
    nm.target = static_cast<int>(rng.below(n_qubits));
    nm.strength = std::max(0.0, rng.normal(mean, sd));
    return expm(make_noise({nm}, zero).op).mat;
  };

  FiducialSet out = ideal;
  for (int j = 0; j < side; ++j)
    out.prep.col(j) = draw_channel(cfg.prep_mean, cfg.prep_sd) * ideal.prep.col(j);
  for (int i = 0; i < side; ++i)
    out.meas.row(i) = ideal.meas.row(i) * draw_channel(cfg.meas_mean, cfg.meas_sd);
  return out;
}

TomographyBundle simulate_gateset(const std::vector<SuperOp>& e_stars,
                                  const FiducialSet& fid_star,
                                  const std::vector<std::string>& labels, std::uint64_t shots,
                                  std::uint64_t gram_shots, std::uint64_t seed) {
  if (e_stars.size() != labels.size())
    throw DimensionError("simulate_gateset: labels/gates size mismatch");
  TomographyBundle bundle;
  bundle.dim = fid_star.dim;
  bundle.gate_labels = labels;
  bundle.shots_per_setting = shots;
  bundle.gram_shots = gram_shots;
  bundle.seed = seed;

  bundle.gram = simulate_probabilities(SuperOp::identity(fid_star.dim), fid_star, gram_shots,
                                       derive_seed(seed, 0xABCDull))
                    .cast<Complex>();
  for (size_t i = 0; i < e_stars.size(); ++i)
    bundle.probs.push_back(
        simulate_probabilities(e_stars[i], fid_star, shots, derive_seed(seed, 0x1000ull + i)));

  TomographyBundle::Truth truth;
  truth.a_star = fid_star.meas;
  truth.b_star = fid_star.prep;
  for (const auto& e : e_stars) truth.e_star.push_back(e.mat);
  bundle.truth = std::move(truth);
  return bundle;
}

}  // namespace lindfit

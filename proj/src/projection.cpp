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

#include <cmath>

#include <Eigen/Eigenvalues>

#include "lindfit/lindblad.hpp"

namespace lindfit {

namespace {

CMat partial_trace_first(const CMat& c, int d) {
  CMat out = CMat::Zero(d, d);
  for (int j = 0; j < d; ++j) out += c.block(j * d, j * d, d, d);
  return out;
}

// Joint projection onto {C Hermitian} ∩ {Tr₁C = 0}; the two orthogonal
// projections commute, so composing them is exact.
CMat project_linear(const CMat& c, int d) {
  CMat h = (c + c.adjoint()) / 2.0;
  const CMat t = partial_trace_first(h, d) / static_cast<double>(d);
  for (int j = 0; j < d; ++j) h.block(j * d, j * d, d, d) -= t;
  return h;
}

CMat project_ccp(const CMat& c, const CMat& q) {
  CMat b = q.adjoint() * c * q;
  CMat bh = (b + b.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(bh);
  RVec ev = es.eigenvalues();
  if (ev.minCoeff() >= 0.0 && (b - bh).norm() == 0.0) return c;
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  const CMat clipped = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return c + q * (clipped - b) * q.adjoint();
}

}  // namespace

LindbladProjector::LindbladProjector(int d, ProjectionOptions opts)
    : d_(d), opts_(opts), q_(omega_complement_basis(d)) {}

void LindbladProjector::reset() { warm_ = false; }

SuperOp LindbladProjector::project(const SuperOp& x) {
  if (x.dim != d_) throw DimensionError("LindbladProjector: dimension mismatch");
  {
    ConeResiduals r = lindbladian_residuals(x);
    if (r.max() <= 1e-11 * std::max(1.0, x.mat.norm())) {
      last_iterations_ = 0;
      return x;
    }
  }

  const CMat cx = gamma_involution(x.mat);
  const double scale = std::max(1.0, cx.norm());
  const double t = opts_.step;
  const double relax = 1.8;

  if (!warm_) {
    z_ = cx;
    warm_ = true;
  }

  CMat y, w;
  int it = 0;
  for (; it < opts_.max_iters; ++it) {
    y = project_linear((t * cx + z_) / (1.0 + t), d_);
    w = project_ccp(2.0 * y - z_, q_);
    const double res = (w - y).norm();
    z_ += relax * (w - y);
    if (res <= opts_.tol * scale) break;
  }
  last_iterations_ = it + 1;
  if (it >= opts_.max_iters)
    throw SolverFailure("LindbladProjector: no convergence after " +
                        std::to_string(opts_.max_iters) + " iterations");
  return SuperOp(gamma_involution(y), d_);
}

Lindbladian project_to_lindbladian(const SuperOp& x, const ProjectionOptions& opts) {
  LindbladProjector proj(x.dim, opts);
  return Lindbladian::certify(proj.project(x), 1e-6);
}

}  // namespace lindfit

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

#include "lindfit/gates.hpp"

#include <cmath>

namespace lindfit {

namespace {

Gate from_basis(std::string name, CMat v, RVec theta) {
  Gate g;
  g.name = std::move(name);
  g.dim = static_cast<int>(v.rows());
  g.eigvecs = std::move(v);
  g.eigphases = std::move(theta);
  CVec phases(g.dim);
  for (int a = 0; a < g.dim; ++a) phases(a) = std::exp(Complex(0, g.eigphases(a)));
  g.unitary = g.eigvecs * phases.asDiagonal() * g.eigvecs.adjoint();
  return g;
}

Gate one_qubit(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  CMat v(2, 2);
  RVec theta(2);
  if (name == "I") {
    v = CMat::Identity(2, 2);
    theta << 0, 0;
  } else if (name == "X") {
    v << r, r, r, -r;
    theta << 0, kPi;
  } else if (name == "Y") {
    v << r, r, Complex(0, r), Complex(0, -r);
    theta << 0, kPi;
  } else if (name == "Z") {
    v = CMat::Identity(2, 2);
    theta << 0, kPi;
  } else if (name == "H") {
    const double c = std::cos(kPi / 8), s = std::sin(kPi / 8);
    v << c, -s, s, c;
    theta << 0, kPi;
  } else if (name == "T") {
    v = CMat::Identity(2, 2);
    theta << 0, kPi / 4;
  } else if (name == "sqrtX") {
    v << r, r, r, -r;
    theta << 0, kPi / 2;
  } else {
    throw ParseError("unknown 1-qubit gate '" + name + "'");
  }
  return from_basis(name, std::move(v), std::move(theta));
}

double wrap_phase(double x) {
  while (x > kPi) x -= 2.0 * kPi;
  while (x <= -kPi) x += 2.0 * kPi;
  return x;
}

Gate tensor(const Gate& a, const Gate& b) {
  CMat v = kron(a.eigvecs, b.eigvecs);
  RVec theta(a.dim * b.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < b.dim; ++j)
      theta(i * b.dim + j) = wrap_phase(a.eigphases(i) + b.eigphases(j));
  return from_basis(a.name + "@" + b.name, std::move(v), std::move(theta));
}

}  // namespace

Gate make_gate(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "CNOT") {
    CMat v = CMat::Zero(4, 4);
    v(0, 0) = 1;
    v(1, 1) = 1;
    v(2, 2) = r;
    v(3, 2) = r;
    v(2, 3) = r;
    v(3, 3) = -r;
    RVec theta(4);
    theta << 0, 0, 0, kPi;
    return from_basis(name, std::move(v), std::move(theta));
  }
  if (name == "ISWAP") {
    CMat v = CMat::Zero(4, 4);
    v(0, 0) = 1;
    v(1, 1) = r;
    v(2, 1) = r;
    v(1, 2) = r;
    v(2, 2) = -r;
    v(3, 3) = 1;
    RVec theta(4);
    theta << 0, kPi / 2, -kPi / 2, 0;
    return from_basis(name, std::move(v), std::move(theta));
  }
  if (name.rfind("RZX(", 0) == 0 || name.rfind("RZZ(", 0) == 0) {
    if (name.back() != ')') throw ParseError("malformed gate '" + name + "'");
    double angle = 0;
    try {
      angle = std::stod(name.substr(4, name.size() - 5));
    } catch (...) {
      throw ParseError("malformed angle in '" + name + "'");
    }
    RVec theta(4);
    theta << wrap_phase(-angle / 2), wrap_phase(angle / 2), wrap_phase(angle / 2),
        wrap_phase(-angle / 2);
    CMat v;
    if (name[2] == 'X') {
      // eigenbasis of Z⊗X: |0+⟩,|0−⟩,|1+⟩,|1−⟩ with eigenvalues +1,−1,−1,+1
      v = CMat::Zero(4, 4);
      v(0, 0) = r;
      v(1, 0) = r;
      v(0, 1) = r;
      v(1, 1) = -r;
      v(2, 2) = r;
      v(3, 2) = r;
      v(2, 3) = r;
      v(3, 3) = -r;
    } else {
      v = CMat::Identity(4, 4);
    }
    return from_basis(name, std::move(v), std::move(theta));
  }
  const auto at = name.find('@');
  if (at != std::string::npos)
    return tensor(one_qubit(name.substr(0, at)), one_qubit(name.substr(at + 1)));
  return one_qubit(name);
}

SuperOp ideal_transfer(const Gate& g) { return transfer_from_unitary(g.unitary); }

namespace {

// Eigenphases re-read inside one arc of length ≤ π, so that pairwise
// differences stay principal and come from a single Hamiltonian.
RVec unwrap_into_arc(const RVec& theta) {
  const int n = static_cast<int>(theta.size());
  for (int a = 0; a < n; ++a) {
    const double start = theta(a);
    RVec out(n);
    double span = 0.0;
    for (int b = 0; b < n; ++b) {
      double rel = theta(b) - start;
      while (rel < 0.0) rel += 2.0 * kPi;
      while (rel >= 2.0 * kPi) rel -= 2.0 * kPi;
      out(b) = start + rel;
      span = std::max(span, rel);
    }
    if (span <= kPi + 1e-12) return out;
  }
  throw SolverFailure("ideal_generator: eigenphases span more than a half circle");
}

}  // namespace

Lindbladian ideal_generator(const Gate& g) {
  const RVec arc = unwrap_into_arc(g.eigphases);
  CVec minus_theta(g.dim);
  for (int a = 0; a < g.dim; ++a) minus_theta(a) = -arc(a);
  const CMat h = g.eigvecs * minus_theta.asDiagonal() * g.eigvecs.adjoint();
  return Lindbladian::certify(hamiltonian_superop(h), 1e-9);
}

double theorem1_threshold(const Gate& g) {
  const RVec arc = unwrap_into_arc(g.eigphases);
  return kPi - (arc.maxCoeff() - arc.minCoeff());
}

}  // namespace lindfit

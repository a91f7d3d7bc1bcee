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

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace lindfit {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

// Base for all library errors; the CLI maps subclasses onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};
// Eigenvector matrix condition exceeded the diagonalizability threshold.
struct DefectiveMatrixError : Error {
  using Error::Error;
};
struct SolverFailure : Error {
  using Error::Error;
};
struct NoCandidateError : Error {
  using Error::Error;
};
struct NonPhysicalChannelError : Error {
  using Error::Error;
};
struct InfeasibleFlowError : Error {
  using Error::Error;
};
struct NotQuiteLindbladianError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// d²×d² matrix of a linear map on vectorized d×d density operators.
// Channels E, logarithms A and Lindbladians L all use this carrier.
struct SuperOp {
  CMat mat;
  int dim = 0;  // Hilbert-space dimension d; mat is d²×d²

  SuperOp() = default;
  SuperOp(CMat m, int d) : mat(std::move(m)), dim(d) {
    if (mat.rows() != mat.cols() || mat.rows() != dim * dim)
      throw DimensionError("SuperOp: matrix must be d²×d² with d=" + std::to_string(d));
  }
  explicit SuperOp(CMat m) : mat(std::move(m)) {
    const int side = static_cast<int>(mat.rows());
    if (mat.cols() != side) throw DimensionError("SuperOp: matrix must be square");
    int d = 1;
    while (d * d < side) ++d;
    if (d * d != side) throw DimensionError("SuperOp: side must be a perfect square");
    dim = d;
  }

  int side() const { return dim * dim; }

  static SuperOp identity(int d) { return SuperOp(CMat::Identity(d * d, d * d), d); }
};

inline double fro_norm(const CMat& m) { return m.norm(); }
inline double fro_dist(const CMat& a, const CMat& b) { return (a - b).norm(); }
inline double fro_dist(const SuperOp& a, const SuperOp& b) { return (a.mat - b.mat).norm(); }

}  // namespace lindfit

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

#include "lindfit/gateset.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lindfit/rng.hpp"

namespace lindfit {

double lse(const std::vector<double>& xs, double t) {
  if (xs.empty()) throw ParseError("lse: empty input");
  if (t <= 0.0) throw ParseError("lse: t must be > 0");
  double xmax = xs.front();
  for (double x : xs) xmax = std::max(xmax, x);
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - xmax);
  const double out = xmax + std::log(sum);
  // sandwich: max ≤ LSE ≤ max + ln k
  assert(out >= xmax - 1e-12 && out <= xmax + std::log(double(xs.size())) + 1e-12);
  return out;
}

std::vector<double> gate_residuals(const CMat& b, const CMat& gram,
                                   const std::vector<RMat>& probs,
                                   const std::vector<CMat>& exp_l) {
  const Eigen::PartialPivLU<CMat> b_lu(b);
  const CMat b_inv = b_lu.inverse();
  const CMat gram_inv = gram.inverse();
  std::vector<double> out;
  out.reserve(probs.size());
  for (size_t i = 0; i < probs.size(); ++i)
    out.push_back((b * gram_inv * probs[i].cast<Complex>() * b_inv - exp_l[i]).norm());
  return out;
}

namespace {

std::vector<CMat> exponentials(const std::vector<Lindbladian>& ls) {
  std::vector<CMat> out;
  out.reserve(ls.size());
  for (const auto& l : ls) out.push_back(expm(l.op.mat));
  return out;
}

}  // namespace

double f_max(const CMat& b, const std::vector<Lindbladian>& ls, const TomographyBundle& bundle) {
  const auto r = gate_residuals(b, bundle.gram, bundle.probs, exponentials(ls));
  return *std::max_element(r.begin(), r.end());
}

double h_objective(const CMat& b, const std::vector<Lindbladian>& ls,
                   const TomographyBundle& bundle, double t) {
  auto r = gate_residuals(b, bundle.gram, bundle.probs, exponentials(ls));
  for (double& x : r) x *= t;
  return lse(r, t) / t;
}

double PhysicalityReport::Entry::worst() const {
  return std::max(std::max(hermitian, trace_dev), std::max(eig_low, eig_high));
}

PhysicalityReport check_physicality(const CMat& b, const CMat& gram, double /*slack*/) {
  const int side = static_cast<int>(b.rows());
  PhysicalityReport rep;

  Eigen::JacobiSVD<CMat> svd(b);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0.0 || svd.singularValues().maxCoeff() / smin > 1e10)
    throw SolverFailure("check_physicality: singular B, A unconstructible");
  const CMat a = gram * b.inverse();

  for (int j = 0; j < side; ++j) {
    const CMat m = unvectorize(b.col(j));
    PhysicalityReport::Entry e;
    e.hermitian = 0.5 * (m - m.adjoint()).norm();
    e.trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    e.eig_low = std::max(0.0, -es.eigenvalues().minCoeff());
    rep.columns.push_back(e);
    rep.worst = std::max(rep.worst, e.worst());
  }
  for (int i = 0; i < side; ++i) {
    const CMat m = unvectorize(CVec(a.row(i).adjoint()));
    PhysicalityReport::Entry e;
    e.hermitian = 0.5 * (m - m.adjoint()).norm();
    Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    e.eig_low = std::max(0.0, -es.eigenvalues().minCoeff());
    e.eig_high = std::max(0.0, es.eigenvalues().maxCoeff() - 1.0);
    rep.rows.push_back(e);
    rep.worst = std::max(rep.worst, e.worst());
  }
  return rep;
}

SuperOp gauge_transform(const SuperOp& e, const CMat& b) {
  Eigen::JacobiSVD<CMat> svd(b);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0.0 || svd.singularValues().maxCoeff() / smin > 1e10)
    throw SolverFailure("gauge_transform: singular gauge");
  return SuperOp(b * e.mat * b.inverse(), e.dim);
}

CMat gauge_gradient(const CMat& b, const CMat& gram, const std::vector<RMat>& probs,
                    const std::vector<CMat>& exp_l, double t) {
  const CMat b_inv = b.inverse();
  const CMat gram_inv = gram.inverse();
  const size_t k = probs.size();

  std::vector<CMat> m_hat(k);
  std::vector<double> r(k);
  std::vector<CMat> g(k);
  for (size_t i = 0; i < k; ++i) {
    g[i] = gram_inv * probs[i].cast<Complex>();
    const CMat m = b * g[i] * b_inv - exp_l[i];
    r[i] = m.norm();
    m_hat[i] = m / std::max(r[i], 1e-300);
  }
  // softmax weights of (1/t)·LSE(t·r)
  double rmax = *std::max_element(r.begin(), r.end());
  double z = 0.0;
  for (double x : r) z += std::exp(t * (x - rmax));
  CMat w = CMat::Zero(b.rows(), b.cols());
  for (size_t i = 0; i < k; ++i) {
    const double weight = std::exp(t * (r[i] - rmax)) / z;
    const CMat gbinv = g[i] * b_inv;
    w += weight * (gbinv * m_hat[i].adjoint() -
                   b_inv * m_hat[i].adjoint() * (b * gbinv));
  }
  return w;
}

namespace {

// Summed violation beyond the slack band. Statistical noise in g̃ keeps this
// positive for every gauge at tight slack, so feasibility is judged relative
// to the incumbent: a step may never grow the excess.
double slack_excess(const PhysicalityReport& rep, double slack) {
  double ex = 0.0;
  for (const auto& e : rep.columns) ex += std::max(0.0, e.worst() - slack);
  for (const auto& e : rep.rows) ex += std::max(0.0, e.worst() - slack);
  return ex;
}

}  // namespace

GaugeCandidate optimize_gauge(const GaugeCandidate& b0, const std::vector<Lindbladian>& ls,
                              const TomographyBundle& bundle, double t, int budget) {
  const auto exp_l = exponentials(ls);
  const double slack = b0.slack;

  auto excess_of = [&](const CMat& b) -> double {
    Eigen::JacobiSVD<CMat> svd(b);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0 || svd.singularValues().maxCoeff() / smin > 1e8)
      return std::numeric_limits<double>::infinity();
    return slack_excess(check_physicality(b, bundle.gram, slack), slack);
  };
  auto objective = [&](const CMat& b) {
    auto r = gate_residuals(b, bundle.gram, bundle.probs, exp_l);
    for (double& x : r) x *= t;
    return lse(r, t) / t;
  };

  // Penalized descent: the optimizer may trade small violation increases for
  // objective decreases along the way, but the returned gauge must both
  // improve h and stay within the starting excess, so the flip-flop history
  // contracts hold.
  const double penalty = 2.0;
  CMat b = b0.b;
  double fb = objective(b);
  double excess = excess_of(b);
  const double excess0 = excess;
  double merit = fb + penalty * excess;

  CMat b_best = b;
  double h_best = fb;
  bool ever_accepted = false;

  double eta = -1.0;
  for (int iter = 0; iter < budget; ++iter) {
    const CMat w = gauge_gradient(b, bundle.gram, bundle.probs, exp_l, t);
    const double wn = w.norm();
    if (wn < 1e-12) break;
    if (eta <= 0.0) eta = 0.02 * b.norm() / wn;

    bool accepted = false;
    double step = eta;
    for (int bt = 0; bt < 40; ++bt) {
      const CMat cand = b - step * w.adjoint();
      const double cand_excess = excess_of(cand);
      if (std::isfinite(cand_excess)) {
        const double fc = objective(cand);
        const double cand_merit = fc + penalty * cand_excess;
        if (cand_merit < merit - 1e-12) {
          b = cand;
          fb = fc;
          excess = cand_excess;
          merit = cand_merit;
          eta = step * 2.0;
          accepted = true;
          if (excess <= excess0 + 1e-12 && fb < h_best - 1e-12) {
            b_best = b;
            h_best = fb;
            ever_accepted = true;
          }
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  GaugeCandidate out;
  out.b = b_best;
  out.slack = slack;
  out.stalled = !ever_accepted;
  return out;
}

FitterKind auto_fitter(const SuperOp& e) {
  Eigen::ComplexEigenSolver<CMat> es(e.mat, false);
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
    if (kPi - std::abs(std::arg(es.eigenvalues()(j))) < 0.3)
      return FitterKind::AlternatingProjections;
  return FitterKind::Convex;
}

FlipFlopResult flip_flop(const TomographyBundle& bundle,
                         const std::vector<Lindbladian>& l_ideal,
                         const std::vector<SuperOp>& e_ideal, const CMat& b_ideal,
                         const FlipFlopConfig& config) {
  const size_t k = bundle.probs.size();
  if (l_ideal.size() != k || e_ideal.size() != k)
    throw DimensionError("flip_flop: gate count mismatch");
  const int d = bundle.dim;

  FlipFlopResult res;
  res.b = b_ideal;
  res.ls = l_ideal;
  const CMat gram_inv = bundle.gram.inverse();

  std::vector<FitterKind> fitters =
      config.fitters.empty() ? std::vector<FitterKind>(k, FitterKind::Auto) : config.fitters;
  if (fitters.size() != k) throw DimensionError("flip_flop: fitter list size mismatch");

  auto record_h = [&] { res.h_history.push_back(h_objective(res.b, res.ls, bundle, config.t)); };
  auto record_fidelity = [&] {
    std::vector<double> f;
    for (size_t i = 0; i < k; ++i)
      f.push_back(avg_gate_fidelity(e_ideal[i], SuperOp(expm(res.ls[i].op.mat), d)));
    res.fidelity_trace.push_back(std::move(f));
  };

  auto lindblad_step = [&](int iteration) {
    for (size_t i = 0; i < k; ++i) {
      const SuperOp e_i(CMat(res.b * gram_inv * bundle.probs[i].cast<Complex>() *
                             res.b.inverse()),
                        d);
      const double res_old = (expm(res.ls[i].op.mat) - e_i.mat).norm();
      SearchOptions opts = config.search;
      opts.seed = derive_seed(config.search.seed, 0xF17 + i, iteration);
      FitterKind kind = fitters[i];
      if (kind == FitterKind::Auto) kind = auto_fitter(e_i);
      try {
        FitResult fit = (kind == FitterKind::Convex)
                            ? convex_solve(e_i, opts)
                            : alternating_projections(e_i, res.ls[i].op, opts);
        if (fit.residual < res_old) res.ls[i] = fit.L_est;
      } catch (const Error&) {
        ++res.fit_failures;  // keep the previous Lindbladian
      }
    }
  };
  auto gauge_step = [&] {
    GaugeCandidate cand{res.b, config.slack, false};
    cand = optimize_gauge(cand, res.ls, bundle, config.t, config.gauge_budget);
    res.b = cand.b;
    res.gauge_stalled = res.gauge_stalled || cand.stalled;
  };

  record_h();
  record_fidelity();
  for (int it = 0; it < config.iterations; ++it) {
    const double h_before = res.h_history.back();
    if (config.order == FlipFlopOrder::LindbladFirst) {
      lindblad_step(it);
      record_h();
      gauge_step();
      record_h();
    } else {
      gauge_step();
      record_h();
      lindblad_step(it);
      record_h();
    }
    record_fidelity();
    res.iterations_run = it + 1;
    const double h_after = res.h_history.back();
    if (h_before - h_after < config.min_rel_improvement * std::max(1e-12, h_before)) break;
  }
  if (config.order == FlipFlopOrder::LindbladFirst) {
    // refresh the generators against the final gauge so the returned pair is
    // self-consistent
    lindblad_step(config.iterations);
    record_h();
    record_fidelity();
  }
  res.a = bundle.gram * res.b.inverse();
  return res;
}

}  // namespace lindfit

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

#include "lindfit/logsearch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "lindfit/flow.hpp"
#include "lindfit/rng.hpp"

namespace lindfit {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

FlowCost ipow(FlowCost base, int e) {
  FlowCost r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

ClusterSet cluster_eigenvalues(const CVec& mus, double beta) {
  if (beta < 0.0) throw ParseError("cluster_eigenvalues: beta must be >= 0");
  const int n = static_cast<int>(mus.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(mus(i) - mus(j)) <= beta) uf.unite(i, j);

  ClusterSet cs;
  std::vector<int> root_to_cluster(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_to_cluster[r] < 0) {
      root_to_cluster[r] = cs.count();
      cs.clusters.emplace_back();
    }
    cs.clusters[root_to_cluster[r]].push_back(i);
  }
  for (const auto& c : cs.clusters) cs.ranks.push_back(static_cast<int>(c.size()));
  return cs;
}

void attach_projectors(ClusterSet& cs, const EigenSystem& sys) {
  cs.projectors.clear();
  for (const auto& c : cs.clusters) {
    CMat p = CMat::Zero(sys.right.rows(), sys.right.rows());
    for (int j : c) p += sys.right.col(j) * sys.left.row(j);
    cs.projectors.push_back(std::move(p));
  }
}

double default_beta(const CVec& mus) {
  std::vector<Complex> group;
  for (Eigen::Index j = 0; j < mus.size(); ++j)
    if (kPi - std::abs(std::arg(mus(j))) < 0.3) group.push_back(mus(j));
  if (group.size() < 2) return 0.0;
  double diam = 0.0;
  for (size_t i = 0; i < group.size(); ++i)
    for (size_t j = i + 1; j < group.size(); ++j)
      diam = std::max(diam, std::abs(group[i] - group[j]));
  return 1.1 * diam;
}

double closure_deficiency(const CVec& values) {
  double lo = 0.0, hi = 16.0;
  if (conjugation_closed(values, 0.0)) return 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = (lo + hi) / 2.0;
    if (conjugation_closed(values, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

bool conjugation_closed(const CVec& values, double tol) {
  const int n = static_cast<int>(values.size());
  // Kuhn matching on the compatibility graph i → j iff λ_i ≈ conj(λ_j).
  std::vector<std::vector<int>> ok(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(values(i) - std::conj(values(j))) <= tol) ok[i].push_back(j);

  std::vector<int> match(n, -1);
  std::vector<char> used;
  auto augment = [&](auto&& self, int i) -> bool {
    for (int j : ok[i]) {
      if (used[j]) continue;
      used[j] = 1;
      if (match[j] < 0 || self(self, match[j])) {
        match[j] = i;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    used.assign(n, 0);
    if (!augment(augment, i)) return false;
  }
  return true;
}

std::vector<BranchVector> enumerate_branches(const ClusterSet& clusters,
                                             const CVec& principal_logs, int m_max,
                                             double pairing_tol, double im_bound) {
  if (m_max < 0) throw ParseError("enumerate_branches: m_max must be >= 0");
  const int n = clusters.count();
  const int side = static_cast<int>(principal_logs.size());

  // Cluster representatives in channel space; conjugate partners pair up
  // clusters whose spectra are mirror images.
  std::vector<Complex> rep(n);
  for (int k = 0; k < n; ++k) {
    Complex s = 0.0;
    for (int j : clusters.clusters[k]) s += std::exp(principal_logs(j));
    rep[k] = s / static_cast<double>(clusters.clusters[k].size());
  }
  std::vector<int> partner(n);
  {
    std::vector<std::vector<FlowCost>> cost(n, std::vector<FlowCost>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cost[i][j] = static_cast<FlowCost>(
            std::floor(1e12 * std::abs(std::conj(rep[i]) - rep[j])));
    partner = hungarian(cost);
  }

  // Orbits of the partner involution: 2-cycles take opposite shifts, fixed
  // points (and members of degenerate longer cycles) shift freely.
  struct Orbit {
    int a = -1, b = -1;  // b < 0: free single cluster
  };
  std::vector<Orbit> orbits;
  std::vector<char> seen(n, 0);
  for (int k = 0; k < n; ++k) {
    if (seen[k]) continue;
    const int p = partner[k];
    if (p != k && partner[p] == k && !seen[p]) {
      orbits.push_back({k, p});
      seen[k] = seen[p] = 1;
    } else {
      orbits.push_back({k, -1});
      seen[k] = 1;
    }
  }

  // A nonzero shift on a free cluster is admissible only if every shifted
  // member can find a conjugate partner somewhere in the shifted spectrum.
  // Members of the same cluster carry the same shift, so they cannot act as
  // partners under a different one.
  std::vector<int> cluster_of(side, -1);
  for (int k = 0; k < n; ++k)
    for (int j : clusters.clusters[k]) cluster_of[j] = k;
  auto free_shift_admissible = [&](int k, int m) {
    if (m == 0) return true;
    for (int j : clusters.clusters[k]) {
      const Complex shifted = principal_logs(j) + Complex(0, 2.0 * kPi * m);
      const Complex want = std::conj(shifted);
      bool found = false;
      for (int jj = 0; jj < side && !found; ++jj) {
        const int s_lo = cluster_of[jj] == k ? m : -m_max;
        const int s_hi = cluster_of[jj] == k ? m : m_max;
        for (int s = s_lo; s <= s_hi && !found; ++s)
          if (std::abs(want - (principal_logs(jj) + Complex(0, 2.0 * kPi * s))) <= pairing_tol)
            found = true;
      }
      if (!found) return false;
    }
    return true;
  };

  // A shift is physically plausible only if it keeps every member's
  // imaginary part inside the cap; this is what keeps the option count small.
  auto members_within_cap = [&](int k, int m) {
    for (int j : clusters.clusters[k])
      if (std::abs(principal_logs(j).imag() + 2.0 * kPi * m) > im_bound) return false;
    return true;
  };
  std::vector<std::vector<int>> options(orbits.size());
  for (size_t o = 0; o < orbits.size(); ++o) {
    for (int m = -m_max; m <= m_max; ++m) {
      if (!members_within_cap(orbits[o].a, m)) continue;
      if (orbits[o].b >= 0 && !members_within_cap(orbits[o].b, -m)) continue;
      if (orbits[o].b < 0 && !free_shift_admissible(orbits[o].a, m)) continue;
      options[o].push_back(m);
    }
  }

  double total = 1.0;
  for (const auto& opt : options) total *= static_cast<double>(opt.size());
  if (total > 2e5)
    throw SolverFailure("enumerate_branches: search space too large; increase beta");

  std::vector<BranchVector> out;
  std::vector<size_t> idx(orbits.size(), 0);
  while (true) {
    Eigen::VectorXi m = Eigen::VectorXi::Zero(side);
    for (size_t o = 0; o < orbits.size(); ++o) {
      const int shift = options[o][idx[o]];
      for (int j : clusters.clusters[orbits[o].a]) m(j) = shift;
      if (orbits[o].b >= 0)
        for (int j : clusters.clusters[orbits[o].b]) m(j) = -shift;
    }
    CVec shifted(side);
    for (int j = 0; j < side; ++j)
      shifted(j) = principal_logs(j) + Complex(0, 2.0 * kPi * m(j));
    if (conjugation_closed(shifted, pairing_tol)) out.push_back({std::move(m)});

    size_t o = 0;
    for (; o < orbits.size(); ++o) {
      if (++idx[o] < options[o].size()) break;
      idx[o] = 0;
    }
    if (o == orbits.size()) break;
  }

  std::sort(out.begin(), out.end(), [](const BranchVector& a, const BranchVector& b) {
    const int sa = a.m.cwiseAbs().sum(), sb = b.m.cwiseAbs().sum();
    if (sa != sb) return sa < sb;
    return std::lexicographical_compare(a.m.data(), a.m.data() + a.m.size(), b.m.data(),
                                        b.m.data() + b.m.size());
  });
  return out;
}

FlowAssignment assign_eigenvectors_flow(const std::vector<CVec>& vectors,
                                        const ClusterSet& clusters) {
  const int nv = static_cast<int>(vectors.size());
  const int nc = clusters.count();
  if (clusters.projectors.empty())
    throw InfeasibleFlowError("assign_eigenvectors_flow: projectors not attached");
  int total_rank = 0;
  for (int r : clusters.ranks) total_rank += r;
  if (total_rank != nv)
    throw InfeasibleFlowError("assign_eigenvectors_flow: rank sum != vector count");

  // Vertices: source, nv vectors, nc projectors, sink. Cost-ties resolve to
  // the lowest-index assignment via a positional secondary weight.
  const int source = 0, sink = nv + nc + 1;
  MinCostFlow flow(nv + nc + 2);
  const FlowCost base = nc + 1;
  const FlowCost primary_scale = ipow(base, nv);
  std::vector<std::vector<int>> edge_id(nv, std::vector<int>(nc));
  for (int j = 0; j < nv; ++j) flow.add_edge(source, 1 + j, 1, 0);
  for (int j = 0; j < nv; ++j)
    for (int k = 0; k < nc; ++k) {
      const double dist = (vectors[j] - clusters.projectors[k] * vectors[j]).norm();
      const auto w = static_cast<FlowCost>(std::floor(10000.0 * dist));
      const FlowCost tiebreak = FlowCost(k) * ipow(base, nv - 1 - j);
      edge_id[j][k] = flow.add_edge(1 + j, 1 + nv + k, 1, w * primary_scale + tiebreak);
    }
  for (int k = 0; k < nc; ++k) flow.add_edge(1 + nv + k, sink, clusters.ranks[k], 0);

  const auto result = flow.solve(source, sink);
  if (result.flow != nv)
    throw InfeasibleFlowError("assign_eigenvectors_flow: max flow below vector count");

  FlowAssignment out;
  out.per_cluster.resize(nc);
  FlowCost primary = 0;
  for (int j = 0; j < nv; ++j)
    for (int k = 0; k < nc; ++k)
      if (flow.edge_flow(edge_id[j][k]) > 0) {
        out.per_cluster[k].push_back(j);
        primary += flow.edge_flow(edge_id[j][k]) *
                   (FlowCost(std::floor(10000.0 * (vectors[j] - clusters.projectors[k] * vectors[j]).norm())));
      }
  out.cost = static_cast<std::int64_t>(primary);
  return out;
}

std::optional<ApCoreResult> ap_core(const CMat& l0_tilde, int depth, const CVec& shifted_logs,
                                    const ClusterSet& clusters, const SuperOp& e,
                                    LindbladProjector& projector, double cond_threshold,
                                    std::vector<double>* residual_trace) {
  const int side = e.side();
  const CMat dhat = shifted_logs.asDiagonal();

  CMat l_cur = l0_tilde;
  double res_cur = (expm(l_cur) - e.mat).norm();
  if (residual_trace) residual_trace->push_back(res_cur);
  std::optional<ApCoreResult> accepted;

  for (int t = 0; t < depth; ++t) {
    EigenSystem sys;
    try {
      sys = eig_pairs(l_cur, cond_threshold);
    } catch (const Error&) {
      break;
    }

    std::vector<CVec> vecs(side);
    for (int j = 0; j < side; ++j) vecs[j] = sys.right.col(j);
    FlowAssignment asg;
    try {
      asg = assign_eigenvectors_flow(vecs, clusters);
    } catch (const Error&) {
      break;
    }

    // Within each cluster, min-cost matching pairs the data log-eigenvalues
    // with the model eigenvalues; matched model eigenvectors (projected into
    // the cluster subspace) become the columns of K.
    CMat k_mat(side, side);
    for (int k = 0; k < clusters.count(); ++k) {
      const auto& data_idx = clusters.clusters[k];
      const auto& model_idx = asg.per_cluster[k];
      const int w = static_cast<int>(data_idx.size());
      const FlowCost base = w + 1;
      const FlowCost scale = ipow(base, w);
      std::vector<std::vector<FlowCost>> cost(w, std::vector<FlowCost>(w));
      for (int a = 0; a < w; ++a)
        for (int b = 0; b < w; ++b) {
          const double dist = std::abs(shifted_logs(data_idx[a]) - sys.eigenvalues(model_idx[b]));
          cost[a][b] = static_cast<FlowCost>(std::floor(10000.0 * dist)) * scale +
                       FlowCost(b) * ipow(base, w - 1 - a);
        }
      const auto row_to_col = hungarian(cost);
      for (int a = 0; a < w; ++a)
        k_mat.col(data_idx[a]) =
            clusters.projectors[k] * sys.right.col(model_idx[row_to_col[a]]);
    }

    // Per-column scaling drops out of K·D̂·K⁻¹; normalize so the condition
    // check measures geometry, not overlap magnitudes.
    bool dead_column = false;
    for (int j = 0; j < side; ++j) {
      const double nrm = k_mat.col(j).norm();
      if (nrm < 1e-12) {
        dead_column = true;
        break;
      }
      k_mat.col(j) /= nrm;
    }
    if (dead_column) break;

    Eigen::JacobiSVD<CMat> svd(k_mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= 0.0 || svd.singularValues().maxCoeff() / smin > cond_threshold) break;

    const CMat a_bar = k_mat * dhat * k_mat.inverse();
    SuperOp l_opt(CMat{}, 0);
    try {
      l_opt = projector.project(SuperOp(a_bar, e.dim));
    } catch (const Error&) {
      break;
    }
    const double res_opt = (expm(l_opt.mat) - e.mat).norm();
    if (res_opt < res_cur) {
      l_cur = l_opt.mat;
      res_cur = res_opt;
      if (residual_trace) residual_trace->push_back(res_cur);
      accepted = ApCoreResult{SuperOp(l_cur, e.dim), res_cur, t + 1};
    } else {
      break;
    }
  }
  return accepted;
}

namespace {

CVec shifted_spectrum(const CVec& logs, const Eigen::VectorXi& m) {
  CVec out(logs.size());
  for (Eigen::Index j = 0; j < logs.size(); ++j)
    out(j) = logs(j) + Complex(0, 2.0 * kPi * m(j));
  return out;
}

// Two implausibility filters: the total diagonal shift against the scale of
// L0, and a per-eigenvalue cap |Im λ̂_j| ≤ π + margin. A shift is physically
// relevant only when it lands an eigenvalue just beyond the principal strip
// (a pair that wrapped around the cut); shifting eigenvalues far from the
// negative axis overshoots any weak-noise generator.
std::vector<BranchVector> prune_branches(std::vector<BranchVector> branches, const CVec& logs,
                                         double norm_bound, double im_bound) {
  std::vector<BranchVector> keep;
  for (auto& b : branches) {
    const double shift_norm = 2.0 * kPi * std::sqrt(static_cast<double>(b.m.squaredNorm()));
    if (shift_norm > norm_bound) continue;
    bool plausible = true;
    for (Eigen::Index j = 0; j < logs.size() && plausible; ++j)
      if (std::abs(logs(j).imag() + 2.0 * kPi * b.m(j)) > im_bound) plausible = false;
    if (plausible) keep.push_back(std::move(b));
  }
  return keep;
}

CMat hadamard_pow(int copies) {
  CMat h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  CMat out(1, 1);
  out(0, 0) = 1.0;
  for (int i = 0; i < copies; ++i) out = kron(out, h);
  return out;
}

}  // namespace

FitResult convex_solve(const SuperOp& e, int m_max) {
  SearchOptions opts;
  opts.m_max = m_max;
  return convex_solve(e, opts);
}

FitResult convex_solve(const SuperOp& e, const SearchOptions& opts) {
  const EigenSystem sys = eig_pairs(e.mat, opts.cond_threshold);
  const CVec logs = principal_log_eigs(sys.eigenvalues);
  // numerical floor so exactly degenerate eigenvalues share one cluster
  ClusterSet cs = cluster_eigenvalues(sys.eigenvalues, 1e-12);

  // Statistical noise can break exact conjugate pairing (e.g. a pair
  // colliding onto the negative real axis); widen the tolerance so the
  // principal branch itself always qualifies.
  const double pairing_tol =
      std::max(opts.pairing_tol, 1.05 * closure_deficiency(logs));
  auto branches = enumerate_branches(cs, logs, opts.m_max, pairing_tol, kPi + opts.im_margin);
  const CMat a0 = sys.right * logs.asDiagonal() * sys.left;
  const double bound =
      opts.prune_bound > 0 ? opts.prune_bound : 2.0 * a0.norm() + opts.prune_margin;
  branches = prune_branches(std::move(branches), logs, bound, kPi + opts.im_margin);
  if (branches.empty()) throw NoCandidateError("convex_solve: no admissible branch");

  const int nb = static_cast<int>(branches.size());
  struct Slot {
    bool ok = false;
    double residual = 0.0;
    CMat l;
    std::string error;
  };
  std::vector<Slot> slots(nb);

  parallel_for(nb, opts.exec, [&](int b) {
    try {
      const CMat a_m = sys.right * shifted_spectrum(logs, branches[b].m).asDiagonal() * sys.left;
      LindbladProjector proj(e.dim, opts.projection);
      const SuperOp l = proj.project(SuperOp(a_m, e.dim));
      slots[b].residual = (expm(l.mat) - e.mat).norm();
      slots[b].l = l.mat;
      slots[b].ok = true;
    } catch (const std::exception& ex) {
      slots[b].error = ex.what();
    }
  });

  int best = -1;
  for (int b = 0; b < nb; ++b) {
    if (!slots[b].ok)
      throw SolverFailure("convex_solve: branch " + std::to_string(b) + " failed: " +
                          slots[b].error);
    if (best < 0 || slots[b].residual < slots[best].residual) best = b;
  }

  FitResult out{Lindbladian::certify(SuperOp(slots[best].l, e.dim), 1e-6), slots[best].residual,
                branches[best], 0, nb};
  return out;
}

FitResult alternating_projections(const SuperOp& e, const SuperOp& l0, double beta, int depth,
                                  int starts, std::uint64_t seed) {
  SearchOptions opts;
  opts.beta = beta;
  opts.depth = depth;
  opts.starts = starts;
  opts.seed = seed;
  return alternating_projections(e, l0, opts);
}

FitResult alternating_projections(const SuperOp& e, const SuperOp& l0,
                                  const SearchOptions& opts) {
  if (opts.starts < 1) throw ParseError("alternating_projections: starts must be >= 1");
  const EigenSystem sys = eig_pairs(e.mat, opts.cond_threshold);
  const CVec logs = principal_log_eigs(sys.eigenvalues);
  const double beta = opts.beta < 0 ? default_beta(sys.eigenvalues) : opts.beta;
  ClusterSet cs = cluster_eigenvalues(sys.eigenvalues, std::max(beta, 1e-12));
  attach_projectors(cs, sys);

  // Branch shifts are enumerated per eigenvalue (conjugate pairs take
  // opposite shifts); the clustering only controls the projector merging.
  const ClusterSet enum_cs = cluster_eigenvalues(sys.eigenvalues, 1e-12);
  const double pairing_tol =
      std::max(opts.pairing_tol, 1.05 * closure_deficiency(logs));
  auto branches =
      enumerate_branches(enum_cs, logs, opts.m_max, pairing_tol, kPi + opts.im_margin);
  const double bound =
      opts.prune_bound > 0 ? opts.prune_bound : 2.0 * l0.mat.norm() + opts.prune_margin;
  branches = prune_branches(std::move(branches), logs, bound, kPi + opts.im_margin);
  if (branches.empty())
    throw NoCandidateError("alternating_projections: no admissible branch");

  const int nb = static_cast<int>(branches.size());
  const int np = opts.starts;
  const int n_tasks = nb * np;
  const int n_qubits = [&] {
    int n = 0;
    while ((1 << n) < e.dim) ++n;
    return n;
  }();
  const CMat had = hadamard_pow(2 * n_qubits);

  struct Slot {
    bool ok = false;
    double residual = 0.0;
    CMat l;
    int iterations = 0;
    std::uint64_t task_seed = 0;
  };
  std::vector<Slot> slots(n_tasks);

  parallel_for(n_tasks, opts.exec, [&](int i) {
    const int b = i / np;
    const int p = i % np;
    const std::uint64_t task_seed = derive_seed(opts.seed, b, p);
    try {
      CMat l0t = l0.mat;
      if (p > 0) {
        Rng rng(task_seed);
        CVec diag(e.side());
        for (int j = 0; j < e.side(); ++j)
          diag(j) = Complex(rng.uniform(-opts.perturb_magnitude, opts.perturb_magnitude),
                            rng.uniform(-opts.perturb_magnitude, opts.perturb_magnitude));
        if (p % 2 == 1) {
          l0t += CMat(diag.asDiagonal());
        } else {
          l0t += had * CMat(diag.asDiagonal()) * had;
        }
      }
      LindbladProjector proj(e.dim, opts.projection);
      const auto res = ap_core(l0t, opts.depth, shifted_spectrum(logs, branches[b].m), cs, e,
                               proj, opts.cond_threshold);
      if (res) {
        slots[i].ok = true;
        slots[i].residual = res->residual;
        slots[i].l = res->l.mat;
        slots[i].iterations = res->iterations;
        slots[i].task_seed = task_seed;
      }
    } catch (const std::exception&) {
      // failed start; the reduction below skips it
    }
  });

  int best = -1;
  for (int i = 0; i < n_tasks; ++i) {
    if (!slots[i].ok) continue;
    if (best < 0 || slots[i].residual < slots[best].residual) best = i;
  }

  // The initial guess itself is a candidate when it certifies: with every
  // improvement step rejected, the search falls back to L0.
  std::optional<FitResult> baseline;
  {
    ConeResiduals r;
    if (is_lindbladian(l0, 1e-6, &r)) {
      BranchVector zero{Eigen::VectorXi::Zero(e.side())};
      baseline = FitResult{Lindbladian{l0, 1e-6}, (expm(l0.mat) - e.mat).norm(), zero, 0, 0};
    }
  }

  if (best < 0) {
    if (baseline) return *baseline;
    throw NoCandidateError("alternating_projections: every branch/start failed");
  }
  FitResult out{Lindbladian::certify(SuperOp(slots[best].l, e.dim), 1e-6),
                slots[best].residual, branches[best / np], slots[best].task_seed,
                slots[best].iterations};
  if (baseline && baseline->residual < out.residual) return *baseline;
  return out;
}

std::pair<bool, bool> success_criteria(const Lindbladian& l, const SuperOp& e,
                                       const SuperOp& e_star) {
  const CMat el = expm(l.op.mat);
  const double floor_dist = fro_dist(e, e_star);
  return {(el - e.mat).norm() <= floor_dist, (el - e_star.mat).norm() <= floor_dist};
}

}  // namespace lindfit

#include <doctest.h>

#include <cmath>

#include "lindfit/flow.hpp"
#include "lindfit/logsearch.hpp"
#include "lindfit/rng.hpp"
#include "lindfit/superop.hpp"
#include "oracles.hpp"

using namespace lindfit;

TEST_CASE("min cost flow basics") {
  // two sources of supply routed through a bottleneck
  MinCostFlow g(4);
  const int e01 = g.add_edge(0, 1, 2, 1);
  const int e02 = g.add_edge(0, 2, 2, 3);
  g.add_edge(1, 3, 2, 0);
  g.add_edge(2, 3, 2, 0);
  const auto r = g.solve(0, 3);
  CHECK(r.flow == 4);
  CHECK(static_cast<std::int64_t>(r.cost) == 2 * 1 + 2 * 3);
  CHECK(g.edge_flow(e01) == 2);
  CHECK(g.edge_flow(e02) == 2);
}

TEST_CASE("hungarian agrees with permutation brute force") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    std::vector<std::vector<double>> dcost(n, std::vector<double>(n));
    std::vector<std::vector<FlowCost>> icost(n, std::vector<FlowCost>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        dcost[i][j] = rng.uniform(0.0, 2.0);
        icost[i][j] = static_cast<FlowCost>(std::floor(10000.0 * dcost[i][j]));
      }
    const auto assign = hungarian(icost);
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) total += static_cast<std::int64_t>(icost[i][assign[i]]);
    CHECK(total == testing::brute_force_matching_cost(dcost));
  }
}

namespace {

// rank-1 orthogonal projectors onto given unit vectors
ClusterSet singleton_clusters(const std::vector<CVec>& dirs) {
  ClusterSet cs;
  for (size_t k = 0; k < dirs.size(); ++k) {
    cs.clusters.push_back({static_cast<int>(k)});
    cs.ranks.push_back(1);
    cs.projectors.push_back(dirs[k] * dirs[k].adjoint());
  }
  return cs;
}

}  // namespace

TEST_CASE("flow assignment") {
  SUBCASE("vectors already in distinct eigenspaces: identity assignment, cost 0") {
    std::vector<CVec> dirs;
    for (int k = 0; k < 4; ++k) {
      CVec v = CVec::Zero(4);
      v(k) = 1.0;
      dirs.push_back(v);
    }
    const ClusterSet cs = singleton_clusters(dirs);
    const auto asg = assign_eigenvectors_flow(dirs, cs);
    CHECK(asg.cost == 0);
    for (int k = 0; k < 4; ++k) {
      REQUIRE(asg.per_cluster[k].size() == 1);
      CHECK(asg.per_cluster[k][0] == k);
    }
  }
  SUBCASE("symmetric tie resolves to lowest index") {
    // vectors |0⟩, |1⟩ against projectors onto |+⟩, |−⟩: both assignments
    // cost-equal, lowest-index pairing wins.
    const double r = 1.0 / std::sqrt(2.0);
    CVec zero(2), one(2), plus(2), minus(2);
    zero << 1, 0;
    one << 0, 1;
    plus << r, r;
    minus << r, -r;
    const ClusterSet cs = singleton_clusters({plus, minus});
    const auto asg = assign_eigenvectors_flow({zero, one}, cs);
    CHECK(asg.per_cluster[0] == std::vector<int>{0});
    CHECK(asg.per_cluster[1] == std::vector<int>{1});
  }
  SUBCASE("matches brute force on random clustered instances") {
    Rng rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 2;
      const SuperOp l = testing::random_lindbladian(d, 900 + trial);
      const EigenSystem sys = eig_pairs(l.mat);
      ClusterSet cs = cluster_eigenvalues(sys.eigenvalues, 0.3);
      attach_projectors(cs, sys);
      std::vector<CVec> vecs;
      for (int j = 0; j < d * d; ++j) {
        CVec v = sys.right.col(j) + 0.2 * testing::random_complex(d * d, 1, 950 + 10 * trial + j);
        vecs.push_back(v / v.norm());
      }
      const auto asg = assign_eigenvectors_flow(vecs, cs);
      CHECK(asg.cost == testing::brute_force_assignment_cost(vecs, cs));
      // capacity: each cluster receives exactly its rank
      int total = 0;
      for (int k = 0; k < cs.count(); ++k) {
        CHECK(static_cast<int>(asg.per_cluster[k].size()) == cs.ranks[k]);
        total += static_cast<int>(asg.per_cluster[k].size());
      }
      CHECK(total == d * d);
    }
  }
  SUBCASE("rank mismatch raises") {
    CVec v0(2), v1(2);
    v0 << 1, 0;
    v1 << 0, 1;
    ClusterSet cs = singleton_clusters({v0});
    CHECK_THROWS_AS(assign_eigenvectors_flow({v0, v1}, cs), InfeasibleFlowError);
  }
}

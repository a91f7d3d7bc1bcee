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

#include "lindfit/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace lindfit {

namespace {
constexpr FlowCost kInf = FlowCost(1) << 120;
}

MinCostFlow::MinCostFlow(int n_vertices) : n_(n_vertices), adj_(n_vertices) {}

int MinCostFlow::add_edge(int from, int to, std::int64_t capacity, FlowCost cost) {
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({to, capacity, cost});
  edges_.push_back({from, 0, -cost});
  adj_[from].push_back(id);
  adj_[to].push_back(id + 1);
  return id;
}

MinCostFlow::Result MinCostFlow::solve(int source, int sink) {
  Result res;
  while (true) {
    // SPFA over the residual graph; small graphs, nonnegative reduced costs
    // are not assumed.
    std::vector<FlowCost> dist(n_, kInf);
    std::vector<int> in_edge(n_, -1);
    std::vector<char> in_queue(n_, 0);
    std::deque<int> queue;
    dist[source] = 0;
    queue.push_back(source);
    in_queue[source] = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      in_queue[v] = 0;
      for (int id : adj_[v]) {
        const Edge& e = edges_[id];
        if (e.cap <= 0) continue;
        if (dist[v] + e.cost < dist[e.to]) {
          dist[e.to] = dist[v] + e.cost;
          in_edge[e.to] = id;
          if (!in_queue[e.to]) {
            queue.push_back(e.to);
            in_queue[e.to] = 1;
          }
        }
      }
    }
    if (dist[sink] == kInf) break;

    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = sink; v != source; v = edges_[in_edge[v] ^ 1].to)
      push = std::min(push, edges_[in_edge[v]].cap);
    for (int v = sink; v != source; v = edges_[in_edge[v] ^ 1].to) {
      edges_[in_edge[v]].cap -= push;
      edges_[in_edge[v] ^ 1].cap += push;
    }
    res.flow += push;
    res.cost += dist[sink] * push;
  }
  return res;
}

std::int64_t MinCostFlow::edge_flow(int edge_id) const {
  return edges_[edge_id ^ 1].cap;
}

std::vector<int> hungarian(const std::vector<std::vector<FlowCost>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("hungarian: not square");

  // Shortest-augmenting-path assignment with potentials, 1-based scratch.
  std::vector<FlowCost> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<FlowCost> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      FlowCost delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const FlowCost cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace lindfit

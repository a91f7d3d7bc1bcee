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

#include <cstdint>
#include <vector>

namespace lindfit {

using FlowCost = __int128;

// Min-cost max-flow by successive shortest paths with integer weights.
// Deterministic: edges are relaxed in insertion order.
class MinCostFlow {
 public:
  explicit MinCostFlow(int n_vertices);

  // Returns the edge id; the reverse edge is id^1.
  int add_edge(int from, int to, std::int64_t capacity, FlowCost cost);

  struct Result {
    std::int64_t flow = 0;
    FlowCost cost = 0;
  };
  Result solve(int source, int sink);

  std::int64_t edge_flow(int edge_id) const;

 private:
  struct Edge {
    int to;
    std::int64_t cap;
    FlowCost cost;
  };
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Assignment problem (n×n, integer costs) by shortest augmenting paths.
// Returns the column assigned to each row.
std::vector<int> hungarian(const std::vector<std::vector<FlowCost>>& cost);

}  // namespace lindfit

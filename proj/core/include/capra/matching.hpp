// Perfect matchings on even vertex subsets: the constructive tree bound and
// an exact subset-DP refinement for small groups.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "capra/clustering.hpp"

namespace capra {

struct Matching {
  std::vector<std::pair<int, int>> pairs;
  double cost = 0.0;
};

using MatchCostFn = std::function<double(int, int)>;

// Perfect matching on `u_set` with cost at most the tree cost. Works by leaf
// elimination: a leaf outside U is dropped; a leaf matched with its U
// neighbour consumes the tree edge; a leaf whose neighbour is outside U
// passes its identity up the tree. `tree_edges` must form a spanning tree
// on vertices 0..num_vertices-1 and |u_set| must be even.
Matching tree_matching(int num_vertices,
                       const std::vector<std::pair<int, int>>& tree_edges,
                       const std::vector<int>& u_set, const MatchCostFn& cost);

// Exact minimum perfect matching over at most 16 vertices by subset DP.
Matching exact_matching_subset_dp(const std::vector<int>& u_set,
                                  const MatchCostFn& cost);

// Per-group matching of odd-endpoint targets: spanning tree over the edges
// that join targets with intersecting B-sets, tree matching on the group's
// odd targets, and the exact DP when the group has at most 16 of them.
// `odd_targets_per_group` holds target indices; every entry must have even
// size. Returned pairs are target indices.
Matching group_matching(
    const VrtgInstance& inst,
    const std::vector<std::vector<int>>& odd_targets_per_group);

}  // namespace capra

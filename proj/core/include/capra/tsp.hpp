// Traveling salesman tour construction over a CVRP instance, plus an exact
// oracle for small instances.
#pragma once

#include <utility>
#include <vector>

#include "capra/instance.hpp"

namespace capra {

/// A cycle through {s} u V visiting every vertex exactly once. `order`
/// starts at the depot; the closing edge back to the depot is implicit.
struct TspTour {
  std::vector<VertexId> order;
  double cost = 0.0;
};

enum class TspBackend { kChristofides, kDoubleTree, kExact };

const char* to_string(TspBackend b);
TspBackend tsp_backend_from_string(const std::string& s);

// Minimum spanning tree over all vertices of the instance (dense Prim,
// O(n^2)); returns tree edges.
std::vector<std::pair<VertexId, VertexId>> prim_mst(const Instance& inst);

// MST doubled, Euler walk, shortcut. Cost at most twice the optimal tour.
TspTour double_tree_tour(const Instance& inst);

// MST plus exact minimum-weight perfect matching on the odd-degree
// vertices. Cost at most 1.5 times the optimal tour.
TspTour christofides_tour(const Instance& inst);

// Exact tour by bitmask dynamic programming. Requires
// num_vertices() <= limit.
TspTour held_karp(const Instance& inst, int limit = 16);

// Eulerian walk from the depot over a connected even-degree multigraph,
// shortcut to the first occurrence of each vertex. The tour covers exactly
// the support of `edges` (which must include the depot) and costs no more
// than the multiset. Throws on disconnected or odd-degree input.
TspTour euler_shortcut(const Instance& inst,
                       const std::vector<std::pair<VertexId, VertexId>>& edges);

TspTour run_tsp(const Instance& inst, TspBackend backend,
                int held_karp_limit = 16);

double tsp_tour_cost(const Instance& inst, const std::vector<VertexId>& order);

}  // namespace capra

// Combinatorial VRTG solver: cheapest forward walk solutions via min-cost
// flow, greedy extraction of a nice subinstance, and reconnection of the
// removed customers by a minimum spanning forest.
#pragma once

#include <utility>
#include <vector>

#include "capra/clustering.hpp"
#include "capra/instance.hpp"
#include "capra/vrtg.hpp"

namespace capra {

class DegenerateVrtgError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Subset Y of customers whose removal makes the instance nice for gamma:
/// afterwards every surviving customer's nearest preceding neighbour is
/// within gamma times the detour from any surviving successor. Every removed
/// y keeps a witness w(y) that proves it had to go.
struct NiceSubsetResult {
  std::vector<VertexId> removed;        // scan order
  std::vector<VertexId> witness;        // witness[v], valid for removed v
  std::vector<char> removed_mask;       // indexed by vertex id
  std::vector<VertexId> survivors;      // ascending vertex id
};

NiceSubsetResult compute_nice_subset(const Instance& inst,
                                     const DepotOrder& order, double gamma);

// Nearest strictly preceding vertex (depot allowed) among `allowed`
// restricted to predecessors of v; ties by smaller id.
VertexId parent_in(const Instance& inst, const DepotOrder& order,
                   const std::vector<char>& allowed, VertexId v);

// Optimal walk solution among those that give every active customer a
// forward entering arc. Successive shortest augmenting paths over the
// doubled-customer flow network; |H| <= n^2. The two-argument form covers
// every customer of the instance. Throws DegenerateVrtgError when the
// instance has no targets but active customers remain.
WalkSolution cheapest_forward_walk(const VrtgInstance& inst,
                                   const DepotOrder& order);
WalkSolution cheapest_forward_walk(const VrtgInstance& inst,
                                   const DepotOrder& order,
                                   const std::vector<VertexId>& active);

// Minimum-cost edge set connecting every removed customer to the rest:
// a spanning tree in the complete graph on `removed` plus one contracted
// survivor node whose edges cost the distance to the nearest survivor.
std::vector<std::pair<VertexId, VertexId>> connect_removed(
    const Instance& inst, const std::vector<VertexId>& removed);

// Full pipeline: nice subset, forward walks on the survivors, reconnecting
// forest traversed in both directions, then walk decomposition.
VrtgSolution solve_vrtg(const VrtgInstance& inst, double gamma);

}  // namespace capra

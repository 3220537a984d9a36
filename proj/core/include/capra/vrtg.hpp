// Vehicle routing with target groups: solutions, walk solutions (arc
// multisets), conversions between the two, and verification.
#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <utility>
#include <vector>

#include "capra/clustering.hpp"
#include "capra/instance.hpp"

namespace capra {

/// One tour of a VRTG solution over extended node ids: either a path from
/// the depot to a target node, or a cycle at the depot. `nodes` always
/// starts at the depot; for cycles the closing edge is implicit.
struct VrtgTour {
  std::vector<int> nodes;
  bool is_cycle = false;
  double cost = 0.0;
};

struct VrtgSolution {
  std::vector<VrtgTour> tours;
  double cost = 0.0;
};

/// Arc multiset over the VRTG digraph. Arcs into customers (E1) and arcs
/// into the depot or targets (E2) live in one map; multiplicities count.
struct WalkSolution {
  std::map<std::pair<int, int>, int> arcs;

  void add_arc(int u, int v, int mult = 1);
  double cost(const VrtgInstance& inst) const;
  int size() const;  // total multiplicity
};

struct VrtgVerifyReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the walk-solution constraints: in-degree equals out-degree at every
// customer, b(T) arcs enter each target group, and the underlying edges
// connect the depot with every (active) customer. With `order` given, also
// requires a forward arc into every active customer. `active` restricts the
// customer set; null means every customer.
VrtgVerifyReport check_walk_solution(
    const VrtgInstance& inst, const WalkSolution& h,
    const std::vector<VertexId>* active = nullptr,
    const DepotOrder* order = nullptr);

// Decomposes a walk solution into sum b(T) depot-to-target walks plus
// depot cycles, shortcutting repeated customers inside each walk. The result
// is feasible and costs at most c(h). Customer-free cycles are dropped.
VrtgSolution walks_to_solution(const VrtgInstance& inst,
                               const WalkSolution& h);

// Orients every tour away from the depot and sums arc multiplicities; cost
// is preserved exactly.
WalkSolution solution_to_walks(const VrtgInstance& inst,
                               const VrtgSolution& sol);

// Coverage, per-group endpoint counts and tour well-formedness.
VrtgVerifyReport verify_vrtg(const VrtgInstance& inst,
                             const VrtgSolution& sol);

nlohmann::json vrtg_solution_to_json(const VrtgInstance& inst,
                                     const VrtgSolution& sol);

}  // namespace capra

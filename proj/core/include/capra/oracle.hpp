// Exact brute-force solvers for desk-scale instances and the construction
// of weighted fractional walk covers from a feasible CVRP solution.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "capra/clustering.hpp"
#include "capra/instance.hpp"
#include "capra/vrtg.hpp"

namespace capra {

// Optimal CVRP solution: set-partition DP over capacity-feasible customer
// groups with exact tours per group. Throws when num_customers() > limit.
Solution exact_cvrp(const Instance& inst, int limit = 8);

// Optimal VRTG solution by exhaustive choice of walk endpoints and an
// assignment DP of customers to walks (plus one optional depot cycle).
// Limits: customers and total path count.
VrtgSolution exact_vrtg(const VrtgInstance& inst, int limit_customers = 6,
                        int limit_b = 6);

/// Weighted collection of walks over the VRTG digraph. A walk's final arc
/// (into the depot or a target) is accounted separately from its body; the
/// split registry records customers whose demand was divided between two
/// coincident copies.
struct WeakFractional {
  struct Walk {
    double weight = 0.0;
    std::vector<int> nodes;  // extended node ids; nodes.front() == depot
    bool has_final_arc = false;
  };
  struct Split {
    VertexId customer = -1;
    double first_part = 0.0;
  };

  std::vector<Walk> walks;
  std::map<std::pair<int, int>, double> arc_values;  // aggregated vector x
  std::vector<Split> splits;

  double body_cost = 0.0;    // walk bodies: everything except final arcs
  double body_detour = 0.0;
  double final_cost = 0.0;   // the final arcs into {s} u targets
  bool floor_boundary_flag = false;  // padding hit the b floor within tol

  double cost() const { return body_cost + final_cost; }
};

// Builds the weighted walk cover from a feasible solution: per target group
// a demand budget of (1-tau) b(T) / 2 is filled from peak-cluster customers
// first (splitting at most two customers per group), every customer
// contributes its two tour-split paths with weight d(v) and a final arc to
// a covering target (inside the budget set) or back to the depot, and every
// tour contributes its residual 1 - d(Q) as a cycle.
WeakFractional build_weak_fractional(const Instance& inst,
                                     const Solution& sol,
                                     const VrtgInstance& vrtg,
                                     const ClusterParams& params);

struct WeakFractionalReport {
  std::vector<std::string> violations;
  double min_coverage = 0.0;
  double epsilon_actual = 0.0;
  double zeta = 0.0;
  bool detour_bound = false;    // body detour <= eps_actual * opt
  bool body_cost_bound = false; // body cost <= opt
  bool total_cost_bound = false;  // c(x) < (1 + zeta) * opt
  bool constraints_ok() const { return violations.empty(); }
};

// Checks the walk-cover constraints (structure, coverage >= 1, exact group
// weights) and the cost/detour bounds with epsilon_actual derived from the
// radial lower bound.
WeakFractionalReport check_weak_fractional(const WeakFractional& x,
                                           const Instance& inst,
                                           const VrtgInstance& vrtg,
                                           double opt_cost,
                                           const ClusterParams& params);

// zeta(tau, rho, eps) governing the total-cost bound of the walk cover.
double zeta_value(double tau, double rho, double epsilon);

}  // namespace capra

// Peak-cluster detection and the construction of vehicle-routing-with-
// target-groups instances from a CVRP instance.
#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "capra/instance.hpp"

namespace capra {

/// Clustering constants. kappa is derived from tau and rho; gamma steers the
/// forward-walk solver and epsilon only enters reports.
struct ClusterParams {
  double tau = 0.054;
  double rho = 0.022;
  double gamma = 148.0;
  double epsilon = 1.0 / 6000.0;

  double kappa() const;
  void validate() const;  // 0 < tau,rho <= 1/6, gamma > 2
};

// kappa = (1 - 2 tau - tau rho) / (2 tau); greater than 3/2 on the allowed
// parameter range.
double compute_kappa(double tau, double rho);

/// The customers of a tour that sit near its farthest vertex: u belongs iff
/// c(u, peak) + kappa * detour(u, peak) < rho * c(s, peak). Large means the
/// members' demand exceeds 1 - tau.
struct PeakCluster {
  VertexId peak = -1;
  std::vector<VertexId> members;
  double demand = 0.0;
  bool large = false;
};

PeakCluster peak_cluster(const Instance& inst, const Tour& tour,
                         const ClusterParams& params);

// For a tour whose peak cluster is small: returns
// c(Q) - sum_{v in Q} 2 d(v) c(s,v), which is at least tau*rho*c(Q).
// Throws if the peak cluster is large.
double small_cluster_slack(const Instance& inst, const Tour& tour,
                           const ClusterParams& params);

/// Targets are duplicated customer positions. Target i is node
/// num_customers()+1+i in the extended vertex space used by walk solutions.
struct VrtgInstance {
  const Instance* base = nullptr;  // not owned; must outlive this object
  ClusterParams params;

  std::vector<VertexId> targets;           // originating customer per target
  std::vector<std::vector<int>> groups;    // target indices per group
  std::vector<int> group_of;               // group index per target
  std::vector<long long> b;                // tours ending in each group; even
  std::vector<std::vector<VertexId>> b_sets;        // B_t per target
  std::vector<std::vector<VertexId>> group_b_sets;  // union of B_t per group
  // Customers newly absorbed when each target was selected; pairwise
  // disjoint with demand above 1 - tau per entry.
  std::vector<std::vector<VertexId>> selection_sets;

  int num_customers() const { return base->num_customers(); }
  int num_targets() const { return static_cast<int>(targets.size()); }
  int num_nodes() const { return base->num_vertices() + num_targets(); }
  int target_node(int ti) const { return base->num_vertices() + ti; }
  bool is_target_node(int node) const {
    return node >= base->num_vertices();
  }
  int target_index(int node) const { return node - base->num_vertices(); }
  // Maps extended node ids back to instance vertices.
  VertexId original(int node) const {
    return is_target_node(node) ? targets[target_index(node)] : node;
  }
  double dist(int a, int c) const {
    return base->dist(original(a), original(c));
  }
  double detour(int a, int c) const {
    return base->detour(original(a), original(c));
  }
  long long total_b() const;

  nlohmann::json to_json() const;
};

// Scans customers by decreasing depot distance (ties: higher index first),
// selects targets whose candidate cluster adds demand above 1 - tau, builds
// the B-sets, merges targets with intersecting B-sets into groups and sets
// the even path counts b. An empty target set is a legal output.
VrtgInstance build_vrtg_instance(const Instance& inst,
                                 const ClusterParams& params);

// Floor with a small tolerance so that values a hair under an integer land
// on it; used for the path counts b.
long long floor_with_tol(double x, double tol = kFeasibilityTol);

}  // namespace capra

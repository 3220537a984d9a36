#include "capra/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace capra {

double compute_kappa(double tau, double rho) {
  if (!(tau > 0.0 && tau <= 1.0 / 6.0) || !(rho > 0.0 && rho <= 1.0 / 6.0)) {
    throw ValidationError("tau and rho must lie in (0, 1/6]");
  }
  return (1.0 - 2.0 * tau - tau * rho) / (2.0 * tau);
}

double ClusterParams::kappa() const { return compute_kappa(tau, rho); }

void ClusterParams::validate() const {
  compute_kappa(tau, rho);  // range-checks tau and rho
  if (!(gamma > 2.0)) throw ValidationError("gamma must exceed 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
}

long long floor_with_tol(double x, double tol) {
  return static_cast<long long>(std::floor(x + tol));
}

PeakCluster peak_cluster(const Instance& inst, const Tour& tour,
                         const ClusterParams& params) {
  params.validate();
  if (tour.customers.empty()) {
    throw ValidationError("peak cluster of an empty tour");
  }
  PeakCluster pc;
  for (VertexId v : tour.customers) {
    if (pc.peak == -1 || inst.depot_dist(v) > inst.depot_dist(pc.peak) ||
        (inst.depot_dist(v) == inst.depot_dist(pc.peak) && v < pc.peak)) {
      pc.peak = v;
    }
  }
  const double kappa = params.kappa();
  const double radius = params.rho * inst.depot_dist(pc.peak);
  for (VertexId u : tour.customers) {
    if (inst.dist(u, pc.peak) + kappa * inst.detour(u, pc.peak) < radius) {
      if (pc.members.empty() || pc.members.back() != u) {
        pc.members.push_back(u);
        pc.demand += inst.demand(u);
      }
    }
  }
  pc.large = pc.demand > 1.0 - params.tau;
  return pc;
}

double small_cluster_slack(const Instance& inst, const Tour& tour,
                           const ClusterParams& params) {
  PeakCluster pc = peak_cluster(inst, tour, params);
  if (pc.large) {
    throw ValidationError("slack is only defined for small peak clusters");
  }
  double radial = 0.0;
  double load = 0.0;
  for (VertexId v : tour.customers) {
    radial += 2.0 * inst.demand(v) * inst.depot_dist(v);
    load += inst.demand(v);
  }
  if (load > 1.0 + kFeasibilityTol) {
    throw ValidationError("slack requires a capacity-feasible tour");
  }
  const double slack = tour.cost - radial;
  const double floor_value = params.tau * params.rho * tour.cost;
  if (slack < floor_value - 1e-9 * (1.0 + tour.cost)) {
    throw std::logic_error("small-cluster slack fell below tau*rho*c(Q)");
  }
  return slack;
}

long long VrtgInstance::total_b() const {
  return std::accumulate(b.begin(), b.end(), 0LL);
}

namespace {

// Union-find over target indices.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int c) {
    a = find(a);
    c = find(c);
    if (a != c) parent[std::max(a, c)] = std::min(a, c);
  }
};

}  // namespace

VrtgInstance build_vrtg_instance(const Instance& inst,
                                 const ClusterParams& params) {
  params.validate();
  VrtgInstance out;
  out.base = &inst;
  out.params = params;

  const int n = inst.num_customers();
  const double kappa = params.kappa();

  // Customers by decreasing depot distance, ties by descending index.
  std::vector<VertexId> scan(n);
  std::iota(scan.begin(), scan.end(), 1);
  std::stable_sort(scan.begin(), scan.end(), [&](VertexId a, VertexId c) {
    const double da = inst.depot_dist(a);
    const double dc = inst.depot_dist(c);
    if (da != dc) return da > dc;
    return a > c;
  });

  std::vector<char> in_y(n + 1, 0);
  for (VertexId v : scan) {
    if (in_y[v]) continue;
    const double radius = params.rho * inst.depot_dist(v);
    std::vector<VertexId> cluster;
    double new_demand = 0.0;
    for (VertexId u = 1; u <= n; ++u) {
      if (inst.dist(u, v) + kappa * inst.detour(u, v) < radius) {
        cluster.push_back(u);
        if (!in_y[u]) new_demand += inst.demand(u);
      }
    }
    if (new_demand > 1.0 - params.tau) {
      out.targets.push_back(v);
      std::vector<VertexId> fresh;
      for (VertexId u : cluster) {
        if (!in_y[u]) fresh.push_back(u);
        in_y[u] = 1;
      }
      out.selection_sets.push_back(std::move(fresh));
    }
  }

  const int k = out.num_targets();
  out.b_sets.resize(k);
  std::vector<std::vector<int>> target_lists(n + 1);
  for (int ti = 0; ti < k; ++ti) {
    const VertexId t = out.targets[ti];
    const double cst = inst.depot_dist(t);
    for (VertexId v = 1; v <= n; ++v) {
      const double cvt = inst.dist(v, t);
      const double near = 3.0 * params.rho / (1.0 - params.rho) *
                          inst.depot_dist(v);
      if (cvt < near && cvt < 6.0 * params.rho * cst - near) {
        out.b_sets[ti].push_back(v);
        target_lists[v].push_back(ti);
      }
    }
  }

  // Targets whose B-sets share a customer belong to one group.
  Dsu dsu(k);
  for (VertexId v = 1; v <= n; ++v) {
    for (size_t i = 1; i < target_lists[v].size(); ++i) {
      dsu.unite(target_lists[v][0], target_lists[v][i]);
    }
  }
  std::vector<int> root_to_group(k, -1);
  out.group_of.resize(k);
  for (int ti = 0; ti < k; ++ti) {
    const int r = dsu.find(ti);
    if (root_to_group[r] == -1) {
      root_to_group[r] = static_cast<int>(out.groups.size());
      out.groups.push_back({});
    }
    const int g = root_to_group[r];
    out.groups[g].push_back(ti);
    out.group_of[ti] = g;
  }

  out.group_b_sets.resize(out.groups.size());
  out.b.resize(out.groups.size());
  for (size_t g = 0; g < out.groups.size(); ++g) {
    std::vector<char> seen(n + 1, 0);
    double demand = 0.0;
    for (int ti : out.groups[g]) {
      for (VertexId v : out.b_sets[ti]) {
        if (!seen[v]) {
          seen[v] = 1;
          out.group_b_sets[g].push_back(v);
          demand += inst.demand(v);
        }
      }
    }
    std::sort(out.group_b_sets[g].begin(), out.group_b_sets[g].end());
    out.b[g] = 2 * floor_with_tol(demand / (1.0 - params.tau));
    if (out.b[g] < 2) {
      throw std::logic_error("target group with path count below 2");
    }
  }
  return out;
}

nlohmann::json VrtgInstance::to_json() const {
  nlohmann::json j;
  j["targets"] = targets;
  j["groups"] = groups;
  j["b"] = b;
  j["b_sets"] = b_sets;
  j["group_b_sets"] = group_b_sets;
  j["tau"] = params.tau;
  j["rho"] = params.rho;
  return j;
}

}  // namespace capra

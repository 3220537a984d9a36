#include "capra/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "capra/blossom.hpp"

namespace capra {

const char* to_string(TspBackend b) {
  switch (b) {
    case TspBackend::kChristofides:
      return "christofides";
    case TspBackend::kDoubleTree:
      return "doubletree";
    case TspBackend::kExact:
      return "exact";
  }
  return "christofides";
}

TspBackend tsp_backend_from_string(const std::string& s) {
  if (s == "christofides") return TspBackend::kChristofides;
  if (s == "doubletree") return TspBackend::kDoubleTree;
  if (s == "exact") return TspBackend::kExact;
  throw ValidationError("unknown tsp backend: " + s);
}

double tsp_tour_cost(const Instance& inst,
                     const std::vector<VertexId>& order) {
  if (order.size() <= 1) return 0.0;
  double c = 0.0;
  for (size_t i = 1; i < order.size(); ++i) {
    c += inst.dist(order[i - 1], order[i]);
  }
  c += inst.dist(order.back(), order.front());
  return c;
}

std::vector<std::pair<VertexId, VertexId>> prim_mst(const Instance& inst) {
  const int m = inst.num_vertices();
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (m <= 1) return edges;
  std::vector<bool> in_tree(m, false);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<VertexId> parent(m, kDepot);
  in_tree[kDepot] = true;
  for (int v = 1; v < m; ++v) best[v] = inst.dist(kDepot, v);
  for (int step = 1; step < m; ++step) {
    int pick = -1;
    for (int v = 1; v < m; ++v) {
      if (!in_tree[v] && (pick == -1 || best[v] < best[pick])) pick = v;
    }
    in_tree[pick] = true;
    edges.push_back({parent[pick], pick});
    for (int v = 1; v < m; ++v) {
      if (!in_tree[v]) {
        const double d = inst.dist(pick, v);
        if (d < best[v]) {
          best[v] = d;
          parent[v] = pick;
        }
      }
    }
  }
  return edges;
}

TspTour euler_shortcut(
    const Instance& inst,
    const std::vector<std::pair<VertexId, VertexId>>& edges) {
  const int m = inst.num_vertices();
  if (edges.empty()) return {{kDepot}, 0.0};

  std::vector<std::vector<std::pair<VertexId, int>>> adj(m);
  std::vector<int> degree(m, 0);
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    adj[u].push_back({v, static_cast<int>(e)});
    adj[v].push_back({u, static_cast<int>(e)});
    degree[u]++;
    degree[v]++;
  }
  for (int v = 0; v < m; ++v) {
    if (degree[v] % 2 != 0) {
      throw std::invalid_argument("euler_shortcut: odd vertex degree");
    }
    std::sort(adj[v].begin(), adj[v].end());
  }
  if (degree[kDepot] == 0) {
    throw std::invalid_argument("euler_shortcut: depot not in the multigraph");
  }

  // Hierholzer from the depot.
  std::vector<bool> used(edges.size(), false);
  std::vector<size_t> next_arc(m, 0);
  std::vector<VertexId> stack{kDepot};
  std::vector<VertexId> walk;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    bool advanced = false;
    while (next_arc[v] < adj[v].size()) {
      auto [to, eid] = adj[v][next_arc[v]];
      next_arc[v]++;
      if (!used[eid]) {
        used[eid] = true;
        stack.push_back(to);
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      walk.push_back(v);
      stack.pop_back();
    }
  }
  for (bool u : used) {
    if (!u) {
      throw std::invalid_argument("euler_shortcut: multigraph disconnected");
    }
  }

  TspTour tour;
  std::vector<bool> seen(m, false);
  for (VertexId v : walk) {
    if (!seen[v]) {
      seen[v] = true;
      tour.order.push_back(v);
    }
  }
  // Rotate the depot to the front (the walk starts and ends at the depot, so
  // it is already first, but keep this robust to future callers).
  auto it = std::find(tour.order.begin(), tour.order.end(), kDepot);
  std::rotate(tour.order.begin(), it, tour.order.end());
  tour.cost = tsp_tour_cost(inst, tour.order);
  return tour;
}

TspTour double_tree_tour(const Instance& inst) {
  if (inst.num_customers() < 1) {
    throw ValidationError("tsp tour needs at least one customer");
  }
  auto tree = prim_mst(inst);
  std::vector<std::pair<VertexId, VertexId>> doubled;
  doubled.reserve(tree.size() * 2);
  for (auto e : tree) {
    doubled.push_back(e);
    doubled.push_back(e);
  }
  return euler_shortcut(inst, doubled);
}

TspTour christofides_tour(const Instance& inst) {
  if (inst.num_customers() < 1) {
    throw ValidationError("tsp tour needs at least one customer");
  }
  auto tree = prim_mst(inst);
  std::vector<int> degree(inst.num_vertices(), 0);
  for (auto [u, v] : tree) {
    degree[u]++;
    degree[v]++;
  }
  std::vector<VertexId> odd;
  for (int v = 0; v < inst.num_vertices(); ++v) {
    if (degree[v] % 2 != 0) odd.push_back(v);
  }

  std::vector<std::pair<VertexId, VertexId>> multigraph = tree;
  if (!odd.empty()) {
    const int k = static_cast<int>(odd.size());
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i != j) cost[i][j] = inst.dist(odd[i], odd[j]);
      }
    }
    auto mate = min_weight_perfect_matching(cost);
    for (int i = 0; i < k; ++i) {
      if (mate[i] > i) multigraph.push_back({odd[i], odd[mate[i]]});
    }
  }
  return euler_shortcut(inst, multigraph);
}

TspTour held_karp(const Instance& inst, int limit) {
  const int m = inst.num_vertices();
  if (m > limit) {
    throw ValidationError("instance too large for the exact tsp oracle");
  }
  if (inst.num_customers() < 1) {
    throw ValidationError("tsp tour needs at least one customer");
  }
  const int n = inst.num_customers();
  const int full = 1 << n;
  constexpr double inf = std::numeric_limits<double>::infinity();
  // dp[mask][j]: cheapest path from the depot through mask, ending at
  // customer j+1.
  std::vector<std::vector<double>> dp(full, std::vector<double>(n, inf));
  std::vector<std::vector<int>> pre(full, std::vector<int>(n, -1));
  for (int j = 0; j < n; ++j) dp[1 << j][j] = inst.depot_dist(j + 1);
  for (int mask = 1; mask < full; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1 << j)) || dp[mask][j] == inf) continue;
      const double base = dp[mask][j];
      for (int k = 0; k < n; ++k) {
        if (mask & (1 << k)) continue;
        const int nmask = mask | (1 << k);
        const double cand = base + inst.dist(j + 1, k + 1);
        if (cand < dp[nmask][k]) {
          dp[nmask][k] = cand;
          pre[nmask][k] = j;
        }
      }
    }
  }
  double best = inf;
  int best_j = -1;
  for (int j = 0; j < n; ++j) {
    const double cand = dp[full - 1][j] + inst.depot_dist(j + 1);
    if (cand < best) {
      best = cand;
      best_j = j;
    }
  }
  TspTour tour;
  tour.order.push_back(kDepot);
  std::vector<VertexId> rev;
  int mask = full - 1;
  int j = best_j;
  while (j != -1) {
    rev.push_back(j + 1);
    const int pj = pre[mask][j];
    mask ^= 1 << j;
    j = pj;
  }
  std::reverse(rev.begin(), rev.end());
  tour.order.insert(tour.order.end(), rev.begin(), rev.end());
  tour.cost = tsp_tour_cost(inst, tour.order);
  return tour;
}

TspTour run_tsp(const Instance& inst, TspBackend backend,
                int held_karp_limit) {
  switch (backend) {
    case TspBackend::kChristofides:
      return christofides_tour(inst);
    case TspBackend::kDoubleTree:
      return double_tree_tour(inst);
    case TspBackend::kExact:
      return held_karp(inst, held_karp_limit);
  }
  return christofides_tour(inst);
}

}  // namespace capra

#include "capra/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace capra {

VertexId parent_in(const Instance& inst, const DepotOrder& order,
                   const std::vector<char>& allowed, VertexId v) {
  VertexId best = kDepot;
  double best_d = inst.depot_dist(v);
  for (VertexId u = 1; u <= inst.num_customers(); ++u) {
    if (u == v || !allowed[u] || !order.precedes(u, v)) continue;
    const double d = inst.dist(u, v);
    if (d < best_d || (d == best_d && u < best)) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

NiceSubsetResult compute_nice_subset(const Instance& inst,
                                     const DepotOrder& order, double gamma) {
  if (!(gamma > 2.0)) throw ValidationError("gamma must exceed 2");
  const int n = inst.num_customers();
  NiceSubsetResult res;
  res.removed_mask.assign(n + 1, 0);
  res.witness.assign(n + 1, -1);

  std::vector<char> alive(n + 1, 1);
  for (int pos = 1; pos <= n; ++pos) {
    const VertexId v = order.order[pos];
    if (res.removed_mask[v]) continue;
    // Predecessors of v are already final: removals only hit successors.
    const VertexId p = parent_in(inst, order, alive, v);
    const double parent_dist = inst.dist(p, v);
    for (int qos = pos + 1; qos <= n; ++qos) {
      const VertexId y = order.order[qos];
      if (res.removed_mask[y]) continue;
      if (parent_dist > gamma * inst.detour(y, v)) {
        res.removed_mask[y] = 1;
        alive[y] = 0;
        res.witness[y] = v;
        res.removed.push_back(y);
      }
    }
  }
  for (VertexId v = 1; v <= n; ++v) {
    if (!res.removed_mask[v]) res.survivors.push_back(v);
  }
  return res;
}

std::vector<std::pair<VertexId, VertexId>> connect_removed(
    const Instance& inst, const std::vector<VertexId>& removed) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (removed.empty()) return edges;
  const int n = inst.num_customers();
  std::vector<char> is_removed(n + 1, 0);
  for (VertexId y : removed) is_removed[y] = 1;

  // Nearest survivor per removed customer (the depot never counts:
  // survivors are customers outside Y).
  const int k = static_cast<int>(removed.size());
  std::vector<double> link_cost(k);
  std::vector<VertexId> link_to(k);
  bool has_survivor = false;
  for (int i = 0; i < k; ++i) {
    double best = std::numeric_limits<double>::infinity();
    VertexId to = -1;
    for (VertexId v = 1; v <= n; ++v) {
      if (is_removed[v]) continue;
      const double d = inst.dist(removed[i], v);
      if (d < best || (d == best && v < to)) {
        best = d;
        to = v;
      }
    }
    link_cost[i] = best;
    link_to[i] = to;
    has_survivor = has_survivor || to != -1;
  }
  if (!has_survivor) {
    throw ValidationError("cannot connect removed customers: none survive");
  }

  // Prim over removed + one contracted survivor node (index k).
  std::vector<char> in_tree(k + 1, 0);
  std::vector<double> best(k + 1,
                           std::numeric_limits<double>::infinity());
  std::vector<int> parent(k + 1, k);
  in_tree[k] = 1;
  for (int i = 0; i < k; ++i) best[i] = link_cost[i];
  for (int step = 0; step < k; ++step) {
    int pick = -1;
    for (int i = 0; i < k; ++i) {
      if (!in_tree[i] && (pick == -1 || best[i] < best[pick])) pick = i;
    }
    in_tree[pick] = 1;
    if (parent[pick] == k) {
      edges.push_back({removed[pick], link_to[pick]});
    } else {
      edges.push_back({removed[pick], removed[parent[pick]]});
    }
    for (int i = 0; i < k; ++i) {
      if (!in_tree[i]) {
        const double d = inst.dist(removed[pick], removed[i]);
        if (d < best[i]) {
          best[i] = d;
          parent[i] = pick;
        }
      }
    }
  }
  return edges;
}

namespace {

// Flow network of the forward-walk problem. Customer v splits into v- / v+
// with an implicit unit lower bound between them; targets feed zero-cost
// arcs into their group node. Node layout: 0 = depot source, then (minus,
// plus) per active customer, then targets, then groups.
class ForwardWalkFlow {
 public:
  ForwardWalkFlow(const VrtgInstance& inst, const DepotOrder& order,
                  std::vector<VertexId> active)
      : inst_(inst), order_(order), active_(std::move(active)) {
    m_ = static_cast<int>(active_.size());
    k_ = inst_.num_targets();
    g_ = static_cast<int>(inst_.groups.size());
    n_nodes_ = 1 + 2 * m_ + k_ + g_;
    fout_.assign(n_nodes_, {});
    fin_.assign(n_nodes_, {});
    pi_.assign(n_nodes_, 0.0);
    pi_[0] = 0.0;
    for (int i = 0; i < m_; ++i) {
      pi_[minus(i)] = pi_[plus(i)] = inst_.base->depot_dist(active_[i]);
    }
    for (int t = 0; t < k_; ++t) {
      pi_[target(t)] = inst_.base->depot_dist(inst_.targets[t]);
    }
    for (int gg = 0; gg < g_; ++gg) {
      double best = std::numeric_limits<double>::infinity();
      for (int ti : inst_.groups[gg]) {
        best = std::min(best, inst_.base->depot_dist(inst_.targets[ti]));
      }
      pi_[group(gg)] = best;
    }
  }

  int minus(int i) const { return 1 + 2 * i; }
  int plus(int i) const { return 2 + 2 * i; }
  int target(int t) const { return 1 + 2 * m_ + t; }
  int group(int gg) const { return 1 + 2 * m_ + k_ + gg; }

  WalkSolution solve() {
    route_groups();
    for (int i = 0; i < m_; ++i) augment_customer(i);
    assert_reduced_costs();
    return extract();
  }

 private:
  // Cost of the structural arc (u, v); infinity when absent.
  double arc_cost(int u, int v) const {
    const double inf = std::numeric_limits<double>::infinity();
    if (u == v) return inf;
    if (u == 0) {
      if (is_minus(v)) return inst_.base->depot_dist(active_of(v));
      if (is_target(v)) return inst_.base->depot_dist(orig_target(v));
      return inf;
    }
    if (is_minus(u)) return v == plus(cust_index(u)) ? 0.0 : inf;
    if (is_plus(u)) {
      const VertexId cu = active_of(u);
      if (v == 0) return inst_.base->depot_dist(cu);
      if (is_minus(v)) {
        const VertexId cv = active_of(v);
        return order_.precedes(cu, cv) ? inst_.base->dist(cu, cv) : inf;
      }
      if (is_plus(v)) {
        const VertexId cv = active_of(v);
        return order_.precedes(cv, cu) ? inst_.base->dist(cu, cv) : inf;
      }
      if (is_target(v)) return inst_.base->dist(cu, orig_target(v));
      return inf;
    }
    if (is_target(u)) {
      return v == group(inst_.group_of[u - 1 - 2 * m_]) ? 0.0 : inf;
    }
    return inf;
  }

  bool is_minus(int x) const { return x >= 1 && x <= 2 * m_ && x % 2 == 1; }
  bool is_plus(int x) const { return x >= 1 && x <= 2 * m_ && x % 2 == 0; }
  bool is_target(int x) const {
    return x > 2 * m_ && x <= 2 * m_ + k_;
  }
  int cust_index(int x) const { return (x - 1) / 2; }
  VertexId active_of(int x) const { return active_[cust_index(x)]; }
  VertexId orig_target(int x) const { return inst_.targets[x - 1 - 2 * m_]; }

  void push(int u, int v, int amount) {
    fout_[u][v] += amount;
    fin_[v][u] += amount;
    if (fout_[u][v] == 0) {
      fout_[u].erase(v);
      fin_[v].erase(u);
    }
  }

  void route_groups() {
    for (int gg = 0; gg < g_; ++gg) {
      int best_ti = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int ti : inst_.groups[gg]) {
        const double d = inst_.base->depot_dist(inst_.targets[ti]);
        if (d < best) {
          best = d;
          best_ti = ti;
        }
      }
      const int amount = static_cast<int>(inst_.b[gg]);
      push(0, target(best_ti), amount);
      push(target(best_ti), group(gg), amount);
    }
  }

  // Relax every residual arc out of u during Dijkstra.
  template <typename Relax>
  void for_each_residual(int u, Relax relax) const {
    if (u == 0) {
      for (int i = 0; i < m_; ++i) relax(minus(i), arc_cost(u, minus(i)));
      for (int t = 0; t < k_; ++t) relax(target(t), arc_cost(u, target(t)));
    } else if (is_minus(u)) {
      relax(plus(cust_index(u)), 0.0);
    } else if (is_plus(u)) {
      relax(0, arc_cost(u, 0));
      for (int j = 0; j < m_; ++j) {
        if (j == cust_index(u)) continue;
        const VertexId cu = active_of(u);
        const VertexId cv = active_[j];
        const double d = inst_.base->dist(cu, cv);
        if (order_.precedes(cu, cv)) {
          relax(minus(j), d);
        } else {
          relax(plus(j), d);
        }
      }
      for (int t = 0; t < k_; ++t) relax(target(t), arc_cost(u, target(t)));
    } else if (is_target(u)) {
      relax(group(inst_.group_of[u - 1 - 2 * m_]), 0.0);
    }
    // Reverse residual arcs of existing flow.
    auto it = fin_.begin() + u;
    for (const auto& [a, f] : *it) {
      if (f > 0) relax(a, -arc_cost(a, u));
    }
  }

  void augment_customer(int i) {
    const int src = plus(i);
    const int dst = minus(i);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n_nodes_, inf);
    std::vector<int> prev(n_nodes_, -1);
    std::vector<char> done(n_nodes_, 0);
    dist[src] = 0.0;
    for (;;) {
      int u = -1;
      for (int x = 0; x < n_nodes_; ++x) {
        if (!done[x] && dist[x] < inf && (u == -1 || dist[x] < dist[u])) {
          u = x;
        }
      }
      if (u == -1) break;
      done[u] = 1;
      if (u == dst) break;
      for_each_residual(u, [&](int v, double cost) {
        if (cost == inf || done[v]) return;
        double rc = cost + pi_[u] - pi_[v];
        if (rc < 0.0) rc = 0.0;  // floating round-off
        if (dist[u] + rc < dist[v]) {
          dist[v] = dist[u] + rc;
          prev[v] = u;
        }
      });
    }
    if (dist[dst] == inf) {
      throw std::logic_error("forward-walk network admits no augmenting path");
    }
    for (int x = 0; x < n_nodes_; ++x) {
      pi_[x] += std::min(dist[x], dist[dst]);
    }
    // Apply one unit along the shortest path.
    for (int v = dst; v != src; v = prev[v]) {
      const int u = prev[v];
      auto it = fout_[v].find(u);
      if (it != fout_[v].end() && it->second > 0) {
        push(v, u, -1);  // cancel opposing flow
      } else {
        push(u, v, 1);
      }
    }
  }

  void assert_reduced_costs() const {
    const double inf = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (double p : pi_) scale = std::max(scale, std::abs(p));
    const double tol = 1e-7 * scale;
    for (int u = 0; u < n_nodes_; ++u) {
      for_each_residual(u, [&](int v, double cost) {
        if (cost == inf) return;
        if (cost + pi_[u] - pi_[v] < -tol) {
          throw std::logic_error(
              "negative reduced cost after forward-walk flow");
        }
      });
    }
  }

  WalkSolution extract() const {
    WalkSolution h;
    for (int u = 0; u < n_nodes_; ++u) {
      for (const auto& [v, f] : fout_[u]) {
        if (f <= 0) continue;
        int from, to;
        if (u == 0) {
          from = kDepot;
        } else if (is_plus(u)) {
          from = active_of(u);
        } else {
          continue;  // minus->plus and target->group are internal
        }
        if (v == 0) {
          to = kDepot;
        } else if (is_minus(v) || is_plus(v)) {
          to = active_of(v);
        } else if (is_target(v)) {
          to = inst_.base->num_vertices() + (v - 1 - 2 * m_);
        } else {
          continue;
        }
        h.add_arc(from, to, f);
      }
    }
    return h;
  }

  const VrtgInstance& inst_;
  const DepotOrder& order_;
  std::vector<VertexId> active_;
  int m_ = 0, k_ = 0, g_ = 0, n_nodes_ = 0;
  std::vector<std::map<int, int>> fout_, fin_;
  std::vector<double> pi_;
};

}  // namespace

WalkSolution cheapest_forward_walk(const VrtgInstance& inst,
                                   const DepotOrder& order) {
  std::vector<VertexId> all(inst.num_customers());
  for (int v = 1; v <= inst.num_customers(); ++v) all[v - 1] = v;
  return cheapest_forward_walk(inst, order, all);
}

WalkSolution cheapest_forward_walk(const VrtgInstance& inst,
                                   const DepotOrder& order,
                                   const std::vector<VertexId>& active) {
  std::vector<VertexId> act = active;
  if (inst.num_targets() == 0 && !act.empty()) {
    throw DegenerateVrtgError(
        "degenerate VRTG instance: customers without targets");
  }
  // Process customers in depot distance order.
  std::sort(act.begin(), act.end(), [&](VertexId a, VertexId b) {
    return order.position[a] < order.position[b];
  });
  return ForwardWalkFlow(inst, order, std::move(act)).solve();
}

VrtgSolution solve_vrtg(const VrtgInstance& inst, double gamma) {
  if (inst.groups.empty()) {
    throw DegenerateVrtgError("VRTG instance has no target groups");
  }
  const Instance& base = *inst.base;
  const DepotOrder order = depot_order(base);
  NiceSubsetResult nice = compute_nice_subset(base, order, gamma);
  WalkSolution h = cheapest_forward_walk(inst, order, nice.survivors);
  auto forest = connect_removed(base, nice.removed);
  for (auto [u, v] : forest) {
    h.add_arc(u, v, 1);
    h.add_arc(v, u, 1);
  }
  return walks_to_solution(inst, h);
}

}  // namespace capra

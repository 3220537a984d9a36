#include "capra/matching.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace capra {

Matching tree_matching(int num_vertices,
                       const std::vector<std::pair<int, int>>& tree_edges,
                       const std::vector<int>& u_set,
                       const MatchCostFn& cost) {
  if (u_set.size() % 2 != 0) {
    throw ValidationError("tree matching needs an even vertex subset");
  }
  if (num_vertices == 0) return {};
  if (static_cast<int>(tree_edges.size()) != num_vertices - 1) {
    throw ValidationError("edge set is not a spanning tree");
  }

  std::vector<std::set<int>> adj(num_vertices);
  for (auto [a, b] : tree_edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<char> in_u(num_vertices, 0);
  std::vector<int> payload(num_vertices);
  for (int v = 0; v < num_vertices; ++v) payload[v] = v;
  for (int v : u_set) in_u[v] = 1;

  std::set<int> leaves;
  for (int v = 0; v < num_vertices; ++v) {
    if (adj[v].size() == 1) leaves.insert(v);
  }

  Matching m;
  int remaining = num_vertices;
  while (remaining > 1) {
    if (leaves.empty()) {
      throw ValidationError("edge set is not a spanning tree");
    }
    const int v = *leaves.begin();
    leaves.erase(leaves.begin());
    const int w = *adj[v].begin();
    adj[v].clear();
    adj[w].erase(v);
    if (adj[w].size() == 1) leaves.insert(w);
    --remaining;

    if (!in_u[v]) continue;
    if (in_u[w]) {
      m.pairs.push_back({payload[v], payload[w]});
      in_u[w] = 0;
    } else {
      in_u[w] = 1;
      payload[w] = payload[v];
    }
  }
  for (int v = 0; v < num_vertices; ++v) {
    if (in_u[v] && !adj[v].empty()) {
      throw ValidationError("edge set is not a spanning tree");
    }
  }
  // A U vertex left at the root would mean odd |U|; guarded above.
  for (auto& [a, b] : m.pairs) m.cost += cost(a, b);
  return m;
}

Matching exact_matching_subset_dp(const std::vector<int>& u_set,
                                  const MatchCostFn& cost) {
  const int k = static_cast<int>(u_set.size());
  if (k % 2 != 0) {
    throw ValidationError("perfect matching needs an even vertex subset");
  }
  if (k > 16) throw ValidationError("subset-DP matching limited to 16");
  if (k == 0) return {};

  const int full = 1 << k;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full, inf);
  std::vector<int> choice(full, -1);
  dp[0] = 0.0;
  for (int mask = 0; mask < full; ++mask) {
    if (dp[mask] == inf) continue;
    int i = 0;
    while (i < k && (mask & (1 << i))) ++i;
    if (i == k) continue;
    for (int j = i + 1; j < k; ++j) {
      if (mask & (1 << j)) continue;
      const int nmask = mask | (1 << i) | (1 << j);
      const double cand = dp[mask] + cost(u_set[i], u_set[j]);
      if (cand < dp[nmask]) {
        dp[nmask] = cand;
        choice[nmask] = i * 16 + j;
      }
    }
  }
  Matching m;
  m.cost = dp[full - 1];
  int mask = full - 1;
  while (mask) {
    const int i = choice[mask] / 16;
    const int j = choice[mask] % 16;
    m.pairs.push_back({u_set[i], u_set[j]});
    mask &= ~((1 << i) | (1 << j));
  }
  std::reverse(m.pairs.begin(), m.pairs.end());
  return m;
}

Matching group_matching(
    const VrtgInstance& inst,
    const std::vector<std::vector<int>>& odd_targets_per_group) {
  if (odd_targets_per_group.size() != inst.groups.size()) {
    throw ValidationError("odd-target list does not match the groups");
  }
  const auto target_dist = [&](int ti, int tj) {
    return inst.base->dist(inst.targets[ti], inst.targets[tj]);
  };

  Matching total;
  for (size_t g = 0; g < inst.groups.size(); ++g) {
    const auto& members = inst.groups[g];
    const auto& odd = odd_targets_per_group[g];
    if (odd.size() % 2 != 0) {
      throw ValidationError("odd-endpoint targets with broken parity");
    }
    if (odd.empty()) continue;

    // Local indexing of the group's targets.
    std::vector<int> local_of_target(inst.num_targets(), -1);
    for (size_t i = 0; i < members.size(); ++i) {
      local_of_target[members[i]] = static_cast<int>(i);
    }
    std::vector<int> odd_local;
    for (int ti : odd) {
      if (ti < 0 || ti >= inst.num_targets() || local_of_target[ti] < 0) {
        throw ValidationError("odd target outside its group");
      }
      odd_local.push_back(local_of_target[ti]);
    }

    // Edges between targets whose B-sets intersect; the group is one
    // connected component of these, so a spanning tree exists.
    std::vector<std::vector<int>> customer_targets(
        inst.num_customers() + 1);
    for (size_t i = 0; i < members.size(); ++i) {
      for (VertexId v : inst.b_sets[members[i]]) {
        customer_targets[v].push_back(static_cast<int>(i));
      }
    }
    std::set<std::pair<int, int>> overlap_edges;
    for (VertexId v = 1; v <= inst.num_customers(); ++v) {
      const auto& lst = customer_targets[v];
      for (size_t i = 1; i < lst.size(); ++i) {
        overlap_edges.insert({std::min(lst[0], lst[i]),
                              std::max(lst[0], lst[i])});
      }
    }

    // Prim restricted to overlap edges.
    const int k = static_cast<int>(members.size());
    std::vector<std::vector<std::pair<int, double>>> adj(k);
    for (auto [a, b] : overlap_edges) {
      const double d = target_dist(members[a], members[b]);
      adj[a].push_back({b, d});
      adj[b].push_back({a, d});
    }
    std::vector<std::pair<int, int>> tree;
    if (k > 1) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      std::vector<char> in_tree(k, 0);
      std::vector<double> best(k, inf);
      std::vector<int> parent(k, -1);
      best[0] = 0.0;
      for (int step = 0; step < k; ++step) {
        int pick = -1;
        for (int i = 0; i < k; ++i) {
          if (!in_tree[i] && (pick == -1 || best[i] < best[pick])) pick = i;
        }
        if (best[pick] == inf) {
          throw std::logic_error("target group is not connected");
        }
        in_tree[pick] = 1;
        if (parent[pick] >= 0) tree.push_back({parent[pick], pick});
        for (auto [to, d] : adj[pick]) {
          if (!in_tree[to] && d < best[to]) {
            best[to] = d;
            parent[to] = pick;
          }
        }
      }
    }

    const auto local_cost = [&](int a, int b) {
      return target_dist(members[a], members[b]);
    };
    Matching via_tree = tree_matching(k, tree, odd_local, local_cost);
    Matching chosen = std::move(via_tree);
    if (odd_local.size() <= 16) {
      Matching exact = exact_matching_subset_dp(odd_local, local_cost);
      if (exact.cost < chosen.cost) chosen = std::move(exact);
    }
    for (auto [a, b] : chosen.pairs) {
      total.pairs.push_back({members[a], members[b]});
    }
    total.cost += chosen.cost;
  }
  return total;
}

}  // namespace capra

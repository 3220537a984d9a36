#include "capra/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace capra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest depot-rooted paths through every customer subset: dp[mask][j] is
// the cheapest path from the depot visiting exactly `mask`, ending at the
// j-th listed customer.
struct SubsetPaths {
  const Instance& inst;
  std::vector<VertexId> verts;
  std::vector<std::vector<double>> dp;
  std::vector<std::vector<int>> pre;

  SubsetPaths(const Instance& i, std::vector<VertexId> v)
      : inst(i), verts(std::move(v)) {
    const int n = static_cast<int>(verts.size());
    const int full = 1 << n;
    dp.assign(full, std::vector<double>(std::max(n, 1), kInf));
    pre.assign(full, std::vector<int>(std::max(n, 1), -1));
    for (int j = 0; j < n; ++j) {
      dp[1 << j][j] = inst.depot_dist(verts[j]);
    }
    for (int mask = 1; mask < full; ++mask) {
      for (int j = 0; j < n; ++j) {
        if (!(mask & (1 << j)) || dp[mask][j] == kInf) continue;
        for (int k = 0; k < n; ++k) {
          if (mask & (1 << k)) continue;
          const double cand =
              dp[mask][j] + inst.dist(verts[j], verts[k]);
          const int nmask = mask | (1 << k);
          if (cand < dp[nmask][k]) {
            dp[nmask][k] = cand;
            pre[nmask][k] = j;
          }
        }
      }
    }
  }

  int size() const { return static_cast<int>(verts.size()); }

  // Cheapest cycle through the depot and `mask`.
  double cycle_cost(int mask, int* out_end = nullptr) const {
    if (mask == 0) return 0.0;
    double best = kInf;
    for (int j = 0; j < size(); ++j) {
      if (!(mask & (1 << j)) || dp[mask][j] == kInf) continue;
      const double cand = dp[mask][j] + inst.depot_dist(verts[j]);
      if (cand < best) {
        best = cand;
        if (out_end) *out_end = j;
      }
    }
    return best;
  }

  // Cheapest path from the depot through `mask` to `tail` (a vertex id).
  double path_to(int mask, VertexId tail, int* out_end = nullptr) const {
    if (mask == 0) return inst.depot_dist(tail);
    double best = kInf;
    for (int j = 0; j < size(); ++j) {
      if (!(mask & (1 << j)) || dp[mask][j] == kInf) continue;
      const double cand = dp[mask][j] + inst.dist(verts[j], tail);
      if (cand < best) {
        best = cand;
        if (out_end) *out_end = j;
      }
    }
    return best;
  }

  std::vector<VertexId> order_of(int mask, int end) const {
    std::vector<VertexId> out;
    int j = end;
    int m = mask;
    while (j != -1) {
      out.push_back(verts[j]);
      const int pj = pre[m][j];
      m ^= 1 << j;
      j = pj;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace

Solution exact_cvrp(const Instance& inst, int limit) {
  const int n = inst.num_customers();
  if (n > limit) {
    throw ValidationError("instance too large for the exact CVRP oracle");
  }
  if (n == 0) return {};

  std::vector<VertexId> verts(n);
  std::iota(verts.begin(), verts.end(), 1);
  SubsetPaths paths(inst, verts);

  const int full = 1 << n;
  std::vector<double> group_demand(full, 0.0);
  for (int mask = 1; mask < full; ++mask) {
    const int low = mask & -mask;
    group_demand[mask] =
        group_demand[mask ^ low] +
        inst.demand(verts[static_cast<int>(std::countr_zero(
            static_cast<unsigned>(low)))]);
  }
  std::vector<double> cycle(full, kInf);
  std::vector<int> cycle_end(full, -1);
  for (int mask = 1; mask < full; ++mask) {
    if (group_demand[mask] <= 1.0 + kFeasibilityTol) {
      int end = -1;
      cycle[mask] = paths.cycle_cost(mask, &end);
      cycle_end[mask] = end;
    }
  }

  std::vector<double> best(full, kInf);
  std::vector<int> pick(full, 0);
  best[0] = 0.0;
  for (int mask = 1; mask < full; ++mask) {
    const int low = mask & -mask;
    for (int sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || cycle[sub] == kInf) continue;
      const double cand = cycle[sub] + best[mask ^ sub];
      if (cand < best[mask]) {
        best[mask] = cand;
        pick[mask] = sub;
      }
    }
  }
  if (best[full - 1] == kInf) {
    throw ValidationError("no feasible partition (a demand exceeds 1?)");
  }

  std::vector<Tour> tours;
  for (int mask = full - 1; mask;) {
    const int sub = pick[mask];
    tours.push_back(
        make_tour(inst, paths.order_of(sub, cycle_end[sub])));
    mask ^= sub;
  }
  std::reverse(tours.begin(), tours.end());
  return make_solution(inst, std::move(tours));
}

namespace {

// All size-k multisets over `items`, emitted in lexicographic order.
void multisets(const std::vector<int>& items, int k, std::vector<int>& cur,
               size_t from, const std::function<void()>& emit) {
  if (k == 0) {
    emit();
    return;
  }
  for (size_t i = from; i < items.size(); ++i) {
    cur.push_back(items[i]);
    multisets(items, k - 1, cur, i, emit);
    cur.pop_back();
  }
}

}  // namespace

VrtgSolution exact_vrtg(const VrtgInstance& inst, int limit_customers,
                        int limit_b) {
  const int n = inst.num_customers();
  const long long btot = inst.total_b();
  if (n > limit_customers || btot > limit_b) {
    throw ValidationError("instance too large for the exact VRTG oracle");
  }
  if (inst.groups.empty() && n > 0) {
    throw ValidationError("VRTG oracle needs at least one group");
  }

  std::vector<VertexId> verts(n);
  std::iota(verts.begin(), verts.end(), 1);
  SubsetPaths paths(*inst.base, verts);
  const int full = 1 << n;
  const int nwalks = static_cast<int>(btot);

  // Endpoint choices per group, then the cross product.
  std::vector<std::vector<std::vector<int>>> per_group;
  for (size_t g = 0; g < inst.groups.size(); ++g) {
    std::vector<std::vector<int>> choices;
    std::vector<int> cur;
    multisets(inst.groups[g], static_cast<int>(inst.b[g]), cur, 0,
              [&] { choices.push_back(cur); });
    per_group.push_back(std::move(choices));
  }

  VrtgSolution best;
  best.cost = kInf;

  std::vector<int> endpoints(nwalks);
  std::function<void(size_t, int)> walk_groups = [&](size_t g, int at) {
    if (g == per_group.size()) {
      // Assignment DP: dp[i][rest] = cheapest way to route walks i.. and
      // the final depot cycle so that exactly `rest` stays uncovered.
      std::vector<std::vector<double>> dp(
          nwalks + 1, std::vector<double>(full, kInf));
      std::vector<std::vector<int>> take(
          nwalks + 1, std::vector<int>(full, 0));
      for (int rest = 0; rest < full; ++rest) {
        dp[nwalks][rest] = paths.cycle_cost(rest);
        take[nwalks][rest] = rest;
      }
      for (int i = nwalks - 1; i >= 0; --i) {
        const VertexId t = inst.targets[endpoints[i]];
        for (int rest = 0; rest < full; ++rest) {
          int sub = rest;
          for (;;) {
            if (dp[i + 1][rest ^ sub] < kInf) {
              const double cand =
                  paths.path_to(sub, t) + dp[i + 1][rest ^ sub];
              if (cand < dp[i][rest]) {
                dp[i][rest] = cand;
                take[i][rest] = sub;
              }
            }
            if (sub == 0) break;
            sub = (sub - 1) & rest;
          }
        }
      }
      if (dp[0][full - 1] >= best.cost) return;

      VrtgSolution sol;
      int rest = full - 1;
      for (int i = 0; i < nwalks; ++i) {
        const int sub = take[i][rest];
        const VertexId t = inst.targets[endpoints[i]];
        VrtgTour tour;
        tour.nodes.push_back(kDepot);
        if (sub) {
          int end = -1;
          paths.path_to(sub, t, &end);
          for (VertexId v : paths.order_of(sub, end)) {
            tour.nodes.push_back(v);
          }
        }
        tour.nodes.push_back(inst.target_node(endpoints[i]));
        tour.cost = paths.path_to(sub, t);
        sol.tours.push_back(std::move(tour));
        rest ^= sub;
      }
      if (rest) {
        VrtgTour cyc;
        cyc.is_cycle = true;
        cyc.nodes.push_back(kDepot);
        int end = -1;
        cyc.cost = paths.cycle_cost(rest, &end);
        for (VertexId v : paths.order_of(rest, end)) cyc.nodes.push_back(v);
        sol.tours.push_back(std::move(cyc));
      }
      for (const auto& t : sol.tours) sol.cost += t.cost;
      if (sol.cost < best.cost) best = std::move(sol);
      return;
    }
    for (const auto& choice : per_group[g]) {
      std::copy(choice.begin(), choice.end(), endpoints.begin() + at);
      walk_groups(g + 1, at + static_cast<int>(choice.size()));
    }
  };
  walk_groups(0, 0);

  if (best.cost == kInf) {
    best = VrtgSolution{};  // no groups, no customers
  }
  return best;
}

double zeta_value(double tau, double rho, double epsilon) {
  const double head = (3.0 * rho + tau - 4.0 * tau * rho) / (1.0 - rho);
  return head + epsilon / (tau * rho) * (1.0 - tau * rho - head);
}

namespace {

struct TourPoint {
  VertexId customer;
  double demand;
  bool in_budget = false;  // selected into the target budget set
  int budget_group = -1;
};

}  // namespace

WeakFractional build_weak_fractional(const Instance& inst,
                                     const Solution& sol,
                                     const VrtgInstance& vrtg,
                                     const ClusterParams& params) {
  WeakFractional x;
  const int n = inst.num_customers();
  const double tau = params.tau;

  // Mutable per-tour point lists; splitting inserts an adjacent copy.
  std::vector<std::vector<TourPoint>> tours(sol.tours.size());
  for (size_t q = 0; q < sol.tours.size(); ++q) {
    for (VertexId v : sol.tours[q].customers) {
      tours[q].push_back({v, inst.demand(v)});
    }
  }

  // Customer -> group whose B-set contains it (B-sets of distinct groups
  // are disjoint), plus the first covering target per customer.
  std::vector<int> group_of_customer(n + 1, -1);
  std::vector<int> target_of_customer(n + 1, -1);
  for (size_t g = 0; g < vrtg.groups.size(); ++g) {
    for (int ti : vrtg.groups[g]) {
      for (VertexId v : vrtg.b_sets[ti]) {
        if (group_of_customer[v] == -1) {
          group_of_customer[v] = static_cast<int>(g);
          target_of_customer[v] = ti;
        }
      }
    }
  }

  // Peak-cluster membership per tour.
  std::vector<std::vector<char>> in_cluster(sol.tours.size(),
                                            std::vector<char>(n + 1, 0));
  for (size_t q = 0; q < sol.tours.size(); ++q) {
    if (sol.tours[q].customers.empty()) continue;
    for (VertexId v :
         peak_cluster(inst, sol.tours[q], params).members) {
      in_cluster[q][v] = 1;
    }
  }

  // Budget selection per group: peak-cluster demand first, exactly 1 - tau
  // per qualifying tour, then arbitrary B-set customers by index.
  auto split_point = [&](std::vector<TourPoint>& pts, size_t i,
                         double first_part) {
    TourPoint copy = pts[i];
    x.splits.push_back({pts[i].customer, first_part});
    pts[i].demand = first_part;
    copy.demand -= first_part;
    pts.insert(pts.begin() + i + 1, copy);
  };

  for (size_t g = 0; g < vrtg.groups.size(); ++g) {
    const double need_total = (1.0 - tau) * static_cast<double>(vrtg.b[g]) / 2.0;
    double selected = 0.0;

    for (size_t q = 0; q < tours.size(); ++q) {
      double cluster_in_b = 0.0;
      for (const TourPoint& p : tours[q]) {
        if (in_cluster[q][p.customer] &&
            group_of_customer[p.customer] == static_cast<int>(g)) {
          cluster_in_b += p.demand;
        }
      }
      if (cluster_in_b < 1.0 - tau) continue;
      double want = 1.0 - tau;
      for (size_t i = 0; i < tours[q].size() && want > kFeasibilityTol;
           ++i) {
        TourPoint& p = tours[q][i];
        if (p.in_budget || !in_cluster[q][p.customer] ||
            group_of_customer[p.customer] != static_cast<int>(g)) {
          continue;
        }
        if (p.demand > want + kFeasibilityTol) {
          split_point(tours[q], i, want);
        }
        tours[q][i].in_budget = true;
        tours[q][i].budget_group = static_cast<int>(g);
        want -= tours[q][i].demand;
        selected += tours[q][i].demand;
      }
    }

    // Padding from the group's B-set, ascending customer index.
    for (VertexId v = 1; v <= n && selected < need_total - kFeasibilityTol;
         ++v) {
      if (group_of_customer[v] != static_cast<int>(g)) continue;
      for (size_t q = 0;
           q < tours.size() && selected < need_total - kFeasibilityTol;
           ++q) {
        for (size_t i = 0; i < tours[q].size(); ++i) {
          TourPoint& p = tours[q][i];
          if (p.customer != v || p.in_budget ||
              p.demand <= kFeasibilityTol) {
            continue;
          }
          const double want = need_total - selected;
          if (p.demand > want + kFeasibilityTol) {
            split_point(tours[q], i, want);
          }
          tours[q][i].in_budget = true;
          tours[q][i].budget_group = static_cast<int>(g);
          selected += tours[q][i].demand;
          if (selected >= need_total - kFeasibilityTol) break;
        }
      }
    }
    if (selected < need_total - kFeasibilityTol) {
      std::ostringstream os;
      os << "group " << g << " budget infeasible: have " << selected
         << ", need " << need_total;
      throw ValidationError(os.str());
    }
    if (std::abs(selected - need_total) > 0 &&
        std::abs(selected - need_total) <= kFeasibilityTol) {
      x.floor_boundary_flag = true;
    }
  }

  // Walks. Bodies are the tour-split paths (and the residual cycles); the
  // final arcs into targets or the depot are tagged separately.
  auto push_nodes = [&](std::vector<int>& nodes, VertexId v) {
    if (nodes.empty() || nodes.back() != v) nodes.push_back(v);
  };

  for (size_t q = 0; q < tours.size(); ++q) {
    const auto& pts = tours[q];
    const int k = static_cast<int>(pts.size());
    double tour_demand = 0.0;
    for (const auto& p : pts) tour_demand += p.demand;

    for (int i = 0; i < k; ++i) {
      const TourPoint& p = pts[i];
      if (p.demand <= kFeasibilityTol) continue;
      const int final_node =
          p.in_budget ? vrtg.target_node(target_of_customer[p.customer])
                      : kDepot;
      // Two depot-to-p paths along the tour, each extended by the final
      // arc and weighted by the point's demand.
      WeakFractional::Walk fwd;
      fwd.weight = p.demand;
      fwd.has_final_arc = true;
      fwd.nodes.push_back(kDepot);
      for (int j = 0; j <= i; ++j) push_nodes(fwd.nodes, pts[j].customer);
      fwd.nodes.push_back(final_node);

      WeakFractional::Walk bwd;
      bwd.weight = p.demand;
      bwd.has_final_arc = true;
      bwd.nodes.push_back(kDepot);
      for (int j = k - 1; j >= i; --j) push_nodes(bwd.nodes, pts[j].customer);
      bwd.nodes.push_back(final_node);

      x.walks.push_back(std::move(fwd));
      x.walks.push_back(std::move(bwd));
    }

    const double residual = 1.0 - tour_demand;
    if (residual > kFeasibilityTol && k > 0) {
      WeakFractional::Walk cyc;
      cyc.weight = residual;
      cyc.has_final_arc = false;
      cyc.nodes.push_back(kDepot);
      for (const auto& p : pts) push_nodes(cyc.nodes, p.customer);
      cyc.nodes.push_back(kDepot);
      x.walks.push_back(std::move(cyc));
    }
  }

  // Aggregate the arc vector and the cost accounting.
  for (const auto& w : x.walks) {
    const size_t last = w.nodes.size() - 1;
    for (size_t i = 1; i < w.nodes.size(); ++i) {
      const int a = w.nodes[i - 1];
      const int b = w.nodes[i];
      if (a == b) continue;
      x.arc_values[{a, b}] += w.weight;
      const double c = vrtg.dist(a, b);
      const double det = vrtg.detour(a, b);
      if (w.has_final_arc && i == last) {
        x.final_cost += w.weight * c;
      } else {
        x.body_cost += w.weight * c;
        x.body_detour += w.weight * det;
      }
    }
  }
  return x;
}

WeakFractionalReport check_weak_fractional(const WeakFractional& x,
                                           const Instance& inst,
                                           const VrtgInstance& vrtg,
                                           double opt_cost,
                                           const ClusterParams& params) {
  WeakFractionalReport rep;
  const int n = inst.num_customers();
  std::vector<double> coverage(n + 1, 0.0);
  std::vector<double> group_weight(vrtg.groups.size(), 0.0);

  for (const auto& w : x.walks) {
    if (w.weight < -kFeasibilityTol) {
      rep.violations.push_back("negative walk weight");
    }
    if (w.nodes.empty() || w.nodes.front() != kDepot) {
      rep.violations.push_back("walk does not start at the depot");
      continue;
    }
    const int last = w.nodes.back();
    if (last != kDepot && !vrtg.is_target_node(last)) {
      rep.violations.push_back("walk ends outside {s} u targets");
      continue;
    }
    for (size_t i = 1; i + 1 < w.nodes.size(); ++i) {
      const int v = w.nodes[i];
      if (v < 1 || v > n) {
        rep.violations.push_back("walk interior outside the customers");
        break;
      }
    }
    std::vector<char> seen(n + 1, 0);
    for (size_t i = 1; i < w.nodes.size(); ++i) {
      const int v = w.nodes[i];
      if (v >= 1 && v <= n && !seen[v]) {
        seen[v] = 1;
        coverage[v] += w.weight;
      }
    }
    if (vrtg.is_target_node(last)) {
      group_weight[vrtg.group_of[vrtg.target_index(last)]] += w.weight;
    }
  }

  rep.min_coverage = n == 0 ? 1.0 : kInf;
  for (VertexId v = 1; v <= n; ++v) {
    rep.min_coverage = std::min(rep.min_coverage, coverage[v]);
    if (coverage[v] < 1.0 - 1e-9) {
      std::ostringstream os;
      os << "customer " << v << " covered only " << coverage[v];
      rep.violations.push_back(os.str());
    }
  }
  for (size_t g = 0; g < vrtg.groups.size(); ++g) {
    const double want = (1.0 - params.tau) * static_cast<double>(vrtg.b[g]);
    if (std::abs(group_weight[g] - want) > 1e-9 * (1.0 + want)) {
      std::ostringstream os;
      os << "group " << g << " weight " << group_weight[g] << ", want "
         << want;
      rep.violations.push_back(os.str());
    }
  }

  const double radial = inst.radial_lower_bound();
  rep.epsilon_actual =
      opt_cost > 0 ? std::max(0.0, 1.0 - radial / opt_cost) : 0.0;
  rep.zeta = zeta_value(params.tau, params.rho, rep.epsilon_actual);
  const double tol = 1e-9 * (1.0 + opt_cost);
  rep.detour_bound = x.body_detour <= rep.epsilon_actual * opt_cost + tol;
  rep.body_cost_bound = x.body_cost <= opt_cost + tol;
  rep.total_cost_bound = x.cost() < (1.0 + rep.zeta) * opt_cost + tol;
  return rep;
}

}  // namespace capra

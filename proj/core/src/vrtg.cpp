#include "capra/vrtg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace capra {

void WalkSolution::add_arc(int u, int v, int mult) {
  if (mult == 0) return;
  auto it = arcs.find({u, v});
  if (it == arcs.end()) {
    arcs.emplace(std::make_pair(u, v), mult);
  } else {
    it->second += mult;
    if (it->second == 0) arcs.erase(it);
  }
}

double WalkSolution::cost(const VrtgInstance& inst) const {
  double c = 0.0;
  for (const auto& [arc, mult] : arcs) {
    c += mult * inst.dist(arc.first, arc.second);
  }
  return c;
}

int WalkSolution::size() const {
  int s = 0;
  for (const auto& [arc, mult] : arcs) s += mult;
  return s;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

double vrtg_tour_cost(const VrtgInstance& inst, const VrtgTour& t) {
  double c = 0.0;
  for (size_t i = 1; i < t.nodes.size(); ++i) {
    c += inst.dist(t.nodes[i - 1], t.nodes[i]);
  }
  if (t.is_cycle && t.nodes.size() > 1) c += inst.dist(t.nodes.back(), 0);
  return c;
}

}  // namespace

VrtgVerifyReport check_walk_solution(const VrtgInstance& inst,
                                     const WalkSolution& h,
                                     const std::vector<VertexId>* active,
                                     const DepotOrder* order) {
  VrtgVerifyReport rep;
  const int nodes = inst.num_nodes();
  const int n = inst.num_customers();
  std::vector<int> in(nodes, 0), out(nodes, 0), forward_in(nodes, 0);
  Dsu dsu(nodes);

  for (const auto& [arc, mult] : h.arcs) {
    auto [u, v] = arc;
    if (mult < 0) rep.violations.push_back("negative arc multiplicity");
    if (u < 0 || u >= nodes || v < 0 || v >= nodes || u == v) {
      rep.violations.push_back("arc outside the digraph");
      continue;
    }
    if (inst.is_target_node(u)) {
      rep.violations.push_back("arc leaving a target");
      continue;
    }
    if (v == kDepot || (v >= 1 && v <= n) || inst.is_target_node(v)) {
      out[u] += mult;
      in[v] += mult;
      dsu.unite(u, v);
      if (order && v >= 1 && v <= n &&
          (u == kDepot || order->precedes(u, v))) {
        forward_in[v] += mult;
      }
    }
  }

  std::vector<char> is_active(n + 1, active == nullptr ? 1 : 0);
  if (active) {
    for (VertexId v : *active) is_active[v] = 1;
  }

  for (VertexId v = 1; v <= n; ++v) {
    if (!is_active[v]) continue;
    if (in[v] != out[v]) {
      std::ostringstream os;
      os << "customer " << v << " unbalanced: in " << in[v] << " out "
         << out[v];
      rep.violations.push_back(os.str());
    }
    if (in[v] == 0) {
      std::ostringstream os;
      os << "customer " << v << " not connected";
      rep.violations.push_back(os.str());
    } else if (dsu.find(v) != dsu.find(kDepot)) {
      std::ostringstream os;
      os << "customer " << v << " in a component without the depot";
      rep.violations.push_back(os.str());
    }
    if (order && forward_in[v] == 0) {
      std::ostringstream os;
      os << "customer " << v << " has no forward entering arc";
      rep.violations.push_back(os.str());
    }
  }

  for (size_t g = 0; g < inst.groups.size(); ++g) {
    long long got = 0;
    for (int ti : inst.groups[g]) got += in[inst.target_node(ti)];
    if (got != inst.b[g]) {
      std::ostringstream os;
      os << "group " << g << " receives " << got << " arcs, wants "
         << inst.b[g];
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

VrtgSolution walks_to_solution(const VrtgInstance& inst,
                               const WalkSolution& h) {
  {
    VrtgVerifyReport rep = check_walk_solution(inst, h);
    if (!rep.ok()) {
      throw ValidationError("walk solution invalid: " + rep.violations[0]);
    }
  }
  const int nodes = inst.num_nodes();

  // Arc instances per node, plus a virtual return arc (t -> depot) closing
  // each target arrival; afterwards every node is balanced and one Euler
  // circuit from the depot covers everything.
  std::vector<std::vector<int>> adj(nodes);
  for (const auto& [arc, mult] : h.arcs) {
    for (int i = 0; i < mult; ++i) adj[arc.first].push_back(arc.second);
  }
  for (int t = 0; t < inst.num_targets(); ++t) {
    const int tn = inst.target_node(t);
    int arrivals = 0;
    for (const auto& [arc, mult] : h.arcs) {
      if (arc.second == tn) arrivals += mult;
    }
    adj[tn].assign(arrivals, kDepot);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<size_t> next(nodes, 0);
  std::vector<int> stack{kDepot};
  std::vector<int> circuit;
  while (!stack.empty()) {
    const int v = stack.back();
    if (next[v] < adj[v].size()) {
      stack.push_back(adj[v][next[v]++]);
    } else {
      circuit.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  size_t used = 0;
  for (const auto& a : adj) used += a.size();
  if (circuit.size() != used + 1) {
    throw ValidationError("walk solution arcs are not connected");
  }

  // Cut the circuit at every depot visit; segments end either at a target
  // (followed by its virtual return) or back at the depot (a cycle).
  VrtgSolution sol;
  std::vector<char> seen(nodes, 0);
  size_t i = 0;
  while (i + 1 < circuit.size()) {
    VrtgTour tour;
    tour.nodes.push_back(kDepot);
    std::fill(seen.begin(), seen.end(), 0);
    size_t j = i + 1;
    while (j < circuit.size()) {
      const int v = circuit[j];
      if (v == kDepot) {
        tour.is_cycle = true;
        break;
      }
      if (inst.is_target_node(v)) {
        tour.nodes.push_back(v);
        ++j;  // consume the virtual return arc
        break;
      }
      if (!seen[v]) {
        seen[v] = 1;
        tour.nodes.push_back(v);
      }
      ++j;
    }
    i = j;
    if (tour.is_cycle && tour.nodes.size() == 1) continue;  // empty cycle
    tour.cost = vrtg_tour_cost(inst, tour);
    sol.tours.push_back(std::move(tour));
  }
  for (const auto& t : sol.tours) sol.cost += t.cost;
  return sol;
}

WalkSolution solution_to_walks(const VrtgInstance& inst,
                               const VrtgSolution& sol) {
  WalkSolution h;
  (void)inst;
  for (const VrtgTour& t : sol.tours) {
    for (size_t i = 1; i < t.nodes.size(); ++i) {
      h.add_arc(t.nodes[i - 1], t.nodes[i]);
    }
    if (t.is_cycle && t.nodes.size() > 1) h.add_arc(t.nodes.back(), kDepot);
  }
  return h;
}

VrtgVerifyReport verify_vrtg(const VrtgInstance& inst,
                             const VrtgSolution& sol) {
  VrtgVerifyReport rep;
  const int n = inst.num_customers();
  std::vector<int> covered(n + 1, 0);
  std::vector<long long> endings(inst.groups.size(), 0);

  for (size_t qi = 0; qi < sol.tours.size(); ++qi) {
    const VrtgTour& t = sol.tours[qi];
    std::ostringstream tag;
    tag << "tour " << qi;
    if (t.nodes.empty() || t.nodes.front() != kDepot) {
      rep.violations.push_back(tag.str() + ": does not start at the depot");
      continue;
    }
    std::vector<char> seen(inst.num_nodes(), 0);
    bool shape_ok = true;
    for (size_t i = 1; i < t.nodes.size(); ++i) {
      const int v = t.nodes[i];
      const bool last = i + 1 == t.nodes.size();
      if (v == kDepot) {
        rep.violations.push_back(tag.str() + ": revisits the depot");
        shape_ok = false;
        break;
      }
      if (inst.is_target_node(v)) {
        if (!last || t.is_cycle) {
          rep.violations.push_back(tag.str() +
                                   ": target in the interior of a tour");
          shape_ok = false;
          break;
        }
      } else if (v < 1 || v > n) {
        rep.violations.push_back(tag.str() + ": unknown vertex");
        shape_ok = false;
        break;
      } else if (seen[v]) {
        rep.violations.push_back(tag.str() + ": repeats a customer");
        shape_ok = false;
        break;
      } else {
        seen[v] = 1;
        covered[v]++;
      }
    }
    if (!shape_ok) continue;
    if (!t.is_cycle) {
      if (t.nodes.size() < 2 || !inst.is_target_node(t.nodes.back())) {
        rep.violations.push_back(tag.str() + ": path does not end at a target");
        continue;
      }
      endings[inst.group_of[inst.target_index(t.nodes.back())]]++;
    }
  }

  for (VertexId v = 1; v <= n; ++v) {
    if (covered[v] == 0) {
      std::ostringstream os;
      os << "customer " << v << " not covered";
      rep.violations.push_back(os.str());
    }
  }
  for (size_t g = 0; g < inst.groups.size(); ++g) {
    if (endings[g] != inst.b[g]) {
      std::ostringstream os;
      os << "group " << g << " has " << endings[g] << " tour endpoints, wants "
         << inst.b[g];
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

nlohmann::json vrtg_solution_to_json(const VrtgInstance& inst,
                                     const VrtgSolution& sol) {
  nlohmann::json j;
  j["cost"] = sol.cost;
  auto tours = nlohmann::json::array();
  for (const VrtgTour& t : sol.tours) {
    nlohmann::json jt;
    jt["nodes"] = t.nodes;
    jt["cycle"] = t.is_cycle;
    jt["cost"] = t.cost;
    tours.push_back(std::move(jt));
  }
  j["tours"] = std::move(tours);
  (void)inst;
  return j;
}

}  // namespace capra

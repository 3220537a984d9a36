#include "capra/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "capra/matching.hpp"
#include "capra/solver.hpp"
#include "capra/vrtg.hpp"

namespace capra {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("CAPRA_LOG");
    if (!env) return 0;
    const std::string s(env);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[capra] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[capra] " << msg << "\n";
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["tau"] = cluster.tau;
  j["rho"] = cluster.rho;
  j["gamma"] = cluster.gamma;
  j["epsilon"] = cluster.epsilon;
  j["tsp"] = std::string(to_string(tsp));
  j["variant"] = std::string(to_string(variant));
  j["held_karp_limit"] = held_karp_limit;
  j["seed"] = seed;
  return j;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["algo"] = algo;
  j["variant"] = variant;
  j["lower_bound"] = lower_bound;
  j["final_cost"] = final_cost;
  j["ratio_vs_lower_bound"] = ratio_vs_lower_bound;
  j["stages"] = {{"tsp_tour", tsp_tour_cost},
                 {"vrtg", vrtg_cost},
                 {"matching", matching_cost},
                 {"combined_tour", combined_tour_cost}};
  j["fallback"] = fallback;
  if (!winner.empty()) {
    j["winner"] = winner;
    j["classical_cost"] = classical_cost;
    j["new_cost"] = new_cost;
  }
  j["config"] = config;
  return j;
}

namespace {

void finish_report(const Instance& inst, const Solution& sol,
                   RunReport& rep) {
  rep.lower_bound = inst.radial_lower_bound();
  rep.final_cost = sol.cost;
  rep.ratio_vs_lower_bound =
      rep.lower_bound > 0 ? sol.cost / rep.lower_bound : 0.0;
}

}  // namespace

std::pair<Solution, RunReport> solve_classical(const Instance& inst,
                                               DemandVariant variant,
                                               TspBackend backend,
                                               int held_karp_limit) {
  RunReport rep;
  rep.algo = "classical";
  rep.variant = to_string(variant);
  if (inst.num_customers() == 0) {
    finish_report(inst, {}, rep);
    return {Solution{}, rep};
  }
  TspTour tour = run_tsp(inst, backend, held_karp_limit);
  rep.tsp_tour_cost = tour.cost;
  PartitionResult part = partition_tour_best(inst, tour, variant);
  finish_report(inst, part.solution, rep);
  log_debug("classical: tour " + std::to_string(tour.cost) + " partition " +
            std::to_string(part.solution.cost));
  return {std::move(part.solution), rep};
}

std::pair<Solution, RunReport> solve_new(const Instance& inst,
                                         const PipelineConfig& config) {
  RunReport rep;
  rep.algo = "new";
  rep.variant = to_string(config.variant);
  rep.config = config.to_json();
  if (inst.num_customers() == 0) {
    finish_report(inst, {}, rep);
    return {Solution{}, rep};
  }

  VrtgInstance vrtg = build_vrtg_instance(inst, config.cluster);
  if (vrtg.num_targets() == 0) {
    log_debug("new: no targets, classical fallback");
    auto [sol, inner] =
        solve_classical(inst, config.variant, config.tsp,
                        config.held_karp_limit);
    RunReport out = rep;
    out.fallback = true;
    out.tsp_tour_cost = inner.tsp_tour_cost;
    finish_report(inst, sol, out);
    return {std::move(sol), out};
  }

  VrtgSolution paths = solve_vrtg(vrtg, config.cluster.gamma);
  rep.vrtg_cost = paths.cost;

  // Odd numbers of path endpoints per target; group parity is even because
  // every b is even.
  std::vector<int> endpoint_count(vrtg.num_targets(), 0);
  for (const VrtgTour& t : paths.tours) {
    if (!t.is_cycle && !t.nodes.empty() &&
        vrtg.is_target_node(t.nodes.back())) {
      endpoint_count[vrtg.target_index(t.nodes.back())]++;
    }
  }
  std::vector<std::vector<int>> odd_per_group(vrtg.groups.size());
  for (int ti = 0; ti < vrtg.num_targets(); ++ti) {
    if (endpoint_count[ti] % 2 == 1) {
      odd_per_group[vrtg.group_of[ti]].push_back(ti);
    }
  }
  Matching match = group_matching(vrtg, odd_per_group);
  rep.matching_cost = match.cost;

  // Path edges plus matching edges as one multigraph over {s} u V; target
  // nodes map back to their originating customers.
  std::vector<std::pair<VertexId, VertexId>> edges;
  double multiset_cost = 0.0;
  auto add_edge = [&](int a, int b) {
    const VertexId u = vrtg.original(a);
    const VertexId v = vrtg.original(b);
    if (u == v) return;  // duplicated position, zero length
    edges.push_back({u, v});
    multiset_cost += inst.dist(u, v);
  };
  for (const VrtgTour& t : paths.tours) {
    for (size_t i = 1; i < t.nodes.size(); ++i) {
      add_edge(t.nodes[i - 1], t.nodes[i]);
    }
    if (t.is_cycle && t.nodes.size() > 1) add_edge(t.nodes.back(), kDepot);
  }
  for (auto [ta, tb] : match.pairs) {
    add_edge(vrtg.target_node(ta), vrtg.target_node(tb));
  }

  const double expected = paths.cost + match.cost;
  if (std::abs(multiset_cost - expected) > 1e-9 * (1.0 + expected)) {
    throw std::logic_error("combined multigraph cost mismatch");
  }
  TspTour combined = euler_shortcut(inst, edges);
  if (combined.cost > multiset_cost + 1e-9 * (1.0 + multiset_cost)) {
    throw std::logic_error("shortcut tour more expensive than the multiset");
  }
  rep.combined_tour_cost = combined.cost;

  PartitionResult part = partition_tour_best(inst, combined, config.variant);
  finish_report(inst, part.solution, rep);
  log_debug("new: vrtg " + std::to_string(paths.cost) + " matching " +
            std::to_string(match.cost) + " tour " +
            std::to_string(combined.cost) + " final " +
            std::to_string(part.solution.cost));
  return {std::move(part.solution), rep};
}

std::pair<Solution, RunReport> solve_best(const Instance& inst,
                                          const PipelineConfig& config) {
  auto [classical_sol, classical_rep] =
      solve_classical(inst, config.variant, config.tsp,
                      config.held_karp_limit);
  auto [new_sol, new_rep] = solve_new(inst, config);

  const bool new_wins = new_sol.cost < classical_sol.cost;
  RunReport rep = new_rep;
  rep.algo = "best";
  rep.winner = new_wins ? "new" : "classical";
  rep.classical_cost = classical_sol.cost;
  rep.new_cost = new_sol.cost;
  rep.tsp_tour_cost = classical_rep.tsp_tour_cost;
  rep.config = config.to_json();

  Solution sol = new_wins ? std::move(new_sol) : std::move(classical_sol);
  finish_report(inst, sol, rep);
  log_info("best: winner " + rep.winner + " cost " +
           std::to_string(sol.cost));
  return {std::move(sol), rep};
}

}  // namespace capra

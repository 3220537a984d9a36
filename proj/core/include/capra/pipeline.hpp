// End-to-end CVRP solvers: the classical tour-partitioning algorithm, the
// cluster/target-group pipeline, and the better-of-two wrapper.
#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>

#include "capra/clustering.hpp"
#include "capra/instance.hpp"
#include "capra/partition.hpp"
#include "capra/tsp.hpp"

namespace capra {

struct PipelineConfig {
  ClusterParams cluster;  // tau, rho, gamma, epsilon
  TspBackend tsp = TspBackend::kChristofides;
  DemandVariant variant = DemandVariant::kGeneral;
  int held_karp_limit = 16;
  uint64_t seed = 0;  // echoed into reports; no stage draws randomness

  nlohmann::json to_json() const;
};

/// Per-stage costs and diagnostics of one solver run. Every value is
/// recomputable from the returned solution objects; -1 marks stages that
/// did not run.
struct RunReport {
  std::string algo;          // classical | new | best
  std::string variant;
  double lower_bound = 0.0;
  double final_cost = 0.0;
  double ratio_vs_lower_bound = 0.0;

  double tsp_tour_cost = -1.0;
  double vrtg_cost = -1.0;
  double matching_cost = -1.0;
  double combined_tour_cost = -1.0;

  bool fallback = false;     // new pipeline found no targets
  std::string winner;        // best only
  double classical_cost = -1.0;
  double new_cost = -1.0;

  nlohmann::json config;

  nlohmann::json to_json() const;
};

// TSP tour via the configured backend, then the better of the enumeration
// and DP partitions.
std::pair<Solution, RunReport> solve_classical(const Instance& inst,
                                               DemandVariant variant,
                                               TspBackend backend,
                                               int held_karp_limit = 16);

// Target-group construction, forward-walk solver, per-group matching of
// odd path endpoints, Euler shortcut to one tour, tour partitioning. Falls
// back to solve_classical when no targets exist.
std::pair<Solution, RunReport> solve_new(const Instance& inst,
                                         const PipelineConfig& config);

// The cheaper of solve_classical and solve_new.
std::pair<Solution, RunReport> solve_best(const Instance& inst,
                                          const PipelineConfig& config);

// Verbosity from the CAPRA_LOG environment variable
// (quiet/info/debug, default quiet).
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace capra

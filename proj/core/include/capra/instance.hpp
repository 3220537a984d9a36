// Capacitated vehicle routing instance model: depot, customers, semi-metric,
// demands scaled to vehicle capacity 1.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace capra {

// Vertex 0 is always the depot; customers are 1..n.
using VertexId = int;

constexpr VertexId kDepot = 0;

// Absolute tolerance for demand/capacity feasibility comparisons.
constexpr double kFeasibilityTol = 1e-9;

// Tolerance for metric validation (symmetry, triangle inequality), relative
// to the largest distance in the matrix.
constexpr double kMetricTol = 1e-9;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A CVRP instance. The semi-metric is either evaluated from 2-D coordinates
/// (Euclidean) or looked up in an explicit symmetric matrix. Instances are
/// immutable after construction and safe to share across threads.
class Instance {
 public:
  enum class MetricKind { kEuclidean, kMatrix };

  Instance() = default;

  static Instance euclidean(std::array<double, 2> depot,
                            std::vector<std::array<double, 2>> customers,
                            std::vector<double> demands,
                            std::string name = "");

  // Matrix over {depot} u customers; row/column 0 is the depot.
  // Validates symmetry and the triangle inequality unless validate is false.
  static Instance matrix(std::vector<std::vector<double>> dist,
                         std::vector<double> demands, std::string name = "",
                         bool validate = true);

  int num_customers() const { return static_cast<int>(demand_.size()) - 1; }
  int num_vertices() const { return static_cast<int>(demand_.size()); }

  MetricKind metric_kind() const { return metric_kind_; }
  const std::string& name() const { return name_; }

  double dist(VertexId u, VertexId v) const {
    if (metric_kind_ == MetricKind::kEuclidean) {
      const auto& a = coords_[u];
      const auto& b = coords_[v];
      const double dx = a[0] - b[0];
      const double dy = a[1] - b[1];
      return std::sqrt(dx * dx + dy * dy);
    }
    return matrix_[u][v];
  }

  double depot_dist(VertexId v) const { return dist(kDepot, v); }

  // detour(u,w) = c(u,w) + c(s,u) - c(s,w). Nonnegative and satisfies the
  // directed triangle inequality on any semi-metric.
  double detour(VertexId u, VertexId w) const {
    return dist(u, w) + depot_dist(u) - depot_dist(w);
  }

  double demand(VertexId v) const { return demand_[v]; }
  const std::vector<double>& demands() const { return demand_; }
  double total_demand() const;

  // Universal lower bound on the optimal CVRP cost: sum_v 2 d(v) c(s,v).
  double radial_lower_bound() const;

  const std::vector<std::array<double, 2>>& coords() const { return coords_; }
  const std::vector<std::vector<double>>& matrix_rows() const {
    return matrix_;
  }

  // Checks symmetry, zero diagonal, nonnegativity and the triangle
  // inequality; returns a description of the first violation found.
  std::optional<std::string> validate_metric() const;

 private:
  MetricKind metric_kind_ = MetricKind::kEuclidean;
  std::vector<std::array<double, 2>> coords_;      // Euclidean only
  std::vector<std::vector<double>> matrix_;        // matrix only
  std::vector<double> demand_;                     // demand_[0] == 0
  std::string name_;
};

/// Total order on {s} u V by distance from the depot, ties broken by vertex
/// index. The depot comes first.
struct DepotOrder {
  std::vector<VertexId> order;  // order[0] == kDepot
  std::vector<int> position;    // position[v] = rank of v in order

  bool precedes(VertexId u, VertexId v) const {
    return position[u] < position[v];
  }
};

DepotOrder depot_order(const Instance& inst);

/// One vehicle tour: a cycle through the depot. `customers` is the visit
/// order (depot implicit at both ends); `served` is how much of each visited
/// customer's demand this tour serves (equal to the full demand except in
/// splittable solutions).
struct Tour {
  std::vector<VertexId> customers;
  std::vector<double> served;
  double cost = 0.0;
  double served_total = 0.0;
};

// Builds a tour serving the full demand of every listed customer.
Tour make_tour(const Instance& inst, std::vector<VertexId> customers);
// Builds a tour with explicit served amounts (splittable solutions).
Tour make_tour(const Instance& inst, std::vector<VertexId> customers,
               std::vector<double> served);

double tour_cost(const Instance& inst, const std::vector<VertexId>& customers);

struct Solution {
  std::vector<Tour> tours;
  double cost = 0.0;
};

Solution make_solution(const Instance& inst, std::vector<Tour> tours);

enum class DemandVariant { kGeneral, kUnit, kSplittable };

const char* to_string(DemandVariant v);
DemandVariant variant_from_string(const std::string& s);

/// Outcome of checking a solution against an instance. Violations are report
/// entries, not exceptions.
struct VerifyReport {
  std::vector<std::string> violations;
  double recomputed_cost = 0.0;
  double lower_bound = 0.0;
  // recomputed_cost / lower_bound; 1.0 when the lower bound is zero.
  double gap = 0.0;

  bool ok() const { return violations.empty(); }
};

VerifyReport verify_solution(const Instance& inst, const Solution& sol,
                             DemandVariant variant);

}  // namespace capra

#include "capra/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace capra {

Instance Instance::euclidean(std::array<double, 2> depot,
                             std::vector<std::array<double, 2>> customers,
                             std::vector<double> demands, std::string name) {
  if (customers.size() != demands.size()) {
    throw ValidationError("coordinate/demand count mismatch");
  }
  Instance inst;
  inst.metric_kind_ = MetricKind::kEuclidean;
  inst.coords_.reserve(customers.size() + 1);
  inst.coords_.push_back(depot);
  inst.coords_.insert(inst.coords_.end(), customers.begin(), customers.end());
  inst.demand_.reserve(demands.size() + 1);
  inst.demand_.push_back(0.0);
  for (double d : demands) {
    if (d < -kFeasibilityTol || d > 1.0 + kFeasibilityTol) {
      throw ValidationError("demand outside [0, 1] after capacity scaling");
    }
    inst.demand_.push_back(std::clamp(d, 0.0, 1.0));
  }
  inst.name_ = std::move(name);
  return inst;
}

Instance Instance::matrix(std::vector<std::vector<double>> dist,
                          std::vector<double> demands, std::string name,
                          bool validate) {
  const size_t m = dist.size();
  if (m != demands.size() + 1) {
    throw ValidationError("matrix dimension must be customer count + 1");
  }
  for (const auto& row : dist) {
    if (row.size() != m) throw ValidationError("distance matrix not square");
  }
  Instance inst;
  inst.metric_kind_ = MetricKind::kMatrix;
  inst.matrix_ = std::move(dist);
  inst.demand_.reserve(demands.size() + 1);
  inst.demand_.push_back(0.0);
  for (double d : demands) {
    if (d < -kFeasibilityTol || d > 1.0 + kFeasibilityTol) {
      throw ValidationError("demand outside [0, 1] after capacity scaling");
    }
    inst.demand_.push_back(std::clamp(d, 0.0, 1.0));
  }
  inst.name_ = std::move(name);
  if (validate) {
    if (auto err = inst.validate_metric()) throw ValidationError(*err);
  }
  return inst;
}

double Instance::total_demand() const {
  return std::accumulate(demand_.begin(), demand_.end(), 0.0);
}

double Instance::radial_lower_bound() const {
  double sum = 0.0;
  for (int v = 1; v < num_vertices(); ++v) {
    sum += 2.0 * demand_[v] * depot_dist(v);
  }
  return sum;
}

std::optional<std::string> Instance::validate_metric() const {
  if (metric_kind_ == MetricKind::kEuclidean) return std::nullopt;
  const int m = num_vertices();
  double scale = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) scale = std::max(scale, matrix_[i][j]);
  }
  const double tol = kMetricTol * std::max(1.0, scale);
  for (int i = 0; i < m; ++i) {
    if (std::abs(matrix_[i][i]) > tol) {
      std::ostringstream os;
      os << "nonzero diagonal entry at vertex " << i;
      return os.str();
    }
    for (int j = 0; j < m; ++j) {
      if (matrix_[i][j] < -tol) {
        std::ostringstream os;
        os << "negative distance (" << i << "," << j << ")";
        return os.str();
      }
      if (std::abs(matrix_[i][j] - matrix_[j][i]) > tol) {
        std::ostringstream os;
        os << "asymmetric distance (" << i << "," << j << ")";
        return os.str();
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        if (matrix_[i][k] > matrix_[i][j] + matrix_[j][k] + tol) {
          std::ostringstream os;
          os << "triangle inequality violated: c(" << i << "," << k
             << ") > c(" << i << "," << j << ") + c(" << j << "," << k << ")";
          return os.str();
        }
      }
    }
  }
  return std::nullopt;
}

DepotOrder depot_order(const Instance& inst) {
  DepotOrder out;
  const int n = inst.num_customers();
  out.order.resize(n + 1);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin() + 1, out.order.end(),
                   [&](VertexId a, VertexId b) {
                     const double da = inst.depot_dist(a);
                     const double db = inst.depot_dist(b);
                     if (da != db) return da < db;
                     return a < b;
                   });
  out.position.resize(n + 1);
  for (int i = 0; i <= n; ++i) out.position[out.order[i]] = i;
  return out;
}

double tour_cost(const Instance& inst,
                 const std::vector<VertexId>& customers) {
  if (customers.empty()) return 0.0;
  double c = inst.depot_dist(customers.front());
  for (size_t i = 1; i < customers.size(); ++i) {
    c += inst.dist(customers[i - 1], customers[i]);
  }
  c += inst.depot_dist(customers.back());
  return c;
}

Tour make_tour(const Instance& inst, std::vector<VertexId> customers) {
  std::vector<double> served;
  served.reserve(customers.size());
  for (VertexId v : customers) served.push_back(inst.demand(v));
  return make_tour(inst, std::move(customers), std::move(served));
}

Tour make_tour(const Instance& inst, std::vector<VertexId> customers,
               std::vector<double> served) {
  if (customers.size() != served.size()) {
    throw ValidationError("tour served amounts do not match visit count");
  }
  Tour t;
  t.cost = tour_cost(inst, customers);
  t.customers = std::move(customers);
  t.served = std::move(served);
  t.served_total = std::accumulate(t.served.begin(), t.served.end(), 0.0);
  return t;
}

Solution make_solution(const Instance& inst, std::vector<Tour> tours) {
  Solution s;
  s.tours = std::move(tours);
  for (auto& t : s.tours) {
    t.cost = tour_cost(inst, t.customers);
    s.cost += t.cost;
  }
  return s;
}

const char* to_string(DemandVariant v) {
  switch (v) {
    case DemandVariant::kGeneral:
      return "general";
    case DemandVariant::kUnit:
      return "unit";
    case DemandVariant::kSplittable:
      return "splittable";
  }
  return "general";
}

DemandVariant variant_from_string(const std::string& s) {
  if (s == "general") return DemandVariant::kGeneral;
  if (s == "unit") return DemandVariant::kUnit;
  if (s == "splittable") return DemandVariant::kSplittable;
  throw ValidationError("unknown demand variant: " + s);
}

VerifyReport verify_solution(const Instance& inst, const Solution& sol,
                             DemandVariant variant) {
  VerifyReport rep;
  const int n = inst.num_customers();
  std::vector<double> served(n + 1, 0.0);
  std::vector<int> visits(n + 1, 0);

  for (size_t qi = 0; qi < sol.tours.size(); ++qi) {
    const Tour& t = sol.tours[qi];
    std::ostringstream tag;
    tag << "tour " << qi;
    if (t.customers.size() != t.served.size()) {
      rep.violations.push_back(tag.str() + ": malformed served amounts");
      continue;
    }
    double load = 0.0;
    for (size_t i = 0; i < t.customers.size(); ++i) {
      const VertexId v = t.customers[i];
      if (v < 1 || v > n) {
        rep.violations.push_back(tag.str() + ": unknown customer");
        continue;
      }
      visits[v]++;
      served[v] += t.served[i];
      load += t.served[i];
      if (t.served[i] < -kFeasibilityTol) {
        rep.violations.push_back(tag.str() + ": negative served amount");
      }
      if (variant != DemandVariant::kSplittable &&
          std::abs(t.served[i] - inst.demand(v)) > kFeasibilityTol) {
        rep.violations.push_back(tag.str() +
                                 ": partial service outside splittable mode");
      }
    }
    if (load > 1.0 + kFeasibilityTol) {
      std::ostringstream os;
      os << tag.str() << ": capacity exceeded, served demand " << load;
      rep.violations.push_back(os.str());
    }
    rep.recomputed_cost += tour_cost(inst, t.customers);
  }

  if (variant == DemandVariant::kUnit) {
    double d0 = -1.0;
    for (int v = 1; v <= n; ++v) {
      if (d0 < 0) d0 = inst.demand(v);
      if (std::abs(inst.demand(v) - d0) > kFeasibilityTol) {
        rep.violations.push_back("unit variant on non-uniform demands");
        break;
      }
    }
  }

  for (int v = 1; v <= n; ++v) {
    if (visits[v] == 0) {
      std::ostringstream os;
      os << "customer " << v << " not visited";
      rep.violations.push_back(os.str());
      continue;
    }
    if (variant == DemandVariant::kSplittable) {
      if (std::abs(served[v] - inst.demand(v)) > kFeasibilityTol) {
        std::ostringstream os;
        os << "customer " << v << " demand not fully served (got " << served[v]
           << ", want " << inst.demand(v) << ")";
        rep.violations.push_back(os.str());
      }
    } else if (visits[v] != 1) {
      std::ostringstream os;
      os << "customer " << v << " visited " << visits[v] << " times";
      rep.violations.push_back(os.str());
    }
  }

  rep.lower_bound = inst.radial_lower_bound();
  rep.gap = rep.lower_bound > 0 ? rep.recomputed_cost / rep.lower_bound : 1.0;
  return rep;
}

}  // namespace capra

#include "capra/generator.hpp"

#include <cmath>
#include <sstream>

namespace capra {

DemandModel DemandModel::parse(const std::string& spec) {
  std::istringstream in(spec);
  std::string kind;
  std::getline(in, kind, ':');
  if (kind == "uniform") return uniform();
  if (kind == "unit") {
    std::string k;
    std::getline(in, k, ':');
    int ki = k.empty() ? 4 : std::stoi(k);
    if (ki < 1) throw ValidationError("unit(k) requires k >= 1");
    return unit(ki);
  }
  if (kind == "clustered") {
    std::string m, s;
    std::getline(in, m, ':');
    std::getline(in, s, ':');
    int mi = m.empty() ? 3 : std::stoi(m);
    double sd = s.empty() ? 0.01 : std::stod(s);
    if (mi < 1 || sd < 0) throw ValidationError("bad clustered parameters");
    return clustered(mi, sd);
  }
  throw ValidationError("unknown demand model '" + spec + "'");
}

std::string DemandModel::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kUnit:
      os << "unit:" << unit_k;
      break;
    case Kind::kUniform:
      os << "uniform";
      break;
    case Kind::kClustered:
      os << "clustered:" << clusters << ":" << spread;
      break;
  }
  return os.str();
}

GeneratedInstance generate(int n, const DemandModel& model, uint64_t seed) {
  if (n < 0) throw ValidationError("customer count must be nonnegative");
  Rng rng(seed);
  std::vector<std::array<double, 2>> pts;
  std::vector<double> demands;
  pts.reserve(n);
  demands.reserve(n);
  GeneratedInstance out;

  switch (model.kind) {
    case DemandModel::Kind::kUnit: {
      for (int i = 0; i < n; ++i) {
        pts.push_back({rng.uniform(), rng.uniform()});
        demands.push_back(1.0 / model.unit_k);
      }
      break;
    }
    case DemandModel::Kind::kUniform: {
      for (int i = 0; i < n; ++i) {
        pts.push_back({rng.uniform(), rng.uniform()});
        demands.push_back(rng.uniform());
      }
      break;
    }
    case DemandModel::Kind::kClustered: {
      const int m = std::max(1, std::min(model.clusters, std::max(1, n)));
      std::vector<std::array<double, 2>> centers;
      // Centers bounded away from the depot so cluster radii stay small
      // relative to depot distances.
      for (int c = 0; c < m; ++c) {
        centers.push_back({rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0)});
      }
      out.planted_groups.resize(m);
      std::vector<int> count(m, 0);
      for (int i = 0; i < n; ++i) count[i % m]++;
      int next_id = 1;
      for (int c = 0; c < m; ++c) {
        if (count[c] == 0) continue;
        const double group_demand = rng.uniform(0.9, 1.0);
        std::vector<double> weights(count[c]);
        double wsum = 0.0;
        for (double& w : weights) {
          w = 0.1 + rng.uniform();
          wsum += w;
        }
        for (int i = 0; i < count[c]; ++i) {
          const double ang = rng.uniform(0.0, 2.0 * M_PI);
          const double rad = model.spread * std::sqrt(rng.uniform());
          pts.push_back({centers[c][0] + rad * std::cos(ang),
                         centers[c][1] + rad * std::sin(ang)});
          demands.push_back(group_demand * weights[i] / wsum);
          out.planted_groups[c].push_back(next_id++);
        }
      }
      // Drop empty groups (m > n).
      std::erase_if(out.planted_groups,
                    [](const auto& g) { return g.empty(); });
      break;
    }
  }

  std::ostringstream name;
  name << "gen-" << model.to_string() << "-n" << n << "-s" << seed;
  out.instance = Instance::euclidean({0.0, 0.0}, std::move(pts),
                                     std::move(demands), name.str());
  return out;
}

Instance generate_instance(int n, const DemandModel& model, uint64_t seed) {
  return generate(n, model, seed).instance;
}

}  // namespace capra

#include "capra/instance_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace capra {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& msg) {
  std::ostringstream os;
  os << path << ":" << line << ": " << msg;
  throw ParseError(os.str());
}

struct TsplibData {
  std::string name;
  int dimension = -1;
  double capacity = -1;
  std::string edge_weight_type;
  std::string edge_weight_format;
  std::vector<std::array<double, 2>> coords;  // 0-based vertex order
  std::vector<double> raw_demands;            // by file vertex id
  std::vector<double> weights;                // flat EXPLICIT section
  int depot_file_id = -1;
};

Instance load_tsplib(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");

  TsplibData d;
  std::string line;
  int lineno = 0;
  enum class Section { kNone, kCoords, kDemands, kDepot, kWeights };
  Section section = Section::kNone;
  std::vector<std::pair<int, std::array<double, 2>>> coord_entries;
  std::vector<std::pair<int, double>> demand_entries;

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::string key = upper(t.substr(0, t.find(':')));
    key = trim(key);

    if (key == "EOF") break;
    if (key == "NODE_COORD_SECTION") {
      section = Section::kCoords;
      continue;
    }
    if (key == "DEMAND_SECTION") {
      section = Section::kDemands;
      continue;
    }
    if (key == "DEPOT_SECTION") {
      section = Section::kDepot;
      continue;
    }
    if (key == "EDGE_WEIGHT_SECTION") {
      section = Section::kWeights;
      continue;
    }

    auto colon = t.find(':');
    if (colon != std::string::npos && section == Section::kNone) {
      std::string value = trim(t.substr(colon + 1));
      if (key == "NAME") {
        d.name = value;
      } else if (key == "TYPE") {
        if (upper(value) != "CVRP" && upper(value) != "TSP") {
          fail(path, lineno, "unsupported TYPE " + value);
        }
      } else if (key == "DIMENSION") {
        d.dimension = std::stoi(value);
      } else if (key == "CAPACITY") {
        d.capacity = std::stod(value);
      } else if (key == "EDGE_WEIGHT_TYPE") {
        d.edge_weight_type = upper(value);
      } else if (key == "EDGE_WEIGHT_FORMAT") {
        d.edge_weight_format = upper(value);
      }
      // COMMENT and unknown headers are ignored.
      continue;
    }

    std::istringstream row(t);
    switch (section) {
      case Section::kCoords: {
        int id;
        double x, y;
        if (!(row >> id >> x >> y)) fail(path, lineno, "bad coordinate line");
        coord_entries.push_back({id, {x, y}});
        break;
      }
      case Section::kDemands: {
        int id;
        double dem;
        if (!(row >> id >> dem)) fail(path, lineno, "bad demand line");
        demand_entries.push_back({id, dem});
        break;
      }
      case Section::kDepot: {
        int id;
        while (row >> id) {
          if (id == -1) break;
          if (d.depot_file_id != -1) {
            fail(path, lineno, "multiple depots are not supported");
          }
          d.depot_file_id = id;
        }
        break;
      }
      case Section::kWeights: {
        double w;
        while (row >> w) d.weights.push_back(w);
        break;
      }
      case Section::kNone:
        fail(path, lineno, "unexpected data line outside any section");
    }
  }

  if (d.dimension <= 0) throw ParseError(path + ": missing DIMENSION");
  if (d.capacity <= 0) throw ParseError(path + ": missing CAPACITY");
  const int m = d.dimension;

  std::vector<double> raw(m + 1, 0.0);
  std::vector<bool> seen(m + 1, false);
  for (auto& [id, dem] : demand_entries) {
    if (id < 1 || id > m) throw ParseError(path + ": demand id out of range");
    raw[id] = dem;
    seen[id] = true;
  }
  for (int i = 1; i <= m; ++i) {
    if (!seen[i]) throw ParseError(path + ": DEMAND_SECTION incomplete");
  }
  int depot_id = d.depot_file_id > 0 ? d.depot_file_id : 1;
  if (depot_id < 1 || depot_id > m) {
    throw ParseError(path + ": depot id out of range");
  }

  // File vertex ids, depot first.
  std::vector<int> file_order;
  file_order.push_back(depot_id);
  for (int i = 1; i <= m; ++i) {
    if (i != depot_id) file_order.push_back(i);
  }

  std::vector<double> demands;
  for (size_t i = 1; i < file_order.size(); ++i) {
    const double dem = raw[file_order[i]];
    if (dem > d.capacity + kFeasibilityTol) {
      throw ValidationError(path + ": demand exceeds CAPACITY");
    }
    if (dem < 0) throw ValidationError(path + ": negative demand");
    demands.push_back(dem / d.capacity);
  }

  if (d.edge_weight_type == "EUC_2D") {
    std::vector<std::array<double, 2>> xy(m + 1);
    std::vector<bool> have(m + 1, false);
    for (auto& [id, c] : coord_entries) {
      if (id < 1 || id > m) {
        throw ParseError(path + ": coordinate id out of range");
      }
      xy[id] = c;
      have[id] = true;
    }
    for (int i = 1; i <= m; ++i) {
      if (!have[i]) throw ParseError(path + ": NODE_COORD_SECTION incomplete");
    }
    std::vector<std::array<double, 2>> customers;
    for (size_t i = 1; i < file_order.size(); ++i) {
      customers.push_back(xy[file_order[i]]);
    }
    return Instance::euclidean(xy[depot_id], std::move(customers),
                               std::move(demands),
                               d.name.empty() ? path : d.name);
  }

  if (d.edge_weight_type == "EXPLICIT") {
    if (!d.edge_weight_format.empty() &&
        d.edge_weight_format != "FULL_MATRIX") {
      throw ParseError(path + ": only FULL_MATRIX explicit weights supported");
    }
    if (static_cast<int>(d.weights.size()) != m * m) {
      throw ParseError(path + ": EDGE_WEIGHT_SECTION has wrong entry count");
    }
    std::vector<std::vector<double>> mat(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        // Reorder so the depot becomes row/column 0.
        mat[i][j] = d.weights[(file_order[i] - 1) * m + (file_order[j] - 1)];
      }
    }
    return Instance::matrix(std::move(mat), std::move(demands),
                            d.name.empty() ? path : d.name, validate);
  }

  throw ParseError(path + ": unsupported EDGE_WEIGHT_TYPE '" +
                   d.edge_weight_type + "'");
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j, bool validate) {
  const auto& metric = j.at("metric");
  const std::string type = metric.at("type").get<std::string>();
  std::vector<double> demands = j.at("demands").get<std::vector<double>>();
  std::string name = j.value("name", "");

  if (type == "euclidean") {
    std::array<double, 2> depot = j.at("depot").get<std::array<double, 2>>();
    auto customers =
        j.at("customers").get<std::vector<std::array<double, 2>>>();
    return Instance::euclidean(depot, std::move(customers),
                               std::move(demands), std::move(name));
  }
  if (type == "matrix") {
    auto data = metric.at("data").get<std::vector<std::vector<double>>>();
    const int depot_row = j.at("depot").get<int>();
    if (depot_row != 0) {
      throw ParseError("matrix instances must use depot row 0");
    }
    return Instance::matrix(std::move(data), std::move(demands),
                            std::move(name), validate);
  }
  throw ParseError("unknown metric type '" + type + "'");
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["name"] = inst.name();
  j["demands"] = std::vector<double>(inst.demands().begin() + 1,
                                     inst.demands().end());
  if (inst.metric_kind() == Instance::MetricKind::kEuclidean) {
    j["metric"] = {{"type", "euclidean"}};
    j["depot"] = inst.coords()[0];
    j["customers"] = std::vector<std::array<double, 2>>(
        inst.coords().begin() + 1, inst.coords().end());
  } else {
    j["metric"] = {{"type", "matrix"}, {"data", inst.matrix_rows()}};
    j["depot"] = 0;
    std::vector<int> rows(inst.num_customers());
    for (int v = 1; v <= inst.num_customers(); ++v) rows[v - 1] = v;
    j["customers"] = rows;
  }
  return j;
}

Instance load_instance(const std::string& path, InstanceFormat format,
                       bool validate) {
  if (format == InstanceFormat::kAuto) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    format = ext == ".json" ? InstanceFormat::kJson : InstanceFormat::kTsplib;
  }
  if (format == InstanceFormat::kTsplib) return load_tsplib(path, validate);

  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j, validate);
}

std::string json_to_string(const nlohmann::json& j) {
  return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << json_to_string(instance_to_json(inst));
}

nlohmann::json solution_to_json(const Instance& inst, const Solution& sol,
                                DemandVariant variant) {
  nlohmann::json j;
  j["variant"] = to_string(variant);
  j["cost"] = sol.cost;
  auto tours = nlohmann::json::array();
  for (const Tour& t : sol.tours) tours.push_back(t.customers);
  j["tours"] = std::move(tours);
  if (variant == DemandVariant::kSplittable) {
    auto served = nlohmann::json::array();
    for (const Tour& t : sol.tours) served.push_back(t.served);
    j["served"] = std::move(served);
  }
  (void)inst;
  return j;
}

Solution solution_from_json(const Instance& inst, const nlohmann::json& j) {
  std::vector<Tour> tours;
  const auto& jt = j.at("tours");
  const nlohmann::json* js = j.contains("served") ? &j.at("served") : nullptr;
  for (size_t i = 0; i < jt.size(); ++i) {
    auto customers = jt[i].get<std::vector<VertexId>>();
    if (js) {
      tours.push_back(make_tour(inst, std::move(customers),
                                (*js)[i].get<std::vector<double>>()));
    } else {
      tours.push_back(make_tour(inst, std::move(customers)));
    }
  }
  return make_solution(inst, std::move(tours));
}

Solution load_solution(const Instance& inst, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return solution_from_json(inst, j);
}

void save_solution(const Instance& inst, const Solution& sol,
                   DemandVariant variant, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << json_to_string(solution_to_json(inst, sol, variant));
}

}  // namespace capra

// Readers and writers: TSPLIB/CVRPLIB subset and the native json format.
#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "capra/instance.hpp"

namespace capra {

enum class InstanceFormat { kAuto, kTsplib, kJson };

// Reads a CVRP instance. With kAuto the format is chosen by file extension
// (.vrp -> TSPLIB, .json -> json). TSPLIB demands are divided by CAPACITY.
// Explicit matrices are validated (symmetry, triangle inequality) unless
// validate is false; Euclidean metrics are trusted.
Instance load_instance(const std::string& path,
                       InstanceFormat format = InstanceFormat::kAuto,
                       bool validate = true);

Instance instance_from_json(const nlohmann::json& j, bool validate = true);
nlohmann::json instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

nlohmann::json solution_to_json(const Instance& inst, const Solution& sol,
                                DemandVariant variant);
Solution solution_from_json(const Instance& inst, const nlohmann::json& j);
Solution load_solution(const Instance& inst, const std::string& path);
void save_solution(const Instance& inst, const Solution& sol,
                   DemandVariant variant, const std::string& path);

// Pretty-printed json with sorted keys and trailing newline; the single
// serialization used for every file this library writes.
std::string json_to_string(const nlohmann::json& j);

}  // namespace capra

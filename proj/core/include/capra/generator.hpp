// Seeded random instance generation for tests and benchmarks.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "capra/instance.hpp"

namespace capra {

// mt19937_64 with hand-rolled value mappings so that identical seeds give
// byte-identical instances on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }
  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() %
                                 static_cast<uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

struct DemandModel {
  enum class Kind { kUnit, kUniform, kClustered };
  Kind kind = Kind::kUniform;
  int unit_k = 4;          // unit(k): every demand is 1/k
  int clusters = 3;        // clustered(m, spread)
  double spread = 0.01;

  static DemandModel unit(int k) { return {Kind::kUnit, k, 0, 0.0}; }
  static DemandModel uniform() { return {Kind::kUniform, 0, 0, 0.0}; }
  static DemandModel clustered(int m, double spread) {
    return {Kind::kClustered, 0, m, spread};
  }

  // "unit:4", "uniform", "clustered:3:0.01"
  static DemandModel parse(const std::string& spec);
  std::string to_string() const;
};

struct GeneratedInstance {
  Instance instance;
  // Customer ids of each planted cluster (clustered model only). Each group
  // has total demand in [0.9, 1.0].
  std::vector<std::vector<VertexId>> planted_groups;
};

// Euclidean points in the unit square with the depot at the origin.
// Deterministic for a fixed (n, model, seed).
GeneratedInstance generate(int n, const DemandModel& model, uint64_t seed);

Instance generate_instance(int n, const DemandModel& model, uint64_t seed);

}  // namespace capra

// Turning a traveling salesman tour into a feasible CVRP solution: candidate
// split points, the randomized-rounding-derandomized segmentation, and an
// optimal dynamic program over the same partition structure.
#pragma once

#include <vector>

#include "capra/instance.hpp"
#include "capra/tsp.hpp"

namespace capra {

struct PartitionResult {
  enum class Method { kEnumerate, kDp };
  Solution solution;
  double theta = -1.0;  // winning split offset (enumeration only)
  Method method = Method::kEnumerate;
};

// One representative theta from every maximal interval of (0,1) on which the
// set of designated split customers is constant: the midpoints of the
// intervals delimited by the fractional parts of the prefix demand sums.
// At most n+1 values.
std::vector<double> candidate_thetas(const Instance& inst,
                                     const TspTour& tour);

// Tries every candidate theta and keeps the cheapest feasible segmentation.
// general: each designated customer becomes a singleton tour between
// segments; unit/splittable: designated customers merge into the preceding
// segment (splittable: the leftover demand moves into the succeeding one).
// The result cost is at most c(tour) + sum_v 4 d(v) c(s,v) for general and
// c(tour) + sum_v 2 d(v) c(s,v) for unit and splittable.
PartitionResult partition_tour(const Instance& inst, const TspTour& tour,
                               DemandVariant variant);

// Minimum-cost partition of the tour order into consecutive segments; the
// general variant may additionally extract the last customer of a segment
// into a singleton tour, which covers every segmentation the enumeration
// path can produce. Never more expensive than partition_tour.
PartitionResult partition_tour_dp(const Instance& inst, const TspTour& tour,
                                  DemandVariant variant);

// Cheaper of partition_tour and partition_tour_dp.
PartitionResult partition_tour_best(const Instance& inst, const TspTour& tour,
                                    DemandVariant variant);

// The guaranteed cost bound c(tour) + sum_v {4,2} d(v) c(s,v) for the
// variant; every partition result is checked against it.
double partition_cost_bound(const Instance& inst, const TspTour& tour,
                            DemandVariant variant);

}  // namespace capra

#include "capra/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TourView {
  std::vector<VertexId> seq;    // customers in tour order
  std::vector<double> prefix_d; // prefix_d[i] = demand of seq[0..i-1]
  std::vector<double> prefix_p; // path length along seq
  std::vector<double> depot;    // depot distance per position

  explicit TourView(const Instance& inst, const TspTour& tour) {
    seq.assign(tour.order.begin() + 1, tour.order.end());
    const int n = static_cast<int>(seq.size());
    prefix_d.assign(n + 1, 0.0);
    prefix_p.assign(n + 1, 0.0);
    depot.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      prefix_d[i + 1] = prefix_d[i] + inst.demand(seq[i]);
      if (i > 0) prefix_p[i] = prefix_p[i - 1] + inst.dist(seq[i - 1], seq[i]);
      depot[i] = inst.depot_dist(seq[i]);
    }
    prefix_p[n] = prefix_p[n - 1 >= 0 ? n - 1 : 0];
  }

  int size() const { return static_cast<int>(seq.size()); }
  double total_demand() const { return prefix_d.back(); }
  // 1-based positions a..b inclusive.
  double seg_demand(int a, int b) const {
    return prefix_d[b] - prefix_d[a - 1];
  }
  double seg_cost(int a, int b) const {
    if (a > b) return 0.0;
    return depot[a - 1] + (prefix_p[b - 1] - prefix_p[a - 1]) + depot[b - 1];
  }
};

void require_unit_demands(const Instance& inst) {
  const int n = inst.num_customers();
  if (n == 0) return;
  const double d0 = inst.demand(1);
  for (int v = 2; v <= n; ++v) {
    if (std::abs(inst.demand(v) - d0) > kFeasibilityTol) {
      throw ValidationError("unit variant requires uniform demands");
    }
  }
  if (d0 > kFeasibilityTol) {
    const double k = 1.0 / d0;
    if (std::abs(k - std::round(k)) > 1e-6) {
      throw ValidationError("unit variant requires demands of the form 1/k");
    }
  }
}

// Unit demands d = 1/k: the l-th designated position is ceil(k theta) +
// (l-1) k, exact in integer arithmetic (floating prefix sums can slip past
// the thresholds and overfill a segment).
std::vector<int> designated_positions_unit(const TourView& tv,
                                           double theta, double d) {
  std::vector<int> out;
  if (d <= kFeasibilityTol) return out;
  const long long k = std::llround(1.0 / d);
  const int n = tv.size();
  for (long long j = static_cast<long long>(std::ceil(k * theta));
       j <= n; j += k) {
    out.push_back(static_cast<int>(std::max(j, 1LL)));
  }
  return out;
}

// Designated positions (1-based) for a split offset theta: the l-th is the
// first position whose prefix demand reaches theta + l - 1.
std::vector<int> designated_positions(const TourView& tv, double theta) {
  std::vector<int> out;
  const int n = tv.size();
  double threshold = theta;
  for (int j = 1; j <= n; ++j) {
    while (tv.prefix_d[j] >= threshold) {
      if (!out.empty() && out.back() == j) break;  // d(v) == 1 edge case
      out.push_back(j);
      threshold += 1.0;
    }
  }
  return out;
}

Solution build_general(const Instance& inst, const TourView& tv,
                       const std::vector<int>& designated) {
  std::vector<Tour> tours;
  int start = 1;
  for (int j : designated) {
    if (start <= j - 1) {
      tours.push_back(make_tour(
          inst, {tv.seq.begin() + start - 1, tv.seq.begin() + j - 1}));
    }
    tours.push_back(make_tour(inst, {tv.seq[j - 1]}));
    start = j + 1;
  }
  if (start <= tv.size()) {
    tours.push_back(
        make_tour(inst, {tv.seq.begin() + start - 1, tv.seq.end()}));
  }
  return make_solution(inst, std::move(tours));
}

Solution build_unit(const Instance& inst, const TourView& tv,
                    const std::vector<int>& designated) {
  std::vector<Tour> tours;
  int start = 1;
  for (int j : designated) {
    tours.push_back(
        make_tour(inst, {tv.seq.begin() + start - 1, tv.seq.begin() + j}));
    start = j + 1;
  }
  if (start <= tv.size()) {
    tours.push_back(
        make_tour(inst, {tv.seq.begin() + start - 1, tv.seq.end()}));
  }
  return make_solution(inst, std::move(tours));
}

// Splittable tours from cut values in demand space. Tour l serves the
// demand interval (cuts[l-1], cuts[l]]; a customer whose interval straddles
// a cut is visited by both adjacent tours.
Solution build_splittable(const Instance& inst, const TourView& tv,
                          const std::vector<double>& cuts_in) {
  const int n = tv.size();
  const double total = tv.total_demand();
  std::vector<double> cuts;
  for (double c : cuts_in) {
    if (c > kFeasibilityTol && c < total - kFeasibilityTol) cuts.push_back(c);
  }
  cuts.push_back(total);

  std::vector<Tour> tours;
  int start = 1;  // 1-based position of the first customer of the next tour
  double lo = 0.0;
  for (double hi : cuts) {
    // Last position whose demand interval intersects (lo, hi].
    int end = start;
    while (end < n && tv.prefix_d[end] < hi - kFeasibilityTol) ++end;
    if (start > n) break;
    std::vector<VertexId> custs;
    std::vector<double> served;
    for (int p = start; p <= end; ++p) {
      custs.push_back(tv.seq[p - 1]);
      const double s =
          std::min(tv.prefix_d[p], hi) - std::max(tv.prefix_d[p - 1], lo);
      served.push_back(std::clamp(s, 0.0, inst.demand(tv.seq[p - 1])));
    }
    tours.push_back(make_tour(inst, std::move(custs), std::move(served)));
    // The cut customer stays in the next tour only if demand is left over.
    start = tv.prefix_d[end] > hi + kFeasibilityTol ? end : end + 1;
    lo = hi;
  }
  // Trailing zero-demand customers not reached by any positive interval.
  if (start <= n && !tours.empty()) {
    Tour& last = tours.back();
    for (int p = start; p <= n; ++p) {
      if (last.customers.empty() || last.customers.back() != tv.seq[p - 1]) {
        last.customers.push_back(tv.seq[p - 1]);
        last.served.push_back(inst.demand(tv.seq[p - 1]));
      }
    }
    return make_solution(inst, std::move(tours));
  }
  if (start <= n && tours.empty()) {
    tours.push_back(make_tour(
        inst, {tv.seq.begin() + start - 1, tv.seq.end()}));
  }
  return make_solution(inst, std::move(tours));
}

void check_bound(const Instance& inst, const TspTour& tour,
                 DemandVariant variant, double cost) {
  const double bound = partition_cost_bound(inst, tour, variant);
  if (cost > bound + 1e-9 * (1.0 + std::abs(bound))) {
    throw std::logic_error("tour partition exceeded its guaranteed bound");
  }
}

}  // namespace

double partition_cost_bound(const Instance& inst, const TspTour& tour,
                            DemandVariant variant) {
  const double factor = variant == DemandVariant::kGeneral ? 4.0 : 2.0;
  double extra = 0.0;
  for (int v = 1; v <= inst.num_customers(); ++v) {
    extra += factor * inst.demand(v) * inst.depot_dist(v);
  }
  return tour.cost + extra;
}

std::vector<double> candidate_thetas(const Instance& inst,
                                     const TspTour& tour) {
  TourView tv(inst, tour);
  std::vector<double> breaks;
  for (int j = 1; j <= tv.size(); ++j) {
    const double f = tv.prefix_d[j] - std::floor(tv.prefix_d[j]);
    if (f > kFeasibilityTol && f < 1.0 - kFeasibilityTol) breaks.push_back(f);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> mids;
  double lo = 0.0;
  for (double b : breaks) {
    mids.push_back((lo + b) / 2.0);
    lo = b;
  }
  mids.push_back((lo + 1.0) / 2.0);
  return mids;
}

PartitionResult partition_tour(const Instance& inst, const TspTour& tour,
                               DemandVariant variant) {
  if (variant == DemandVariant::kUnit) require_unit_demands(inst);
  TourView tv(inst, tour);
  if (tv.size() == 0) {
    return {Solution{}, 0.5, PartitionResult::Method::kEnumerate};
  }

  PartitionResult best;
  best.method = PartitionResult::Method::kEnumerate;
  best.solution.cost = kInf;
  for (double theta : candidate_thetas(inst, tour)) {
    Solution sol;
    if (variant == DemandVariant::kSplittable) {
      std::vector<int> des = designated_positions(tv, theta);
      std::vector<double> cuts;
      for (size_t l = 0; l < des.size(); ++l) cuts.push_back(theta + l);
      sol = build_splittable(inst, tv, cuts);
    } else if (variant == DemandVariant::kGeneral) {
      sol = build_general(inst, tv, designated_positions(tv, theta));
    } else {
      sol = build_unit(
          inst, tv, designated_positions_unit(tv, theta, inst.demand(1)));
    }
    if (sol.cost < best.solution.cost) {
      best.solution = std::move(sol);
      best.theta = theta;
    }
  }
  check_bound(inst, tour, variant, best.solution.cost);
  return best;
}

namespace {

Solution dp_segments(const Instance& inst, const TourView& tv,
                     bool allow_extract) {
  const int n = tv.size();
  std::vector<double> dp(n + 1, kInf);
  std::vector<int> from(n + 1, -1);
  std::vector<char> extracted(n + 1, 0);
  dp[0] = 0.0;
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (dp[i] == kInf) continue;
      if (tv.seg_demand(i + 1, j) <= 1.0 + kFeasibilityTol) {
        const double cand = dp[i] + tv.seg_cost(i + 1, j);
        if (cand < dp[j]) {
          dp[j] = cand;
          from[j] = i;
          extracted[j] = 0;
        }
      }
      if (allow_extract &&
          tv.seg_demand(i + 1, j - 1) <= 1.0 + kFeasibilityTol) {
        const double cand =
            dp[i] + tv.seg_cost(i + 1, j - 1) + 2.0 * tv.depot[j - 1];
        if (cand < dp[j]) {
          dp[j] = cand;
          from[j] = i;
          extracted[j] = 1;
        }
      }
    }
  }

  std::vector<Tour> tours;
  int j = n;
  while (j > 0) {
    const int i = from[j];
    if (extracted[j]) {
      tours.push_back(make_tour(inst, {tv.seq[j - 1]}));
      if (i + 1 <= j - 1) {
        tours.push_back(make_tour(
            inst, {tv.seq.begin() + i, tv.seq.begin() + j - 1}));
      }
    } else {
      tours.push_back(
          make_tour(inst, {tv.seq.begin() + i, tv.seq.begin() + j}));
    }
    j = i;
  }
  std::reverse(tours.begin(), tours.end());
  return make_solution(inst, std::move(tours));
}

// Splittable blocks: between clean boundaries dp goes through a run of full
// tours with cuts at prefix + 1, 2, ... followed by one partial tour.
Solution dp_splittable(const Instance& inst, const TourView& tv) {
  const int n = tv.size();
  std::vector<double> dp(n + 1, kInf);
  std::vector<int> from(n + 1, -1);
  dp[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    if (dp[i] == kInf) continue;
    int k = 0;          // full tours emitted inside this block
    double full_cost = 0.0;
    int sigma = i + 1;  // start position of the current tour
    for (int j = i + 1; j <= n; ++j) {
      const double span = tv.prefix_d[j] - tv.prefix_d[i];
      const int needed =
          std::max(0, static_cast<int>(
                          std::ceil(span - kFeasibilityTol)) - 1);
      bool ok = true;
      while (k < needed) {
        const double cut = tv.prefix_d[i] + (k + 1);
        int e = sigma;
        while (e <= n && tv.prefix_d[e] < cut - kFeasibilityTol) ++e;
        if (e > n || sigma > n) {
          ok = false;
          break;
        }
        full_cost += tv.seg_cost(sigma, e);
        sigma = tv.prefix_d[e] > cut + kFeasibilityTol ? e : e + 1;
        ++k;
      }
      if (!ok || sigma > j) continue;
      const double cand = dp[i] + full_cost + tv.seg_cost(sigma, j);
      if (cand < dp[j]) {
        dp[j] = cand;
        from[j] = i;
      }
    }
  }

  // Rebuild the winning chain by replaying each block's window sweep; the
  // demand-space cuts alone would be ambiguous across runs of zero-demand
  // customers.
  std::vector<int> boundaries;
  for (int j = n; j > 0; j = from[j]) boundaries.push_back(j);
  std::reverse(boundaries.begin(), boundaries.end());

  std::vector<Tour> tours;
  auto emit = [&](int a, int b, double lo, double hi) {
    std::vector<VertexId> custs;
    std::vector<double> served;
    for (int p = a; p <= b; ++p) {
      custs.push_back(tv.seq[p - 1]);
      const double s =
          std::min(tv.prefix_d[p], hi) - std::max(tv.prefix_d[p - 1], lo);
      served.push_back(std::clamp(s, 0.0, inst.demand(tv.seq[p - 1])));
    }
    tours.push_back(make_tour(inst, std::move(custs), std::move(served)));
  };
  int i = 0;
  for (int j : boundaries) {
    const double span = tv.prefix_d[j] - tv.prefix_d[i];
    const int needed = std::max(
        0, static_cast<int>(std::ceil(span - kFeasibilityTol)) - 1);
    int sigma = i + 1;
    double lo = tv.prefix_d[i];
    for (int l = 1; l <= needed; ++l) {
      const double cut = tv.prefix_d[i] + l;
      int e = sigma;
      while (e <= n && tv.prefix_d[e] < cut - kFeasibilityTol) ++e;
      emit(sigma, e, lo, cut);
      sigma = tv.prefix_d[e] > cut + kFeasibilityTol ? e : e + 1;
      lo = cut;
    }
    emit(sigma, j, lo, tv.prefix_d[j]);
    i = j;
  }
  Solution sol = make_solution(inst, std::move(tours));
  if (std::abs(sol.cost - dp[n]) > 1e-9 * (1.0 + std::abs(dp[n]))) {
    throw std::logic_error("splittable dp reconstruction cost mismatch");
  }
  return sol;
}

}  // namespace

PartitionResult partition_tour_dp(const Instance& inst, const TspTour& tour,
                                  DemandVariant variant) {
  if (variant == DemandVariant::kUnit) require_unit_demands(inst);
  TourView tv(inst, tour);
  PartitionResult res;
  res.method = PartitionResult::Method::kDp;
  if (tv.size() == 0) return res;

  switch (variant) {
    case DemandVariant::kGeneral:
      res.solution = dp_segments(inst, tv, /*allow_extract=*/true);
      break;
    case DemandVariant::kUnit:
      res.solution = dp_segments(inst, tv, /*allow_extract=*/false);
      break;
    case DemandVariant::kSplittable:
      res.solution = dp_splittable(inst, tv);
      break;
  }
  check_bound(inst, tour, variant, res.solution.cost);
  return res;
}

PartitionResult partition_tour_best(const Instance& inst, const TspTour& tour,
                                    DemandVariant variant) {
  PartitionResult en = partition_tour(inst, tour, variant);
  PartitionResult dp = partition_tour_dp(inst, tour, variant);
  return dp.solution.cost < en.solution.cost ? dp : en;
}

}  // namespace capra

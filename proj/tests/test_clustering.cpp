#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "capra/clustering.hpp"
#include "capra/instance_io.hpp"
#include "capra/oracle.hpp"
#include "support/test_util.hpp"

using namespace capra;

namespace {

ClusterParams params_with(double tau, double rho) {
  ClusterParams p;
  p.tau = tau;
  p.rho = rho;
  return p;
}

}  // namespace

TEST_CASE("kappa formula") {
  CHECK(compute_kappa(1.0 / 6.0, 1.0 / 6.0) ==
        doctest::Approx(23.0 / 12.0));
  CHECK(compute_kappa(0.1, 1.0 / 6.0) == doctest::Approx(47.0 / 12.0));
  CHECK(compute_kappa(0.054, 0.022) ==
        doctest::Approx((1.0 - 2.0 * 0.054 - 0.054 * 0.022) /
                        (2.0 * 0.054)));
  CHECK(compute_kappa(0.054, 0.022) == doctest::Approx(8.2482).epsilon(1e-4));
  // kappa > 3/2 on the whole parameter range.
  for (double tau : {0.01, 0.05, 1.0 / 6.0}) {
    for (double rho : {0.01, 0.05, 1.0 / 6.0}) {
      CHECK(compute_kappa(tau, rho) > 1.5);
    }
  }
  CHECK_THROWS_AS(compute_kappa(0.3, 0.1), ValidationError);
  CHECK_THROWS_AS(compute_kappa(0.0, 0.1), ValidationError);
}

TEST_CASE("peak cluster") {
  SUBCASE("single customer belongs iff it is off the depot") {
    Instance inst = Instance::euclidean(
        {0.0, 0.0}, {{1.0, 0.0}, {0.0, 0.0}}, {0.5, 0.5});
    ClusterParams p;
    PeakCluster far = peak_cluster(inst, make_tour(inst, {1}), p);
    CHECK(far.peak == 1);
    CHECK(far.members == std::vector<VertexId>{1});
    PeakCluster at_depot = peak_cluster(inst, make_tour(inst, {2}), p);
    CHECK(at_depot.members.empty());
  }
  SUBCASE("members stay within rho times the peak distance") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
      Instance inst = test::random_instance(12, 1500 + seed, 2);
      Solution sol = test::random_feasible_solution(inst, seed);
      ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
      for (const Tour& t : sol.tours) {
        PeakCluster pc = peak_cluster(inst, t, p);
        for (VertexId u : pc.members) {
          CHECK(inst.dist(u, pc.peak) <=
                p.rho * inst.depot_dist(pc.peak) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("tight two-customer tour sits at the slack floor") {
  // Peak at distance 3 with demand 1-tau; a second customer with demand tau
  // placed just outside the cluster. The slack then meets tau*rho*c(Q)
  // almost exactly.
  const double tau = 0.1;
  const double rho = 1.0 / 6.0;
  ClusterParams p = params_with(tau, rho);
  const double delta = rho * 3.0 * (1.0 + 1e-6);
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{3.0, 0.0}, {3.0 - delta, 0.0}}, {1.0 - tau, tau});
  Tour tour = make_tour(inst, {2, 1});

  PeakCluster pc = peak_cluster(inst, tour, p);
  CHECK(pc.peak == 1);
  CHECK(!pc.large);
  CHECK(pc.members == std::vector<VertexId>{1});

  const double slack = small_cluster_slack(inst, tour, p);
  const double floor_value = tau * rho * tour.cost;
  CHECK(slack >= floor_value);
  CHECK(slack == doctest::Approx(floor_value).epsilon(1e-3));

  // Pulling the second customer inside makes the cluster large.
  Instance inside = Instance::euclidean(
      {0.0, 0.0}, {{3.0, 0.0}, {3.0 - delta / 2.0, 0.0}},
      {1.0 - tau, tau});
  Tour tour2 = make_tour(inside, {2, 1});
  CHECK(peak_cluster(inside, tour2, p).large);
  CHECK_THROWS_AS(small_cluster_slack(inside, tour2, p), ValidationError);
}

TEST_CASE("slack of a zero-demand tour is its full length") {
  Instance inst = Instance::euclidean({0.0, 0.0}, {{5.0, 0.0}}, {0.0});
  ClusterParams p;
  Tour t = make_tour(inst, {1});
  CHECK(small_cluster_slack(inst, t, p) == doctest::Approx(t.cost));
}

TEST_CASE("small-cluster slack floor over random tours") {
  int small_count = 0;
  for (uint64_t seed = 0; seed < 300; ++seed) {
    Instance inst = test::random_instance(10, 1600 + seed, seed % 2 ? 0 : 2);
    Solution sol = test::random_feasible_solution(inst, seed);
    ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
    for (const Tour& t : sol.tours) {
      PeakCluster pc = peak_cluster(inst, t, p);
      if (pc.large) continue;
      ++small_count;
      // Throws if the floor is violated.
      CHECK(small_cluster_slack(inst, t, p) >=
            p.tau * p.rho * t.cost - 1e-9);
    }
  }
  CHECK(small_count > 1000);
}

TEST_CASE("build_vrtg_instance on coincident customers") {
  // Everyone at one point at distance 1; total demand 2.5.
  std::vector<std::array<double, 2>> pts(5, {1.0, 0.0});
  Instance inst =
      Instance::euclidean({0.0, 0.0}, pts, {0.5, 0.5, 0.5, 0.5, 0.5});
  ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
  VrtgInstance vrtg = build_vrtg_instance(inst, p);
  REQUIRE(vrtg.num_targets() == 1);
  REQUIRE(vrtg.groups.size() == 1);
  CHECK(vrtg.b_sets[0].size() == 5);
  // b = 2 * floor(2.5 / (5/6)) = 2 * 3.
  CHECK(vrtg.b[0] == 6);
}

TEST_CASE("no targets when demands are spread thin") {
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}}, {0.5, 0.5, 0.5});
  ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
  VrtgInstance vrtg = build_vrtg_instance(inst, p);
  CHECK(vrtg.num_targets() == 0);
  CHECK(vrtg.groups.empty());
}

TEST_CASE("b-set membership inequalities") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    GeneratedInstance gen =
        generate(20, DemandModel::clustered(3, 0.001), 1700 + seed);
    const Instance& inst = gen.instance;
    ClusterParams p;
    VrtgInstance vrtg = build_vrtg_instance(inst, p);
    // Every member is close to its target relative to its own depot
    // distance.
    for (int ti = 0; ti < vrtg.num_targets(); ++ti) {
      const VertexId t = vrtg.targets[ti];
      CHECK(inst.depot_dist(t) > 0.0);
      for (VertexId v : vrtg.b_sets[ti]) {
        CHECK(inst.dist(v, t) <
              3.0 * p.rho / (1.0 - p.rho) * inst.depot_dist(v));
      }
    }
    // Targets with intersecting B-sets are close to each other.
    for (int a = 0; a < vrtg.num_targets(); ++a) {
      for (int c = a + 1; c < vrtg.num_targets(); ++c) {
        std::set<VertexId> sa(vrtg.b_sets[a].begin(), vrtg.b_sets[a].end());
        bool overlap = false;
        for (VertexId v : vrtg.b_sets[c]) overlap |= sa.count(v) > 0;
        if (!overlap) continue;
        const double lim =
            6.0 * p.rho * std::min(inst.depot_dist(vrtg.targets[a]),
                                   inst.depot_dist(vrtg.targets[c]));
        CHECK(inst.dist(vrtg.targets[a], vrtg.targets[c]) < lim);
      }
    }
  }
}

TEST_CASE("overlapping candidate clusters imply nearby centers") {
  // c(x,y) < 2 rho min(c(s,x), c(s,y)) whenever C_x and C_y intersect.
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = test::random_instance(14, 1800 + seed);
    ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
    const double kappa = p.kappa();
    const int n = inst.num_customers();
    auto cluster_of = [&](VertexId x) {
      std::set<VertexId> c;
      for (VertexId u = 1; u <= n; ++u) {
        if (inst.dist(u, x) + kappa * inst.detour(u, x) <
            p.rho * inst.depot_dist(x)) {
          c.insert(u);
        }
      }
      return c;
    };
    for (VertexId x = 1; x <= n; ++x) {
      auto cx = cluster_of(x);
      for (VertexId y = x + 1; y <= n; ++y) {
        auto cy = cluster_of(y);
        bool overlap = false;
        for (VertexId u : cy) overlap |= cx.count(u) > 0;
        if (!overlap) continue;
        CHECK(inst.dist(x, y) <
              2.0 * p.rho *
                  std::min(inst.depot_dist(x), inst.depot_dist(y)));
      }
    }
  }
}

TEST_CASE("large peak clusters of optimal solutions land inside one b-set") {
  int large_seen = 0;
  for (uint64_t seed = 0; seed < 25; ++seed) {
    GeneratedInstance gen =
        generate(8, DemandModel::clustered(3, 0.001), 1900 + seed);
    const Instance& inst = gen.instance;
    ClusterParams p;
    VrtgInstance vrtg = build_vrtg_instance(inst, p);
    Solution opt = exact_cvrp(inst);
    for (const Tour& t : opt.tours) {
      PeakCluster pc = peak_cluster(inst, t, p);
      if (!pc.large) continue;
      ++large_seen;
      bool contained = false;
      for (int ti = 0; ti < vrtg.num_targets(); ++ti) {
        std::set<VertexId> bs(vrtg.b_sets[ti].begin(),
                              vrtg.b_sets[ti].end());
        bool all = true;
        for (VertexId v : pc.members) all &= bs.count(v) > 0;
        contained |= all;
      }
      CHECK(contained);
    }
  }
  CHECK(large_seen > 5);
}

TEST_CASE("planted clusters fall inside a single group b-set") {
  // tau = 1/6 so that every planted demand in [0.9, 1.0] clears the 1 - tau
  // selection threshold and its cluster is guaranteed a nearby target.
  for (uint64_t seed = 0; seed < 25; ++seed) {
    GeneratedInstance gen =
        generate(24, DemandModel::clustered(3, 0.0005), 2000 + seed);
    ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
    VrtgInstance vrtg = build_vrtg_instance(gen.instance, p);
    REQUIRE(vrtg.num_targets() >= 1);
    for (const auto& planted : gen.planted_groups) {
      bool inside_some = false;
      for (const auto& bset : vrtg.group_b_sets) {
        std::set<VertexId> bs(bset.begin(), bset.end());
        bool all = true;
        for (VertexId v : planted) all &= bs.count(v) > 0;
        inside_some |= all;
      }
      CHECK(inside_some);
    }
  }
}

TEST_CASE("vrtg structural invariants") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    GeneratedInstance gen = generate(
        18, DemandModel::clustered(2 + seed % 3, 0.001), 2100 + seed);
    const Instance& inst = gen.instance;
    ClusterParams p;
    VrtgInstance vrtg = build_vrtg_instance(inst, p);

    // b even and at least 2; groups partition the targets.
    std::set<int> seen;
    for (size_t g = 0; g < vrtg.groups.size(); ++g) {
      CHECK(vrtg.b[g] >= 2);
      CHECK(vrtg.b[g] % 2 == 0);
      for (int ti : vrtg.groups[g]) {
        CHECK(!seen.count(ti));
        seen.insert(ti);
        CHECK(vrtg.group_of[ti] == static_cast<int>(g));
      }
    }
    CHECK(static_cast<int>(seen.size()) == vrtg.num_targets());
    // Every target is inside its own B-set and off the depot.
    for (int ti = 0; ti < vrtg.num_targets(); ++ti) {
      CHECK(inst.depot_dist(vrtg.targets[ti]) > 0.0);
      CHECK(std::count(vrtg.b_sets[ti].begin(), vrtg.b_sets[ti].end(),
                       vrtg.targets[ti]) == 1);
    }

    // Selection sets are pairwise disjoint with demand above 1 - tau.
    REQUIRE(vrtg.selection_sets.size() == vrtg.targets.size());
    std::set<VertexId> taken;
    for (const auto& sel : vrtg.selection_sets) {
      double demand = 0.0;
      for (VertexId v : sel) {
        CHECK(!taken.count(v));
        taken.insert(v);
        demand += inst.demand(v);
      }
      CHECK(demand > 1.0 - p.tau);
    }

    if (vrtg.num_targets() > 0) {
      // Radial accounting: (1-tau)(1-rho) sum c(s,t) stays below
      // sum_v c(s,v) d(v) = half the radial lower bound.
      double target_sum = 0.0;
      for (VertexId t : vrtg.targets) target_sum += inst.depot_dist(t);
      CHECK((1.0 - p.tau) * (1.0 - p.rho) * target_sum <
            inst.radial_lower_bound() / 2.0 + 1e-12);
    }
  }
}

TEST_CASE("vrtg json dump carries the structure") {
  GeneratedInstance gen = generate(12, DemandModel::clustered(2, 0.001), 5);
  ClusterParams p;
  VrtgInstance vrtg = build_vrtg_instance(gen.instance, p);
  nlohmann::json j = vrtg.to_json();
  CHECK(j["targets"].size() == vrtg.targets.size());
  CHECK(j["groups"].size() == vrtg.groups.size());
  CHECK(j["b"].size() == vrtg.b.size());
}

TEST_CASE("vrtg construction matches the frozen fixture dump") {
  GeneratedInstance gen =
      generate(20, DemandModel::clustered(3, 0.001), 2024);
  ClusterParams p = params_with(1.0 / 6.0, 1.0 / 6.0);
  VrtgInstance vrtg = build_vrtg_instance(gen.instance, p);
  std::ifstream in(std::string(CAPRA_FIXTURE_DIR) + "/vrtg_dump.json");
  REQUIRE(in.good());
  std::ostringstream frozen;
  frozen << in.rdbuf();
  CHECK(json_to_string(vrtg.to_json()) == frozen.str());
}

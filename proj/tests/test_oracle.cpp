#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "capra/oracle.hpp"
#include "capra/pipeline.hpp"
#include "support/test_util.hpp"
#include "support/vrtg_fixtures.hpp"

using namespace capra;
using test::manual_vrtg;

TEST_CASE("exact_cvrp basics") {
  SUBCASE("single customer") {
    std::vector<std::vector<double>> mat = {{0, 7}, {7, 0}};
    Instance inst = Instance::matrix(mat, {1.0});
    Solution sol = exact_cvrp(inst);
    REQUIRE(sol.tours.size() == 1);
    CHECK(sol.cost == doctest::Approx(14.0));
  }
  SUBCASE("two heavy customers cannot share") {
    Instance inst = Instance::euclidean(
        {0.0, 0.0}, {{1.0, 0.0}, {1.0, 0.5}}, {0.6, 0.6});
    Solution sol = exact_cvrp(inst);
    REQUIRE(sol.tours.size() == 2);
    CHECK(sol.cost == doctest::Approx(2.0 * inst.depot_dist(1) +
                                      2.0 * inst.depot_dist(2)));
  }
  SUBCASE("size limit") {
    Instance inst = test::random_instance(9, 4);
    CHECK_THROWS_AS(exact_cvrp(inst, 8), ValidationError);
  }
  SUBCASE("solutions are feasible and dominate the pipeline") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
      const int n = 2 + static_cast<int>(seed % 7);
      Instance inst = test::random_instance(n, 7000 + seed);
      Solution opt = exact_cvrp(inst);
      CHECK(verify_solution(inst, opt, DemandVariant::kGeneral).ok());
      PipelineConfig config;
      auto [sol, rep] = solve_best(inst, config);
      CHECK(opt.cost <= sol.cost + 1e-9);
      CHECK(opt.cost >= inst.radial_lower_bound() - 1e-9);
    }
  }
}

TEST_CASE("exact_vrtg basics") {
  SUBCASE("no customers: direct arcs to the cheapest target") {
    Instance inst = Instance::euclidean(
        {0.0, 0.0}, {{2.0, 0.0}, {3.0, 0.0}}, {0.0, 0.0});
    // Both vertices act as targets only; no active customer demand means
    // the walks go straight to the cheapest one. (Customers with zero
    // demand still must be visited, so they ride along the paths.)
    VrtgInstance vrtg = manual_vrtg(inst, {1, 2}, {{0, 1}}, {2});
    VrtgSolution sol = exact_vrtg(vrtg);
    CHECK(verify_vrtg(vrtg, sol).ok());
    // Cheapest: one path through both zero-demand customers to the far
    // target plus one direct path to the near target.
    CHECK(sol.cost == doctest::Approx(3.0 + 2.0));
  }
  SUBCASE("one customer, one target, two walks") {
    Instance inst = Instance::euclidean(
        {0.0, 0.0}, {{1.0, 1.0}, {2.0, 0.0}}, {0.5, 0.0});
    VrtgInstance vrtg = manual_vrtg(inst, {2}, {{0}}, {2});
    VrtgSolution sol = exact_vrtg(vrtg);
    CHECK(verify_vrtg(vrtg, sol).ok());
    const double c_sv = inst.depot_dist(1);
    const double c_st = inst.depot_dist(2);
    const double c_vt = inst.dist(1, 2);
    // Either v rides one of the two target walks or sits on its own cycle.
    const double expect = std::min(c_sv + c_vt + c_st,
                                   2.0 * c_st + 2.0 * c_sv);
    CHECK(sol.cost == doctest::Approx(expect));
  }
  SUBCASE("limits enforced") {
    Instance inst = test::random_instance(7, 3);
    VrtgInstance vrtg = manual_vrtg(inst, {7}, {{0}}, {2});
    CHECK_THROWS_AS(exact_vrtg(vrtg, 6, 6), ValidationError);
    VrtgInstance vrtg2 = manual_vrtg(inst, {7}, {{0}}, {8});
    CHECK_THROWS_AS(exact_vrtg(vrtg2, 7, 6), ValidationError);
  }
}

TEST_CASE("zeta shrinks to zero along tau = rho = cuberoot(eps)") {
  double prev = test::kInf;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double t = std::cbrt(eps);
    const double z = zeta_value(t, t, eps);
    CHECK(z > 0.0);
    CHECK(z < prev);
    prev = z;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("weak fractional construction on a clustered tour") {
  // A single tour of demand about 1 fully inside one B-set.
  ClusterParams p;
  p.tau = 1.0 / 6.0;
  p.rho = 1.0 / 6.0;
  std::vector<std::array<double, 2>> pts;
  std::vector<double> demands;
  for (int i = 0; i < 4; ++i) {
    pts.push_back({1.0 + 0.0005 * i, 0.0});
    demands.push_back(0.23);
  }
  Instance inst = Instance::euclidean({0.0, 0.0}, pts, demands);
  VrtgInstance vrtg = build_vrtg_instance(inst, p);
  REQUIRE(vrtg.num_targets() == 1);
  REQUIRE(vrtg.b[0] == 2);

  Solution opt = exact_cvrp(inst);
  WeakFractional x = build_weak_fractional(inst, opt, vrtg, p);
  WeakFractionalReport rep = check_weak_fractional(x, inst, vrtg, opt.cost, p);
  CHECK(rep.constraints_ok());
  CHECK(rep.min_coverage >= 1.0 - 1e-9);
  CHECK(rep.detour_bound);
  CHECK(rep.body_cost_bound);
  CHECK(rep.total_cost_bound);

  // Exact accounting identities against the source solution.
  CHECK(x.body_cost == doctest::Approx(opt.cost));
  CHECK(x.body_detour ==
        doctest::Approx(opt.cost - inst.radial_lower_bound()));
}

TEST_CASE("weak fractional on empty instances") {
  Instance inst = Instance::euclidean({0.0, 0.0}, {}, {});
  ClusterParams p;
  VrtgInstance vrtg = build_vrtg_instance(inst, p);
  Solution none;
  WeakFractional x = build_weak_fractional(inst, none, vrtg, p);
  CHECK(x.walks.empty());
  CHECK(x.cost() == 0.0);
}

TEST_CASE("radial star with unit demands has zero body detour") {
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{1.0, 0.0}, {0.0, 2.0}, {-1.0, 1.0}}, {1.0, 1.0, 1.0});
  ClusterParams p;
  VrtgInstance vrtg = build_vrtg_instance(inst, p);
  Solution opt = exact_cvrp(inst);
  REQUIRE(opt.tours.size() == 3);  // singletons forced
  WeakFractional x = build_weak_fractional(inst, opt, vrtg, p);
  CHECK(x.body_detour == doctest::Approx(0.0));
  WeakFractionalReport rep = check_weak_fractional(x, inst, vrtg, opt.cost, p);
  CHECK(rep.constraints_ok());
  CHECK(rep.epsilon_actual == doctest::Approx(0.0));
}

TEST_CASE("weak fractional bounds on oracle-solved clustered instances") {
  int built = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    GeneratedInstance gen =
        generate(8, DemandModel::clustered(2, 0.0008), 7100 + seed);
    const Instance& inst = gen.instance;
    ClusterParams p;
    p.tau = 1.0 / 6.0;
    p.rho = 1.0 / 6.0;
    VrtgInstance vrtg = build_vrtg_instance(inst, p);
    Solution opt = exact_cvrp(inst);
    WeakFractional x = build_weak_fractional(inst, opt, vrtg, p);
    WeakFractionalReport rep =
        check_weak_fractional(x, inst, vrtg, opt.cost, p);
    CAPTURE(seed);
    CHECK(rep.constraints_ok());
    CHECK(rep.detour_bound);
    CHECK(rep.body_cost_bound);
    CHECK(rep.total_cost_bound);
    CHECK(x.body_cost == doctest::Approx(opt.cost));
    CHECK(x.body_detour ==
          doctest::Approx(opt.cost - inst.radial_lower_bound())
              .epsilon(1e-6));
    ++built;
  }
  CHECK(built == 40);
}

TEST_CASE("split registry stays consistent") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    GeneratedInstance gen =
        generate(8, DemandModel::clustered(2, 0.0008), 7200 + seed);
    const Instance& inst = gen.instance;
    ClusterParams p;
    p.tau = 1.0 / 6.0;
    p.rho = 1.0 / 6.0;
    VrtgInstance vrtg = build_vrtg_instance(inst, p);
    Solution opt = exact_cvrp(inst);
    WeakFractional x = build_weak_fractional(inst, opt, vrtg, p);
    for (const auto& split : x.splits) {
      CHECK(split.first_part > -kFeasibilityTol);
      CHECK(split.first_part <=
            inst.demand(split.customer) + kFeasibilityTol);
    }
    // At most two splits per group.
    CHECK(x.splits.size() <= 2 * vrtg.groups.size());
  }
}

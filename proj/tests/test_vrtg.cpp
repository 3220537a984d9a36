#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "capra/solver.hpp"
#include "capra/vrtg.hpp"
#include "support/test_util.hpp"
#include "support/vrtg_fixtures.hpp"

using namespace capra;
using test::manual_vrtg;

TEST_CASE("solution/walk round trips") {
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{1.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}}, {0.5, 0.5, 0.5});
  VrtgInstance vrtg = manual_vrtg(inst, {2}, {{0}}, {2});
  const int t = vrtg.target_node(0);

  SUBCASE("a single path maps to its arc set") {
    VrtgSolution sol;
    sol.tours.push_back({{0, 1, 2, t}, false, 0.0});
    WalkSolution h = solution_to_walks(vrtg, sol);
    CHECK(h.arcs.size() == 3);
    CHECK(h.arcs.at({0, 1}) == 1);
    CHECK(h.arcs.at({1, 2}) == 1);
    CHECK(h.arcs.at({2, t}) == 1);
  }
  SUBCASE("two identical paths double the multiplicities") {
    VrtgSolution sol;
    sol.tours.push_back({{0, 1, t}, false, 0.0});
    sol.tours.push_back({{0, 1, t}, false, 0.0});
    WalkSolution h = solution_to_walks(vrtg, sol);
    CHECK(h.arcs.at({0, 1}) == 2);
    CHECK(h.arcs.at({1, t}) == 2);
  }
}

TEST_CASE("hand-built decomposition covers and never costs more") {
  // One cycle through all customers plus two direct target arcs.
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{1.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}}, {0.5, 0.5, 0.5});
  VrtgInstance vrtg = manual_vrtg(inst, {2}, {{0}}, {2});
  const int t = vrtg.target_node(0);

  WalkSolution h;
  h.add_arc(0, 1);
  h.add_arc(1, 2);
  h.add_arc(2, 3);
  h.add_arc(3, 0);
  h.add_arc(0, t);
  h.add_arc(2, t);
  // Balance customer 2: it has two outgoing arcs now, so give it another
  // incoming one.
  h.add_arc(0, 2);
  REQUIRE(check_walk_solution(vrtg, h).ok());

  VrtgSolution sol = walks_to_solution(vrtg, h);
  CHECK(verify_vrtg(vrtg, sol).ok());
  CHECK(sol.cost <= h.cost(vrtg) + 1e-9);
  int path_count = 0;
  for (const auto& tour : sol.tours) path_count += tour.is_cycle ? 0 : 1;
  CHECK(path_count == 2);
}

TEST_CASE("walks_to_solution rejects broken inputs") {
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{1.0, 0.0}, {2.0, 0.0}}, {0.5, 0.5});
  VrtgInstance vrtg = manual_vrtg(inst, {1}, {{0}}, {2});
  const int t = vrtg.target_node(0);

  SUBCASE("unbalanced customer") {
    WalkSolution h;
    h.add_arc(0, 1);
    h.add_arc(0, t);
    h.add_arc(0, t);
    CHECK(!check_walk_solution(vrtg, h).ok());
    CHECK_THROWS_AS(walks_to_solution(vrtg, h), ValidationError);
  }
  SUBCASE("wrong group count") {
    WalkSolution h;
    h.add_arc(0, 1);
    h.add_arc(1, t);
    auto rep = check_walk_solution(vrtg, h);
    REQUIRE(!rep.ok());
    bool group_violation = false;
    for (const auto& v : rep.violations) {
      group_violation |= v.find("group") != std::string::npos;
    }
    CHECK(group_violation);
  }
  SUBCASE("disconnected customer") {
    WalkSolution h;
    h.add_arc(0, t);
    h.add_arc(0, t);
    h.add_arc(1, 2);
    h.add_arc(2, 1);
    CHECK(!check_walk_solution(vrtg, h).ok());
  }
}

TEST_CASE("verify_vrtg flags endpoint miscounts") {
  Instance inst = Instance::euclidean(
      {0.0, 0.0}, {{1.0, 0.0}, {2.0, 0.0}}, {0.5, 0.5});
  VrtgInstance vrtg = manual_vrtg(inst, {1, 2}, {{0, 1}}, {2});
  VrtgSolution sol;
  sol.tours.push_back({{0, 1, vrtg.target_node(0)}, false, 0.0});
  sol.tours.push_back({{0, 2, vrtg.target_node(1)}, false, 0.0});
  sol.tours.push_back({{0, vrtg.target_node(0)}, false, 0.0});
  auto rep = verify_vrtg(vrtg, sol);
  REQUIRE(!rep.ok());
  CHECK(rep.violations[0].find("3 tour endpoints") != std::string::npos);
}

TEST_CASE("round trip through walks never increases cost") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GeneratedInstance gen = generate(
        6 + static_cast<int>(seed % 10),
        DemandModel::clustered(2, 0.001), 2200 + seed);
    const Instance& inst = gen.instance;
    ClusterParams p;
    p.tau = 1.0 / 6.0;
    p.rho = 1.0 / 6.0;
    VrtgInstance vrtg = build_vrtg_instance(inst, p);
    if (vrtg.num_targets() == 0) continue;
    VrtgSolution sol = solve_vrtg(vrtg, p.gamma);
    REQUIRE(verify_vrtg(vrtg, sol).ok());

    WalkSolution h = solution_to_walks(vrtg, sol);
    CHECK(h.cost(vrtg) == doctest::Approx(sol.cost));
    VrtgSolution back = walks_to_solution(vrtg, h);
    CHECK(verify_vrtg(vrtg, back).ok());
    CHECK(back.cost <= sol.cost + 1e-9);

    nlohmann::json dump = vrtg_solution_to_json(vrtg, sol);
    CHECK(dump["tours"].size() == sol.tours.size());
    CHECK(dump["cost"].get<double>() == doctest::Approx(sol.cost));
  }
}

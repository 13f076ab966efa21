#include "carpool/objectives.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"

namespace carpool {
namespace {

RequestLog two_requests() { return {{{0, 3, 4}, {1, 5, 2}}}; }

CostModel fee10() {
  CostModel m;
  m.stop_fee = 10.0;
  return m;
}

TEST(Evaluate, ShortestRouteWithoutDemand) {
  const auto net = testing::ladder6();
  const auto v = evaluate(net, Route{{0, 1, 2}}, RequestLog{}, 1.0, 0.0);
  EXPECT_EQ(v.total_distance, 600.0);
  EXPECT_EQ(v.detour, 0.0);
  EXPECT_EQ(v.occupancy, 0u);
  EXPECT_EQ(v.pickup_drop_cost, 0.0);
  EXPECT_EQ(v.density, 0.0);
}

// Values below were worked out by hand on the ladder fixture:
// shortest 0 -> 2 is 0-1-2 (600 m); pickup/drop offsets are distances to
// the nearest of nodes 0, 1, 2.
TEST(Evaluate, LadderFixtureByHand) {
  const auto net = testing::ladder6();
  const Problem problem(net, two_requests(), 0, 2, fee10());
  EXPECT_EQ(problem.shortest_distance(), 600.0);

  // Serves request 0 only (node 5 is not on the route).
  const auto a = evaluate(problem, Route{{0, 3, 4, 1, 2}});
  EXPECT_EQ(a.total_distance, 1400.0);
  EXPECT_EQ(a.occupancy, 1u);
  EXPECT_EQ(a.detour, 800.0);
  EXPECT_EQ(a.pickup_drop_cost, 400.0 + 400.0 + 2 * 10.0);
  // Both pickups are within 500 m of the route: 2 requests / 1.4 km.
  EXPECT_DOUBLE_EQ(a.density, 2.0 / 1.4);

  const auto b = evaluate(problem, Route{{0, 3, 4, 5, 2}});
  EXPECT_EQ(b.total_distance, 1400.0);
  EXPECT_EQ(b.occupancy, 2u);
  EXPECT_EQ(b.pickup_drop_cost, 820.0 + 400.0 + 0.0 + 20.0);
  EXPECT_DOUBLE_EQ(b.density, 2.0 / 1.4);

  const auto c = evaluate(problem, Route{{0, 1, 2}});
  EXPECT_EQ(c.occupancy, 0u);
  EXPECT_DOUBLE_EQ(c.density, 2.0 / 0.6);
}

TEST(Evaluate, DetourIsTotalMinusShortest) {
  // 0 -> 1 directly is 2920 m; via node 2 it is 2 x 2160 = 4320 m.
  const RoadNetwork net({{0, 0}, {2920, 0}, {1460, 1000}},
                        {{0, 1, 2920}, {0, 2, 2160}, {2, 1, 2160}});
  const auto v = evaluate(net, Route{{0, 2, 1}}, RequestLog{}, 1.0, 0.0);
  EXPECT_EQ(v.total_distance, 4320.0);
  EXPECT_EQ(v.detour, 1400.0);
}

TEST(Evaluate, Errors) {
  const auto net = testing::ladder6();
  const Problem problem(net, two_requests(), 0, 2);
  try {
    evaluate(problem, Route{{0, 4, 2}});
    FAIL() << "expected RouteGapError";
  } catch (const RouteGapError& e) {
    EXPECT_EQ(e.position(), 0u);
  }
  EXPECT_THROW(evaluate(problem, Route{{0, 1}}), std::invalid_argument);
  EXPECT_THROW(evaluate(problem, Route{}), std::invalid_argument);

  const RoadNetwork split({{0, 0}, {10, 0}, {100, 0}}, {{0, 1, 10}});
  EXPECT_THROW(Problem(split, RequestLog{}, 0, 2), InfeasibleError);
}

ObjectiveVector vec(double dist, std::size_t occ, double cost, double detour = 0,
                    double density = 0) {
  return {dist, occ, cost, detour, density};
}

TEST(Dominates, Examples) {
  const auto a = vec(100, 5, 10);
  EXPECT_FALSE(dominates(a, a));
  EXPECT_TRUE(dominates(vec(100, 5, 10), vec(120, 5, 12)));
  EXPECT_FALSE(dominates(vec(120, 5, 12), vec(100, 5, 10)));

  // Two rows of a reference comparison: more riders vs shorter distance.
  const auto row1 = vec(7280, 5, 0);
  const auto row2 = vec(9120, 6, 0);
  EXPECT_FALSE(dominates(row1, row2));
  EXPECT_FALSE(dominates(row2, row1));
}

TEST(Dominates, LowerTierOnlyBreaksTies) {
  // Better density cannot beat a worse primary objective.
  EXPECT_FALSE(dominates(vec(101, 5, 10, 0, 9), vec(100, 5, 10, 0, 1)));
  // Equal primary tier: density decides.
  EXPECT_TRUE(dominates(vec(100, 5, 10, 0, 9), vec(100, 5, 10, 0, 1)));
  EXPECT_FALSE(dominates(vec(100, 5, 10, 0, 1), vec(100, 5, 10, 0, 9)));
  // Differences inside the relative tie tolerance count as ties.
  EXPECT_TRUE(dominates(vec(100 * (1 + 1e-12), 5, 10, 0, 9), vec(100, 5, 10, 0, 1)));
}

ObjectiveVector random_vec(std::mt19937_64& rng) {
  // Coarse values so that ties happen often.
  return vec(1000 + 100 * static_cast<double>(rng() % 10), rng() % 6,
             10 * static_cast<double>(rng() % 5), 0, static_cast<double>(rng() % 3));
}

TEST(Dominates, StrictPartialOrderOnSamples) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20000; ++i) {
    const auto a = random_vec(rng), b = random_vec(rng), c = random_vec(rng);
    EXPECT_FALSE(dominates(a, a));
    EXPECT_FALSE(dominates(a, b) && dominates(b, a));
    if (dominates(a, b) && dominates(b, c)) { EXPECT_TRUE(dominates(a, c)); }
  }
}

std::vector<Evaluated> random_population(std::mt19937_64& rng, std::size_t n) {
  std::vector<Evaluated> pop;
  for (std::size_t i = 0; i < n; ++i)
    pop.push_back({Route{{0, static_cast<NodeId>(i + 1), 999}}, random_vec(rng)});
  return pop;
}

std::vector<Route> brute_force_front(const std::vector<Evaluated>& pop) {
  std::vector<Route> out;
  for (const auto& a : pop) {
    bool dominated = false;
    for (const auto& b : pop) dominated = dominated || dominates(b.objectives, a.objectives);
    if (!dominated) out.push_back(a.route);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Route> routes_of(const ParetoArchive& archive) {
  std::vector<Route> out;
  for (const auto& m : archive.members) out.push_back(m.route);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ParetoFilter, Singleton) {
  const std::vector<Evaluated> one{{Route{{0, 1}}, vec(5, 1, 1)}};
  EXPECT_EQ(pareto_filter(one).size(), 1u);
}

TEST(ParetoFilter, SingleDominator) {
  std::vector<Evaluated> pop{{Route{{0, 1}}, vec(100, 9, 1)}};
  for (NodeId i = 2; i < 20; ++i) pop.push_back({Route{{0, i}}, vec(100 + i, 9 - i % 5, 5)});
  const auto archive = pareto_filter(pop);
  ASSERT_EQ(archive.size(), 1u);
  EXPECT_EQ(archive.members[0].route, (Route{{0, 1}}));
}

TEST(ParetoFilter, DuplicateRoutesCollapse) {
  const Evaluated e{Route{{0, 1, 2}}, vec(10, 1, 1)};
  EXPECT_EQ(pareto_filter({e, e, e}).size(), 1u);
}

TEST(ParetoFilter, MatchesBruteForceAndIsOrderIndependent) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    auto pop = random_population(rng, 200);
    const auto archive = pareto_filter(pop);
    EXPECT_EQ(routes_of(archive), brute_force_front(pop));

    for (const auto& a : archive.members)
      for (const auto& b : archive.members) EXPECT_FALSE(dominates(a.objectives, b.objectives));

    for (const auto& p : pop) {
      const bool kept = std::any_of(archive.members.begin(), archive.members.end(),
                                    [&](const Evaluated& m) { return m.route == p.route; });
      if (!kept) {
        EXPECT_TRUE(std::any_of(archive.members.begin(), archive.members.end(),
                                [&](const Evaluated& m) {
                                  return dominates(m.objectives, p.objectives);
                                }));
      }
    }

    std::shuffle(pop.begin(), pop.end(), rng);
    const auto again = pareto_filter(pop);
    ASSERT_EQ(again.size(), archive.size());
    for (std::size_t i = 0; i < archive.size(); ++i)
      EXPECT_EQ(again.members[i].route, archive.members[i].route);
  }
}

}  // namespace
}  // namespace carpool

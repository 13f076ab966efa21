#include "carpool/hybrid.hpp"

#include <gtest/gtest.h>

#include "carpool/pathfind.hpp"
#include "test_util.hpp"

namespace carpool {
namespace {

// Stops appear in order as a subsequence of the route.
bool visits_in_order(const Route& route, const std::vector<NodeId>& stops) {
  std::size_t k = 0;
  for (NodeId n : route.nodes)
    if (k < stops.size() && n == stops[k]) ++k;
  return k == stops.size();
}

TEST(SuffixRefine, Degenerate) {
  const auto net = testing::ladder6();
  const Route r{{0, 3, 4, 1, 2}};
  EXPECT_EQ(suffix_refine(net, r, r.size() - 1), r);
  EXPECT_EQ(suffix_refine(net, r, 0), astar(net, 0, 2).route());
  // Prefix 0-3, then any of the equal 1000 m paths from 3 to 2.
  const auto from3 = suffix_refine(net, r, 1);
  EXPECT_TRUE(is_valid_route(net, from3, 0, 2));
  EXPECT_EQ((std::vector<NodeId>(from3.nodes.begin(), from3.nodes.begin() + 2)),
            (std::vector<NodeId>{0, 3}));
  EXPECT_EQ(route_length(net, from3), 1400.0);
  EXPECT_THROW(suffix_refine(net, r, 9), std::out_of_range);
}

TEST(SuffixRefine, NeverLongerThanOriginal) {
  const auto net = testing::grid116(2);
  Rng rng(2);
  int strictly_shorter = 0;
  for (int i = 0; i < 200; ++i) {
    const auto r = random_route(net, 12, 95, rng, 60);
    const auto p = static_cast<std::size_t>(rng.index(r.size()));
    const auto refined = suffix_refine(net, r, p);
    ASSERT_TRUE(is_valid_route(net, refined, 12, 95));
    EXPECT_LE(route_length(net, refined), route_length(net, r));
    if (route_length(net, refined) < route_length(net, r)) ++strictly_shorter;
  }
  EXPECT_GT(strictly_shorter, 0);
}

TEST(ChainRefine, NoStopsGivesShortestPath) {
  const auto net = testing::grid116();
  ServicePlan plan;
  plan.source = 3;
  plan.destination = 77;
  EXPECT_EQ(chain_refine(net, plan), astar(net, 3, 77).route());
  plan.destination = 3;
  EXPECT_EQ(chain_refine(net, plan), (Route{{3}}));
}

TEST(ChainRefine, StopsOnShortestPath) {
  // Regular grid row: the shortest 0 -> 6 path is the row itself.
  const auto net = generate_grid(3, 7, 400, 0, 1);
  const auto shortest = astar(net, 0, 6);
  ASSERT_EQ(shortest.path, (std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6}));
  const Route detour{{0, 1, 8, 1, 2, 3, 10, 3, 4, 5, 6}};
  const auto plan = assign_served(detour, {{{0, 1, 4}, {1, 2, 3}}});
  ASSERT_EQ(plan.occupancy(), 2u);
  const auto chained = chain_refine(net, plan);
  EXPECT_EQ(route_length(net, chained), shortest.cost);
  EXPECT_LT(route_length(net, chained), route_length(net, detour));
}

TEST(ChainRefine, ServesPlanWithShortestLegs) {
  const auto net = testing::grid116(5);
  Rng rng(5);
  const auto log = generate_requests(net, 80, 5);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto r = random_route(net, 40, 80, rng, 80);
    const auto plan = assign_served(r, log);
    const auto chained = chain_refine(net, plan);
    const auto stops = stop_sequence(plan);
    ASSERT_TRUE(is_valid_route(net, chained, 40, 80));
    EXPECT_TRUE(visits_in_order(chained, stops));
    EXPECT_LE(route_length(net, chained), route_length(net, r));

    // Every planned request is served again, at no fewer requests overall.
    const auto replan = assign_served(chained, log);
    EXPECT_GE(replan.occupancy(), plan.occupancy());
    for (const auto& s : plan.served) {
      EXPECT_TRUE(std::any_of(replan.served.begin(), replan.served.end(),
                              [&](const ServedRequest& t) { return t.request == s.request; }));
    }

    // Sum of per-leg shortest distances equals the chained length.
    double legs = 0.0;
    for (std::size_t k = 0; k + 1 < stops.size(); ++k)
      legs += astar(net, stops[k], stops[k + 1]).cost;
    EXPECT_NEAR(route_length(net, chained), legs, 1e-9 * legs);
    checked += plan.occupancy() > 0;
  }
  EXPECT_GT(checked, 10);
}

TEST(StopSequence, PrecedenceAndEndpoints) {
  ServicePlan plan;
  plan.source = 0;
  plan.destination = 9;
  plan.served = {{{0, 4, 7}, 2, 6}, {{1, 5, 6}, 3, 4}};
  EXPECT_EQ(stop_sequence(plan), (std::vector<NodeId>{0, 4, 5, 6, 7, 9}));
}

TEST(RefineArchive, ZeroStopRouteBecomesShortest) {
  const auto net = testing::ladder6();
  const Problem problem(net, RequestLog{}, 0, 2);
  const Route wander{{0, 3, 4, 1, 2}};
  ParetoArchive archive;
  archive.members.push_back({wander, evaluate(problem, wander)});
  const auto refined = refine_archive(problem, archive);
  ASSERT_EQ(refined.size(), 1u);
  EXPECT_EQ(refined.members[0].route, (Route{{0, 1, 2}}));
}

TEST(RefineArchive, NeverWorseAndKeepsOccupancy) {
  const auto net = testing::grid116(1);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto log = radius_filter(net, generate_requests(net, 12, seed), 33, 3.0);
    const Problem problem(net, log, 33, 70);
    Rng rng(seed);
    std::vector<Evaluated> pop;
    for (int i = 0; i < 40; ++i) {
      auto r = random_route(net, 33, 70, rng, 60);
      pop.push_back({r, evaluate(problem, r)});
    }
    const auto archive = pareto_filter(pop);
    const auto refined = refine_archive(problem, archive);
    EXPECT_LE(refined.members.front().objectives.total_distance,
              archive.members.front().objectives.total_distance);
    for (const auto& a : refined.members)
      for (const auto& b : refined.members) EXPECT_FALSE(dominates(a.objectives, b.objectives));

    // Each elite's chained rebuild serves at least as many requests.
    for (const auto& elite : archive.members) {
      const auto plan = assign_served(elite.route, log);
      const auto chained = evaluate(problem, chain_refine(net, plan));
      EXPECT_GE(chained.occupancy, elite.objectives.occupancy);
      EXPECT_LE(chained.total_distance, elite.objectives.total_distance);
    }
  }
}

}  // namespace
}  // namespace carpool

#include "carpool/evolve.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "carpool/hybrid.hpp"
#include "carpool/pathfind.hpp"
#include "test_util.hpp"

namespace carpool {
namespace {

TEST(RandomRoute, Trivial) {
  Rng rng(1);
  const auto net = testing::two_nodes();
  EXPECT_EQ(random_route(net, 1, 1, rng, 10), (Route{{1}}));
  EXPECT_EQ(random_route(net, 0, 1, rng, 10), (Route{{0, 1}}));
}

TEST(RandomRoute, FallsBackToShortestPath) {
  const auto net = testing::grid116();
  Rng rng(3);
  EXPECT_EQ(random_route(net, 0, 115, rng, 1), astar(net, 0, 115).route());
}

TEST(RandomRoute, InvariantSweep) {
  const auto net = testing::grid116(2);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto x = static_cast<NodeId>(rng.index(net.node_count()));
    const auto y = static_cast<NodeId>(rng.index(net.node_count()));
    const auto r = random_route(net, x, y, rng, 40);
    ASSERT_TRUE(is_valid_route(net, r, x, y)) << format_route(r);
  }
}

TEST(RandomRoute, DeterministicPerState) {
  const auto net = testing::grid116();
  Rng a(8), b(8);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(random_route(net, 5, 90, a, 50), random_route(net, 5, 90, b, 50));
}

TEST(RandomRoute, Unreachable) {
  const RoadNetwork net({{0, 0}, {10, 0}, {100, 0}}, {{0, 1, 10}});
  Rng rng(1);
  EXPECT_THROW(random_route(net, 0, 2, rng, 10), InfeasibleError);
}

Evaluated member(NodeId tag, double dist, std::size_t occ, double cost) {
  return {Route{{0, tag, 99}}, {dist, occ, cost, 0.0, 0.0}};
}

TEST(Tournament, SizeOneReturnsTheSample) {
  const std::vector<Evaluated> pop{member(1, 500, 1, 1)};
  Rng rng(1);
  EXPECT_EQ(tournament_select(pop, 1, rng), pop[0].route);
}

TEST(Tournament, DominanceForcesWinner) {
  const std::vector<Evaluated> pop{member(1, 100, 5, 1), member(2, 200, 4, 2)};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    EXPECT_EQ(tournament_select_index(pop, 64, rng), 0u);
  }
  EXPECT_THROW(
      [] {
        Rng rng(1);
        tournament_select_index({}, 2, rng);
      }(),
      std::invalid_argument);
}

TEST(Tournament, FavoursNonDominatedMembers) {
  // Members 0-2 are mutually non-dominated; 3-9 are each dominated.
  std::vector<Evaluated> pop{member(1, 100, 1, 1), member(2, 150, 3, 1), member(3, 200, 6, 1)};
  for (NodeId i = 4; i <= 10; ++i) pop.push_back(member(i, 300 + i, 1, 5));
  std::map<std::size_t, int> wins;
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) ++wins[tournament_select_index(pop, 3, rng)];
  int worst_front = 10000, best_dominated = 0;
  for (std::size_t i = 0; i < 3; ++i) worst_front = std::min(worst_front, wins[i]);
  for (std::size_t i = 3; i < pop.size(); ++i) best_dominated = std::max(best_dominated, wins[i]);
  EXPECT_GT(worst_front, best_dominated);
}

TEST(Crossover, IdenticalParents) {
  Rng rng(1);
  const Route a{{0, 1, 2}};
  const auto [c1, c2] = crossover(a, a, rng);
  EXPECT_EQ(c1, a);
  EXPECT_EQ(c2, a);
}

TEST(Crossover, HandEnumeratedCut) {
  const auto net = testing::ladder6();
  // Interiors share nodes 1 and 4.
  const Route a{{0, 1, 4, 5, 2}};
  const Route b{{0, 3, 4, 1, 2}};
  const std::set<std::pair<Route, Route>> expected{
      // cut at 1
      {Route{{0, 1, 2}}, Route{{0, 3, 4, 1, 4, 5, 2}}},
      // cut at 4
      {Route{{0, 1, 4, 1, 2}}, Route{{0, 3, 4, 5, 2}}},
  };
  std::set<std::pair<Route, Route>> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    auto children = crossover(a, b, rng);
    EXPECT_TRUE(expected.count(children)) << format_route(children.first);
    EXPECT_TRUE(is_valid_route(net, children.first, 0, 2));
    EXPECT_TRUE(is_valid_route(net, children.second, 0, 2));
    seen.insert(children);
  }
  EXPECT_EQ(seen, expected);
}

TEST(Crossover, NoCommonInteriorReturnsParents) {
  Rng rng(1);
  const Route a{{0, 1, 2}};
  const Route b{{0, 3, 4, 5, 2}};
  const auto [c1, c2] = crossover(a, b, rng);
  EXPECT_EQ(c1, a);
  EXPECT_EQ(c2, b);
  EXPECT_THROW(crossover(a, Route{{0, 1}}, rng), std::invalid_argument);
}

TEST(Crossover, InvariantSweep) {
  const auto net = testing::grid116(3);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_route(net, 31, 84, rng, 40);
    const auto b = random_route(net, 31, 84, rng, 40);
    const auto [c1, c2] = crossover(a, b, rng);
    ASSERT_TRUE(is_valid_route(net, c1, 31, 84));
    ASSERT_TRUE(is_valid_route(net, c2, 31, 84));
    EXPECT_EQ(c1.size() + c2.size(), a.size() + b.size());
  }
}

TEST(Mutate, RateZeroIsIdentity) {
  const auto net = testing::grid116();
  Rng rng(1);
  const auto r = random_route(net, 0, 60, rng, 30);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mutate(r, net, 0.0, rng), r);
}

TEST(Mutate, KeepsEndpoints) {
  const auto net = testing::two_nodes();
  Rng rng(1);
  const auto m = mutate(Route{{0, 1}}, net, 1.0, rng);
  EXPECT_EQ(m.source(), 0u);
  EXPECT_EQ(m.destination(), 1u);
  EXPECT_TRUE(is_valid_route(net, m, 0, 1));
}

TEST(Mutate, InvariantSweep) {
  const auto net = testing::grid116(4);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto r = random_route(net, 10, 100, rng, 50);
    const auto m = mutate(r, net, 1.0, rng);
    ASSERT_TRUE(is_valid_route(net, m, 10, 100)) << format_route(m);
  }
}

TEST(CapArchive, KeepsSpreadIncludingExtremes) {
  ParetoArchive a;
  for (NodeId i = 0; i < 20; ++i) a.members.push_back(member(i, 1000 + 10.0 * i * i, i, 0));
  const auto capped = cap_archive(a, 5);
  ASSERT_EQ(capped.size(), 5u);
  EXPECT_EQ(capped.members.front().objectives.total_distance, 1000.0);
  EXPECT_EQ(capped.members.back().objectives.total_distance, 1000.0 + 10.0 * 19 * 19);
  EXPECT_EQ(cap_archive(a, 1).members.front().objectives.total_distance, 1000.0);
  EXPECT_EQ(cap_archive(a, 50).size(), 20u);
}

TEST(GaConfig, Validation) {
  GaConfig ok;
  EXPECT_NO_THROW(ok.validate());
  auto bad = ok;
  bad.refill_count = 1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.generation_size = 500;
  bad.refill_count = 490;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.mutation_rate = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.max_generations = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.tournament_size = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

GaConfig small_config(std::uint64_t seed) {
  GaConfig cfg;
  cfg.pool_size = 60;
  cfg.generation_size = 30;
  cfg.elite_count = 10;
  cfg.refill_count = 20;
  cfg.max_generations = 15;
  cfg.seed = seed;
  return cfg;
}

TEST(RunGa, TinyInstance) {
  const auto net = testing::two_nodes();
  const Problem problem(net, RequestLog{}, 0, 1);
  GaConfig cfg;
  cfg.pool_size = cfg.generation_size = cfg.elite_count = 1;
  cfg.refill_count = 0;
  cfg.max_generations = 1;
  const auto archive = run_ga(problem, cfg);
  ASSERT_EQ(archive.size(), 1u);
  EXPECT_EQ(archive.members[0].route, (Route{{0, 1}}));
}

TEST(RunGa, DeterministicAndNonDegrading) {
  const auto net = testing::grid116(1);
  const auto log = radius_filter(net, generate_requests(net, 12, 3), 33, 3.0);
  const Problem problem(net, log, 33, 70);
  GaTrace trace;
  const auto a = run_ga(problem, small_config(5), {}, RefineMode::per_generation, &trace);
  const auto b = run_ga(problem, small_config(5));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.members[i].route, b.members[i].route);
    EXPECT_EQ(a.members[i].objectives, b.members[i].objectives);
  }
  EXPECT_LE(a.size(), 10u);
  EXPECT_EQ(trace.invalid_routes, 0u);
  EXPECT_GT(trace.routes_checked, 0u);
  ASSERT_EQ(trace.best_distance.size(), 15u);
  for (std::size_t i = 1; i < trace.best_distance.size(); ++i)
    EXPECT_LE(trace.best_distance[i], trace.best_distance[i - 1]);
  for (const auto& x : a.members)
    for (const auto& y : a.members) EXPECT_FALSE(dominates(x.objectives, y.objectives));
}

TEST(RunGa, RefinerShortensArchive) {
  const auto net = testing::grid116(1);
  int better = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto log = radius_filter(net, generate_requests(net, 12, seed), 33, 3.0);
    const Problem problem(net, log, 33, 70);
    const auto plain = run_ga(problem, small_config(seed));
    const auto refined = run_ga(problem, small_config(seed), hybrid_refiner());
    auto mean = [](const ParetoArchive& a) {
      double s = 0;
      for (const auto& m : a.members) s += m.objectives.total_distance;
      return s / static_cast<double>(a.size());
    };
    if (mean(refined) <= mean(plain)) ++better;
  }
  EXPECT_EQ(better, 5);
}

}  // namespace
}  // namespace carpool

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "carpool/objectives.hpp"
#include "carpool/random.hpp"
#include "carpool/route.hpp"

namespace carpool {

/// GA parameters. The pool holds pool_size random routes; each generation
/// works on generation_size routes, made of up to elite_count archive
/// members topped up with random pool routes (elite + refill = generation).
struct GaConfig {
  std::size_t pool_size = 200;
  std::size_t generation_size = 60;
  std::size_t elite_count = 10;
  std::size_t refill_count = 50;
  int max_generations = 50;
  std::size_t tournament_size = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  std::uint64_t seed = 1;
  /// Longest random walk before falling back to the shortest path to the
  /// destination; 0 means 4x the hop count of the shortest route.
  std::size_t max_route_len = 0;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

enum class RefineMode { per_generation, final_only };

/// Hook applied to the elite archive (see hybrid.hpp).
using Refiner = std::function<ParetoArchive(const Problem&, const ParetoArchive&)>;

/// Optional per-run diagnostics.
struct GaTrace {
  std::vector<double> best_distance;  // archive minimum after each generation
  std::size_t routes_checked = 0;
  std::size_t invalid_routes = 0;
};

/// Random walk from source to destination that avoids stepping straight
/// back unless it is at a dead end. After max_len nodes the walk is closed
/// with the A* path to the destination. Throws InfeasibleError when the
/// destination cannot be reached.
Route random_route(const RoadNetwork& net, NodeId source, NodeId destination,
                   Rng& rng, std::size_t max_len);

/// Samples `size` members with replacement and returns the position of a
/// sampled member no other sampled member dominates; shorter total distance
/// wins among those, then a random pick.
std::size_t tournament_select_index(std::span<const Evaluated> pop,
                                    std::size_t size, Rng& rng);
Route tournament_select(std::span<const Evaluated> pop, std::size_t size, Rng& rng);

/// Common-node crossover: picks a node that occurs in the interior of both
/// parents and swaps the suffixes after its first occurrence in each. When
/// the interiors share no node the parents come back unchanged.
std::pair<Route, Route> crossover(const Route& a, const Route& b, Rng& rng);

/// With probability `rate`, regrows the route from a random interior
/// position with a fresh random walk to the destination.
Route mutate(const Route& route, const RoadNetwork& net, double rate, Rng& rng,
             std::size_t max_len = 0);

/// Keeps at most n members, spread out by total distance (farthest-point
/// selection seeded with the shortest and longest member).
ParetoArchive cap_archive(ParetoArchive archive, std::size_t n);

/// The generational loop. Deterministic for a given problem and config.
ParetoArchive run_ga(const Problem& problem, const GaConfig& cfg,
                     const Refiner& refiner = {},
                     RefineMode mode = RefineMode::per_generation,
                     GaTrace* trace = nullptr);

}  // namespace carpool

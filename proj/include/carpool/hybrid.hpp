#pragma once

#include <vector>

#include "carpool/demand.hpp"
#include "carpool/evolve.hpp"
#include "carpool/objectives.hpp"
#include "carpool/roadnet.hpp"
#include "carpool/route.hpp"

namespace carpool {

/// Source, then the served pickups and drops in the order the plan's route
/// visits them, then destination. Consecutive repeats are collapsed.
std::vector<NodeId> stop_sequence(const ServicePlan& plan);

/// Keeps route[0..position] and continues from there along the A* path to
/// the route's destination.
Route suffix_refine(const RoadNetwork& net, const Route& route, std::size_t position);

/// Chains A* paths between consecutive stops of the plan. Stop order is
/// taken from the plan as is.
Route chain_refine(const RoadNetwork& net, const ServicePlan& plan);

/// For every elite: one suffix_refine per served pickup/drop position and
/// one chain_refine of its service plan. Returns the non-dominated set over
/// the elites and all refinements.
ParetoArchive refine_archive(const Problem& problem, const ParetoArchive& archive);

/// refine_archive packaged as a run_ga hook.
Refiner hybrid_refiner();

}  // namespace carpool

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "carpool/demand.hpp"
#include "carpool/roadnet.hpp"
#include "carpool/route.hpp"

namespace carpool {

/// Per-route scores. The first three form the primary tier compared by
/// Pareto dominance; detour and density only separate primary-tier ties.
struct ObjectiveVector {
  double total_distance = 0.0;    // meters, minimize
  std::size_t occupancy = 0;      // requests served, maximize
  double pickup_drop_cost = 0.0;  // currency units, minimize
  double detour = 0.0;            // meters, minimize
  double density = 0.0;           // requests per km of route, maximize

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// Parameters of the cost and density objectives.
///
/// pickup_drop_cost for a served request is fare_per_meter times the
/// straight-line offsets of its pickup and drop from the shortest
/// source-destination path (distance to the nearest node on that path),
/// plus stop_fee for each of the two stops.
struct CostModel {
  double fare_per_meter = 1.0;
  double stop_fee = 0.0;
  std::optional<int> capacity;
  double density_radius_m = 500.0;
};

/// The source/destination pair is not connected.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One optimization instance: network, filtered demand, endpoints and the
/// cost model, plus the shortest source-destination path every evaluation
/// needs. Holds a reference to the network, which must outlive it.
class Problem {
 public:
  Problem(const RoadNetwork& net, RequestLog log, NodeId source,
          NodeId destination, CostModel model = {});

  const RoadNetwork& net() const { return *net_; }
  const RequestLog& log() const { return log_; }
  NodeId source() const { return source_; }
  NodeId destination() const { return destination_; }
  const CostModel& model() const { return model_; }

  const Route& shortest_route() const { return shortest_route_; }
  double shortest_distance() const { return shortest_distance_; }

  /// Straight-line distance from n to the nearest node of shortest_route().
  double offset(NodeId n) const;

 private:
  const RoadNetwork* net_;
  RequestLog log_;
  NodeId source_;
  NodeId destination_;
  CostModel model_;
  Route shortest_route_;
  double shortest_distance_ = 0.0;
};

/// Throws RouteGapError for a hop without an edge and std::invalid_argument
/// when the route's endpoints are not the problem's.
ObjectiveVector evaluate(const Problem& problem, const Route& route);

ObjectiveVector evaluate(const RoadNetwork& net, const Route& route,
                         const RequestLog& log, double fare, double stop_fee);

/// Relative tie tolerance used when comparing objective values.
inline constexpr double kTieTolerance = 1e-9;

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

struct Evaluated {
  Route route;
  ObjectiveVector objectives;
};

/// Mutually non-dominated members, no repeated routes, sorted by total
/// distance, then occupancy (descending), then route.
struct ParetoArchive {
  std::vector<Evaluated> members;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

ParetoArchive pareto_filter(std::vector<Evaluated> population);

/// Sorts into archive order.
void sort_archive_order(std::vector<Evaluated>& members);

}  // namespace carpool

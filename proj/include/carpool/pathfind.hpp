#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "carpool/roadnet.hpp"
#include "carpool/route.hpp"

namespace carpool {

/// One open/closed list entry: f = g + h.
struct SearchNodeRecord {
  NodeId node = 0;
  double g = 0.0;  // cost from the start
  double h = 0.0;  // heuristic estimate to the goal
  double f = 0.0;
  std::optional<NodeId> parent;
};

struct PathResult {
  std::vector<NodeId> path;  // empty when the goal is unreachable
  double cost = std::numeric_limits<double>::infinity();
  std::size_t expanded = 0;  // closed-list insertions

  bool found() const { return !path.empty(); }
  Route route() const { return Route{path}; }
};

/// Optional observer for tests: every record in the order it was closed.
struct SearchTrace {
  std::vector<SearchNodeRecord> closed;
};

/// Straight-line distance from n to goal.
double euclidean_heuristic(const RoadNetwork& net, NodeId n, NodeId goal);

/// A* with the straight-line heuristic.
///
/// The open list is ordered by ascending f; ties go to the larger g and then
/// the smaller node id. A node already on the open list is updated when it
/// is reached again with a smaller g. Closed nodes are never reopened, which
/// is safe because RoadNetwork guarantees the heuristic is consistent.
PathResult astar(const RoadNetwork& net, NodeId src, NodeId dst,
                 SearchTrace* trace = nullptr);

/// Same search with h = 0. Used as the reference oracle.
PathResult dijkstra(const RoadNetwork& net, NodeId src, NodeId dst,
                    SearchTrace* trace = nullptr);

/// Shortest distances among a node subset. Unreachable pairs hold +inf.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<NodeId> nodes, std::vector<double> values);

  std::size_t size() const { return nodes_.size(); }
  std::span<const NodeId> nodes() const { return nodes_; }

  /// By position in nodes().
  double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }

  /// By node id; throws std::out_of_range for ids not in the subset.
  double distance(NodeId a, NodeId b) const;
  bool reachable(NodeId a, NodeId b) const;
  bool all_reachable() const;

 private:
  std::size_t position(NodeId n) const;

  std::vector<NodeId> nodes_;
  std::vector<double> values_;
};

/// Exact shortest distances (one A* per pair). Duplicate ids are collapsed.
/// On undirected networks the table is symmetric by construction.
DistanceMatrix shortest_distance_matrix(const RoadNetwork& net,
                                        std::span<const NodeId> nodes);

}  // namespace carpool

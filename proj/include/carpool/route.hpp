#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carpool/roadnet.hpp"

namespace carpool {

/// A chromosome: the node sequence a car drives from source to destination.
/// Nodes may repeat; consecutive nodes must be adjacent.
struct Route {
  std::vector<NodeId> nodes;

  NodeId source() const { return nodes.front(); }
  NodeId destination() const { return nodes.back(); }
  std::size_t size() const { return nodes.size(); }

  friend auto operator<=>(const Route&, const Route&) = default;
  friend bool operator==(const Route&, const Route&) = default;
};

/// Raised when a route has a hop between non-adjacent nodes.
class RouteGapError : public std::runtime_error {
 public:
  RouteGapError(std::size_t position, NodeId from, NodeId to);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Index of the first hop (i -> i+1) without an edge, if any.
std::optional<std::size_t> find_gap(const RoadNetwork& net, const Route& route);

/// Non-empty, adjacent hops, ids in range, and the given endpoints.
bool is_valid_route(const RoadNetwork& net, const Route& route, NodeId source,
                    NodeId destination);

/// Sum of hop lengths; throws RouteGapError on a missing edge.
double route_length(const RoadNetwork& net, const Route& route);

/// Space separated ids, the notation used in report files.
std::string format_route(const Route& route);
Route parse_route(const std::string& text);

}  // namespace carpool

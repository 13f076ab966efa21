#include "carpool/route.hpp"

#include <sstream>

namespace carpool {

RouteGapError::RouteGapError(std::size_t position, NodeId from, NodeId to)
    : std::runtime_error("route has no edge between positions " +
                         std::to_string(position) + " and " +
                         std::to_string(position + 1) + " (nodes " +
                         std::to_string(from) + " -> " + std::to_string(to) + ")"),
      position_(position) {}

std::optional<std::size_t> find_gap(const RoadNetwork& net, const Route& route) {
  for (std::size_t i = 0; i + 1 < route.nodes.size(); ++i) {
    if (!edge_length(net, route.nodes[i], route.nodes[i + 1])) return i;
  }
  return std::nullopt;
}

bool is_valid_route(const RoadNetwork& net, const Route& route, NodeId source,
                    NodeId destination) {
  if (route.nodes.empty()) return false;
  if (route.source() != source || route.destination() != destination) return false;
  for (NodeId n : route.nodes)
    if (!net.valid(n)) return false;
  return !find_gap(net, route).has_value();
}

double route_length(const RoadNetwork& net, const Route& route) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < route.nodes.size(); ++i) {
    auto len = edge_length(net, route.nodes[i], route.nodes[i + 1]);
    if (!len) throw RouteGapError(i, route.nodes[i], route.nodes[i + 1]);
    total += *len;
  }
  return total;
}

std::string format_route(const Route& route) {
  std::string out;
  for (std::size_t i = 0; i < route.nodes.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(route.nodes[i]);
  }
  return out;
}

Route parse_route(const std::string& text) {
  Route r;
  std::istringstream in(text);
  long long id;
  while (in >> id) {
    if (id < 0) throw std::invalid_argument("negative node id in route");
    r.nodes.push_back(static_cast<NodeId>(id));
  }
  if (!in.eof()) throw std::invalid_argument("bad route text '" + text + "'");
  return r;
}

}  // namespace carpool

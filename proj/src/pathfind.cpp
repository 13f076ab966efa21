#include "carpool/pathfind.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace carpool {

namespace {

struct OpenEntry {
  double f;
  double g;
  NodeId node;
};

// priority_queue keeps the "largest" on top, so this orders the entry we
// want to pop next as greatest: smaller f, then larger g, then smaller id.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.node > b.node;
  }
};

PathResult best_first(const RoadNetwork& net, NodeId src, NodeId dst,
                      bool informed, SearchTrace* trace) {
  net.check(src);
  net.check(dst);
  const auto n = net.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

  std::vector<double> best_g(n, kInf);
  std::vector<NodeId> parent(n, kNone);
  std::vector<char> closed(n, 0);
  auto heuristic = [&](NodeId v) {
    return informed ? euclidean_heuristic(net, v, dst) : 0.0;
  };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  best_g[src] = 0.0;
  open.push({heuristic(src), 0.0, src});

  PathResult result;
  while (!open.empty()) {
    const OpenEntry cur = open.top();
    open.pop();
    // Stale copies left behind by a decrease-key.
    if (closed[cur.node] || cur.g != best_g[cur.node]) continue;

    if (cur.node == dst) {
      for (NodeId v = dst; v != kNone; v = parent[v]) result.path.push_back(v);
      std::reverse(result.path.begin(), result.path.end());
      result.cost = cur.g;
      return result;
    }

    for (const Arc& arc : net.neighbors(cur.node)) {
      if (closed[arc.to]) continue;
      const double g = cur.g + arc.length;
      if (g < best_g[arc.to]) {
        best_g[arc.to] = g;
        parent[arc.to] = cur.node;
        open.push({g + heuristic(arc.to), g, arc.to});
      }
    }

    closed[cur.node] = 1;
    ++result.expanded;
    if (trace) {
      std::optional<NodeId> p;
      if (parent[cur.node] != kNone) p = parent[cur.node];
      const double h = heuristic(cur.node);
      trace->closed.push_back({cur.node, cur.g, h, cur.g + h, p});
    }
  }
  return result;
}

}  // namespace

double euclidean_heuristic(const RoadNetwork& net, NodeId n, NodeId goal) {
  if (n == goal) {
    net.check(n);
    return 0.0;
  }
  return straight_line(net.coord(n), net.coord(goal));
}

PathResult astar(const RoadNetwork& net, NodeId src, NodeId dst,
                 SearchTrace* trace) {
  return best_first(net, src, dst, true, trace);
}

PathResult dijkstra(const RoadNetwork& net, NodeId src, NodeId dst,
                    SearchTrace* trace) {
  return best_first(net, src, dst, false, trace);
}

DistanceMatrix::DistanceMatrix(std::vector<NodeId> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (values_.size() != nodes_.size() * nodes_.size()) {
    throw std::invalid_argument("distance matrix shape mismatch");
  }
}

std::size_t DistanceMatrix::position(NodeId n) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end()) {
    throw std::out_of_range("node " + std::to_string(n) + " not in distance matrix");
  }
  return static_cast<std::size_t>(it - nodes_.begin());
}

double DistanceMatrix::distance(NodeId a, NodeId b) const {
  return at(position(a), position(b));
}

bool DistanceMatrix::reachable(NodeId a, NodeId b) const {
  return distance(a, b) != std::numeric_limits<double>::infinity();
}

bool DistanceMatrix::all_reachable() const {
  return std::none_of(values_.begin(), values_.end(), [](double v) {
    return v == std::numeric_limits<double>::infinity();
  });
}

DistanceMatrix shortest_distance_matrix(const RoadNetwork& net,
                                        std::span<const NodeId> nodes) {
  std::vector<NodeId> unique;
  for (NodeId v : nodes) {
    net.check(v);
    if (std::find(unique.begin(), unique.end(), v) == unique.end())
      unique.push_back(v);
  }
  const auto k = unique.size();
  std::vector<double> values(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = net.directed() ? 0 : i + 1; j < k; ++j) {
      if (i == j) continue;
      values[i * k + j] = astar(net, unique[i], unique[j]).cost;
      if (!net.directed()) values[j * k + i] = values[i * k + j];
    }
  }
  return DistanceMatrix(std::move(unique), std::move(values));
}

}  // namespace carpool

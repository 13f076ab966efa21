#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace carpool {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

double straight_line(Point a, Point b);

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length = 0.0;  // meters

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
  NodeId to = 0;
  double length = 0.0;
};

/// Malformed graph file (syntax, bad header, unparsable numbers).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed graph that breaks a network invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node id outside [0, node_count).
class InvalidNodeError : public std::out_of_range {
 public:
  explicit InvalidNodeError(NodeId id);
  NodeId id() const { return id_; }

 private:
  NodeId id_;
};

/// Weighted road graph over junctions with planar coordinates.
///
/// Immutable once constructed. The constructor enforces every invariant:
/// no self loops, no duplicate edges, strictly positive finite lengths, and
/// each edge at least as long as the straight line between its endpoints,
/// which keeps the straight-line A* heuristic admissible and consistent.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<Point> coords, std::vector<Edge> edges,
              bool directed = false);

  std::size_t node_count() const { return coords_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool directed() const { return directed_; }

  bool valid(NodeId n) const { return n < coords_.size(); }
  void check(NodeId n) const;

  Point coord(NodeId n) const;
  const std::vector<Point>& coords() const { return coords_; }

  /// Edges in normalized form (u < v when undirected), sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  /// Outgoing arcs of n, sorted by target id.
  std::span<const Arc> neighbors(NodeId n) const;

  friend bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
    return a.directed_ == b.directed_ && a.edges_ == b.edges_ &&
           a.same_coords(b);
  }

 private:
  bool same_coords(const RoadNetwork& other) const;

  std::vector<Point> coords_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;  // CSR row starts, size node_count + 1
  std::vector<Arc> arcs_;
  bool directed_ = false;
};

/// Length of edge (u, v), or nullopt when the two ids are not adjacent.
/// Throws InvalidNodeError for ids outside the network.
std::optional<double> edge_length(const RoadNetwork& net, NodeId u, NodeId v);

/// True when every node can reach every other node (weakly, for directed
/// graphs the check follows arcs in both directions).
bool is_connected(const RoadNetwork& net);
bool is_connected(const RoadNetwork& net, std::span<const NodeId> subset);

// Graph files.
//
//   carpool-graph 1 undirected        (or "directed")
//   # comment
//   node <id> <x> <y>
//   edge <u> <v> <length>
//
// Node ids must be exactly 0..N-1 (any order). Blank lines and lines starting
// with '#' are ignored.
RoadNetwork parse_network(std::istream& in);
RoadNetwork load_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const RoadNetwork& net);
void save_network(const std::filesystem::path& path, const RoadNetwork& net);

/// Connected 4-neighbour grid. Node id = row * cols + col. Each coordinate
/// is jittered uniformly within +-perturbation and edge lengths are the
/// straight-line distances between the jittered endpoints.
RoadNetwork generate_grid(int rows, int cols, double spacing,
                          double perturbation, std::uint64_t seed);

/// Shortest repr that round-trips through strtod.
std::string format_number(double value);

}  // namespace carpool

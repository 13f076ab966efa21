#include "carpool/roadnet.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <tuple>

#include "carpool/random.hpp"

namespace carpool {

namespace {

constexpr std::string_view kGraphMagic = "carpool-graph";
constexpr int kGraphVersion = 1;

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

template <typename T>
T parse_token(std::string_view token, int line_no, std::string_view what) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " +
                     std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

double straight_line(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

InvalidNodeError::InvalidNodeError(NodeId id)
    : std::out_of_range("invalid node id " + std::to_string(id)), id_(id) {}

RoadNetwork::RoadNetwork(std::vector<Point> coords, std::vector<Edge> edges,
                         bool directed)
    : coords_(std::move(coords)), edges_(std::move(edges)), directed_(directed) {
  const auto n = coords_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(coords_[i].x) || !std::isfinite(coords_[i].y)) {
      throw ValidationError("node " + std::to_string(i) +
                            " has non-finite coordinates");
    }
  }
  for (auto& e : edges_) {
    if (e.u >= n || e.v >= n) {
      throw ValidationError("edge " + edge_name(e) + " references missing node " +
                            std::to_string(e.u >= n ? e.u : e.v));
    }
    if (e.u == e.v) {
      throw ValidationError("edge " + edge_name(e) + " is a self loop");
    }
    if (!std::isfinite(e.length) || e.length <= 0.0) {
      throw ValidationError("edge " + edge_name(e) +
                            " length must be positive and finite");
    }
    const double gap = straight_line(coords_[e.u], coords_[e.v]);
    if (gap > e.length) {
      throw ValidationError("edge " + edge_name(e) + " length " +
                            format_number(e.length) +
                            " is shorter than the straight-line gap " +
                            format_number(gap) + " (inadmissible)");
    }
    if (!directed_ && e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v) {
      throw ValidationError("duplicate edge " + edge_name(edges_[i]));
    }
  }

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    if (!directed_) ++degree[e.v];
  }
  offsets_.assign(n + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), offsets_.begin() + 1);
  arcs_.resize(offsets_.back());
  auto fill = offsets_;
  for (const auto& e : edges_) {
    arcs_[fill[e.u]++] = {e.v, e.length};
    if (!directed_) arcs_[fill[e.v]++] = {e.u, e.length};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
  }
}

void RoadNetwork::check(NodeId n) const {
  if (!valid(n)) throw InvalidNodeError(n);
}

Point RoadNetwork::coord(NodeId n) const {
  check(n);
  return coords_[n];
}

std::span<const Arc> RoadNetwork::neighbors(NodeId n) const {
  check(n);
  return std::span<const Arc>(arcs_).subspan(offsets_[n],
                                             offsets_[n + 1] - offsets_[n]);
}

bool RoadNetwork::same_coords(const RoadNetwork& other) const {
  return std::equal(coords_.begin(), coords_.end(), other.coords_.begin(),
                    other.coords_.end(), [](Point a, Point b) {
                      return a.x == b.x && a.y == b.y;
                    });
}

std::optional<double> edge_length(const RoadNetwork& net, NodeId u, NodeId v) {
  net.check(u);
  net.check(v);
  const auto arcs = net.neighbors(u);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), v,
                             [](const Arc& a, NodeId id) { return a.to < id; });
  if (it == arcs.end() || it->to != v) return std::nullopt;
  return it->length;
}

bool is_connected(const RoadNetwork& net, std::span<const NodeId> subset) {
  const auto n = net.node_count();
  if (subset.empty()) return true;
  for (NodeId s : subset) net.check(s);

  // Undirected adjacency view, needed for the weak check on directed graphs.
  std::vector<std::vector<NodeId>> reverse;
  if (net.directed()) {
    reverse.resize(n);
    for (const auto& e : net.edges()) reverse[e.v].push_back(e.u);
  }

  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{subset.front()};
  seen[subset.front()] = 1;
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    auto visit = [&](NodeId next) {
      if (!seen[next]) {
        seen[next] = 1;
        stack.push_back(next);
      }
    };
    for (const auto& arc : net.neighbors(cur)) visit(arc.to);
    if (net.directed())
      for (NodeId prev : reverse[cur]) visit(prev);
  }
  return std::all_of(subset.begin(), subset.end(),
                     [&](NodeId s) { return seen[s] != 0; });
}

bool is_connected(const RoadNetwork& net) {
  std::vector<NodeId> all(net.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  return is_connected(net, all);
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

RoadNetwork parse_network(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool directed = false;
  std::vector<std::optional<Point>> nodes;
  std::vector<Edge> edges;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    if (!have_header) {
      if (tokens.size() != 3 || tokens[0] != kGraphMagic) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected header 'carpool-graph 1 undirected|directed'");
      }
      if (parse_token<int>(tokens[1], line_no, "version") != kGraphVersion) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": unsupported graph version " + std::string(tokens[1]));
      }
      if (tokens[2] == "directed") {
        directed = true;
      } else if (tokens[2] != "undirected") {
        throw ParseError("line " + std::to_string(line_no) +
                         ": symmetry must be 'directed' or 'undirected'");
      }
      have_header = true;
      continue;
    }

    if (tokens[0] == "node") {
      if (tokens.size() != 4)
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'node <id> <x> <y>'");
      const auto id = parse_token<NodeId>(tokens[1], line_no, "node id");
      const auto x = parse_token<double>(tokens[2], line_no, "x coordinate");
      const auto y = parse_token<double>(tokens[3], line_no, "y coordinate");
      if (id >= nodes.size()) nodes.resize(std::size_t{id} + 1);
      if (nodes[id]) {
        throw ParseError("line " + std::to_string(line_no) + ": duplicate node " +
                         std::to_string(id));
      }
      nodes[id] = Point{x, y};
    } else if (tokens[0] == "edge") {
      if (tokens.size() != 4)
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'edge <u> <v> <length>'");
      edges.push_back({parse_token<NodeId>(tokens[1], line_no, "node id"),
                       parse_token<NodeId>(tokens[2], line_no, "node id"),
                       parse_token<double>(tokens[3], line_no, "length")});
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown record '" +
                       std::string(tokens[0]) + "'");
    }
  }
  if (!have_header) throw ParseError("missing 'carpool-graph' header");

  std::vector<Point> coords;
  coords.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i]) {
      throw ValidationError("node ids must be contiguous from 0; missing node " +
                            std::to_string(i));
    }
    coords.push_back(*nodes[i]);
  }
  return RoadNetwork(std::move(coords), std::move(edges), directed);
}

RoadNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path.string());
  return parse_network(in);
}

void write_network(std::ostream& out, const RoadNetwork& net) {
  out << kGraphMagic << ' ' << kGraphVersion << ' '
      << (net.directed() ? "directed" : "undirected") << '\n';
  out << "# " << net.node_count() << " nodes, " << net.edge_count()
      << " edges; coordinates and lengths in meters\n";
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    const auto& p = net.coords()[i];
    out << "node " << i << ' ' << format_number(p.x) << ' ' << format_number(p.y)
        << '\n';
  }
  for (const auto& e : net.edges()) {
    out << "edge " << e.u << ' ' << e.v << ' ' << format_number(e.length) << '\n';
  }
}

void save_network(const std::filesystem::path& path, const RoadNetwork& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file " + path.string());
  write_network(out, net);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RoadNetwork generate_grid(int rows, int cols, double spacing,
                          double perturbation, std::uint64_t seed) {
  if (rows < 1 || cols < 1 || static_cast<long>(rows) * cols < 2) {
    throw std::invalid_argument("grid needs rows, cols >= 1 and at least 2 nodes");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("grid spacing must be positive");
  }
  if (!(perturbation >= 0.0) || !(perturbation < spacing / 2.0)) {
    throw std::invalid_argument("perturbation must lie in [0, spacing/2)");
  }

  Rng rng(seed);
  std::vector<Point> coords;
  coords.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Point p{c * spacing, r * spacing};
      if (perturbation > 0.0) {
        p.x += rng.uniform(-perturbation, perturbation);
        p.y += rng.uniform(-perturbation, perturbation);
      }
      coords.push_back(p);
    }
  }

  std::vector<Edge> edges;
  auto id = [cols](int r, int c) { return static_cast<NodeId>(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        edges.push_back({id(r, c), id(r, c + 1),
                         straight_line(coords[id(r, c)], coords[id(r, c + 1)])});
      }
      if (r + 1 < rows) {
        edges.push_back({id(r, c), id(r + 1, c),
                         straight_line(coords[id(r, c)], coords[id(r + 1, c)])});
      }
    }
  }
  return RoadNetwork(std::move(coords), std::move(edges));
}

}  // namespace carpool

#include "carpool/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carpool/pathfind.hpp"

namespace carpool {

Problem::Problem(const RoadNetwork& net, RequestLog log, NodeId source,
                 NodeId destination, CostModel model)
    : net_(&net),
      log_(std::move(log)),
      source_(source),
      destination_(destination),
      model_(model) {
  net.check(source);
  net.check(destination);
  auto path = astar(net, source, destination);
  if (!path.found()) {
    throw InfeasibleError("destination " + std::to_string(destination) +
                          " is unreachable from " + std::to_string(source));
  }
  shortest_route_ = path.route();
  shortest_distance_ = path.cost;
}

double Problem::offset(NodeId n) const {
  const Point p = net_->coord(n);
  double best = std::numeric_limits<double>::infinity();
  for (NodeId v : shortest_route_.nodes)
    best = std::min(best, straight_line(p, net_->coord(v)));
  return best;
}

ObjectiveVector evaluate(const Problem& problem, const Route& route) {
  if (route.nodes.empty() || route.source() != problem.source() ||
      route.destination() != problem.destination()) {
    throw std::invalid_argument("route endpoints do not match the problem");
  }
  const auto& net = problem.net();
  const auto& model = problem.model();

  ObjectiveVector v;
  v.total_distance = route_length(net, route);
  // Same path summed the same way gives exactly zero; anything shorter than
  // the A* distance can only be rounding.
  v.detour = std::max(0.0, v.total_distance - problem.shortest_distance());

  const auto plan = assign_served(route, problem.log(), model.capacity);
  v.occupancy = plan.occupancy();
  for (const auto& s : plan.served) {
    v.pickup_drop_cost += model.fare_per_meter * (problem.offset(s.request.pickup) +
                                                  problem.offset(s.request.drop)) +
                          2.0 * model.stop_fee;
  }

  if (v.total_distance > 0.0) {
    std::size_t nearby = 0;
    for (const auto& r : problem.log().requests) {
      const Point p = net.coord(r.pickup);
      const bool close = std::any_of(route.nodes.begin(), route.nodes.end(), [&](NodeId n) {
        return straight_line(p, net.coord(n)) <= model.density_radius_m;
      });
      if (close) ++nearby;
    }
    v.density = static_cast<double>(nearby) / (v.total_distance / 1000.0);
  }
  return v;
}

ObjectiveVector evaluate(const RoadNetwork& net, const Route& route,
                         const RequestLog& log, double fare, double stop_fee) {
  if (route.nodes.empty()) throw std::invalid_argument("empty route");
  CostModel model;
  model.fare_per_meter = fare;
  model.stop_fee = stop_fee;
  Problem problem(net, log, route.source(), route.destination(), model);
  return evaluate(problem, route);
}

namespace {

enum class Cmp { better, tie, worse };

bool ties(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max(std::abs(a), std::abs(b));
}

Cmp minimize(double a, double b) {
  if (ties(a, b)) return Cmp::tie;
  return a < b ? Cmp::better : Cmp::worse;
}

Cmp maximize(double a, double b) {
  if (ties(a, b)) return Cmp::tie;
  return a > b ? Cmp::better : Cmp::worse;
}

// Pareto relation over one tier: -1 worse somewhere, +1 dominates, 0 all tied.
template <std::size_t N>
int tier(const Cmp (&cmps)[N]) {
  bool strict = false;
  for (Cmp c : cmps) {
    if (c == Cmp::worse) return -1;
    if (c == Cmp::better) strict = true;
  }
  return strict ? 1 : 0;
}

}  // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  const Cmp upper[] = {
      minimize(a.total_distance, b.total_distance),
      maximize(static_cast<double>(a.occupancy), static_cast<double>(b.occupancy)),
      minimize(a.pickup_drop_cost, b.pickup_drop_cost),
  };
  const int first = tier(upper);
  if (first != 0) return first > 0;
  // Exact tie on every primary objective: the lower tier decides.
  const Cmp lower[] = {minimize(a.detour, b.detour), maximize(a.density, b.density)};
  return tier(lower) > 0;
}

void sort_archive_order(std::vector<Evaluated>& members) {
  std::sort(members.begin(), members.end(), [](const Evaluated& a, const Evaluated& b) {
    if (a.objectives.total_distance != b.objectives.total_distance)
      return a.objectives.total_distance < b.objectives.total_distance;
    if (a.objectives.occupancy != b.objectives.occupancy)
      return a.objectives.occupancy > b.objectives.occupancy;
    return a.route < b.route;
  });
}

ParetoArchive pareto_filter(std::vector<Evaluated> population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const Evaluated& a, const Evaluated& b) { return a.route < b.route; });
  population.erase(std::unique(population.begin(), population.end(),
                               [](const Evaluated& a, const Evaluated& b) {
                                 return a.route == b.route;
                               }),
                   population.end());

  ParetoArchive archive;
  for (auto& candidate : population) {
    const bool beaten =
        std::any_of(archive.members.begin(), archive.members.end(), [&](const Evaluated& m) {
          return dominates(m.objectives, candidate.objectives);
        });
    if (beaten) continue;
    std::erase_if(archive.members, [&](const Evaluated& m) {
      return dominates(candidate.objectives, m.objectives);
    });
    archive.members.push_back(std::move(candidate));
  }
  sort_archive_order(archive.members);
  return archive;
}

}  // namespace carpool

#include "carpool/hybrid.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "carpool/pathfind.hpp"

namespace carpool {

namespace {

std::vector<NodeId> shortest_or_throw(const RoadNetwork& net, NodeId from, NodeId to) {
  auto path = astar(net, from, to);
  if (!path.found()) {
    throw InfeasibleError("no path from " + std::to_string(from) + " to " +
                          std::to_string(to));
  }
  return std::move(path.path);
}

}  // namespace

std::vector<NodeId> stop_sequence(const ServicePlan& plan) {
  struct Event {
    std::size_t position;
    NodeId node;
  };
  std::vector<Event> events;
  for (const auto& s : plan.served) {
    events.push_back({s.pickup_index, s.request.pickup});
    events.push_back({s.drop_index, s.request.drop});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.position < b.position; });

  std::vector<NodeId> stops{plan.source};
  for (const auto& e : events)
    if (stops.back() != e.node) stops.push_back(e.node);
  if (stops.back() != plan.destination || stops.size() == 1)
    stops.push_back(plan.destination);
  return stops;
}

Route suffix_refine(const RoadNetwork& net, const Route& route, std::size_t position) {
  if (position >= route.size()) throw std::out_of_range("refine position past route end");
  Route out{{route.nodes.begin(),
             route.nodes.begin() + static_cast<std::ptrdiff_t>(position) + 1}};
  const auto tail = shortest_or_throw(net, route.nodes[position], route.destination());
  out.nodes.insert(out.nodes.end(), tail.begin() + 1, tail.end());
  return out;
}

Route chain_refine(const RoadNetwork& net, const ServicePlan& plan) {
  const auto stops = stop_sequence(plan);
  Route out{{stops.front()}};
  for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
    if (stops[i] == stops[i + 1]) continue;
    const auto leg = shortest_or_throw(net, stops[i], stops[i + 1]);
    out.nodes.insert(out.nodes.end(), leg.begin() + 1, leg.end());
  }
  return out;
}

ParetoArchive refine_archive(const Problem& problem, const ParetoArchive& archive) {
  const auto& net = problem.net();
  std::vector<Evaluated> candidates = archive.members;
  for (const auto& elite : archive.members) {
    const auto plan = assign_served(elite.route, problem.log(), problem.model().capacity);

    std::vector<std::size_t> points;
    for (const auto& s : plan.served) {
      points.push_back(s.pickup_index);
      points.push_back(s.drop_index);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    for (std::size_t p : points) {
      Route r = suffix_refine(net, elite.route, p);
      auto obj = evaluate(problem, r);
      candidates.push_back({std::move(r), obj});
    }
    Route chained = chain_refine(net, plan);
    auto obj = evaluate(problem, chained);
    candidates.push_back({std::move(chained), obj});
  }
  return pareto_filter(std::move(candidates));
}

Refiner hybrid_refiner() {
  return [](const Problem& problem, const ParetoArchive& archive) {
    return refine_archive(problem, archive);
  };
}

}  // namespace carpool

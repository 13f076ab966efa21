#include "carpool/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "carpool/pathfind.hpp"

namespace carpool {

void GaConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (pool_size < 1) fail("pool size must be >= 1");
  if (generation_size < 1) fail("generation size must be >= 1");
  if (generation_size > pool_size) fail("generation size must not exceed pool size");
  if (elite_count + refill_count != generation_size)
    fail("elite count + refill count must equal generation size");
  if (elite_count < 1) fail("elite count must be >= 1");
  if (max_generations < 1) fail("max generations must be >= 1");
  if (tournament_size < 1) fail("tournament size must be >= 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover rate must be in [0,1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation rate must be in [0,1]");
}

namespace {

std::size_t default_walk_len(const RoadNetwork& net, NodeId from, NodeId to) {
  const auto path = astar(net, from, to);
  if (!path.found()) return 2;
  return 4 * std::max<std::size_t>(1, path.path.size() - 1);
}

void append_tail(Route& route, const std::vector<NodeId>& path) {
  route.nodes.insert(route.nodes.end(), path.begin() + 1, path.end());
}

}  // namespace

Route random_route(const RoadNetwork& net, NodeId source, NodeId destination,
                   Rng& rng, std::size_t max_len) {
  net.check(source);
  net.check(destination);
  Route route{{source}};
  NodeId prev = std::numeric_limits<NodeId>::max();
  NodeId cur = source;
  while (cur != destination) {
    const auto arcs = net.neighbors(cur);
    if (route.size() >= max_len || arcs.empty()) {
      auto tail = astar(net, cur, destination);
      if (!tail.found()) {
        // Only possible on directed networks; restart on the direct path.
        tail = astar(net, source, destination);
        if (!tail.found()) {
          throw InfeasibleError("destination " + std::to_string(destination) +
                                " is unreachable from " + std::to_string(source));
        }
        route.nodes.assign(1, source);
      }
      append_tail(route, tail.path);
      break;
    }
    std::size_t choices = arcs.size();
    bool skip_back = false;
    if (choices > 1) {
      skip_back = std::any_of(arcs.begin(), arcs.end(),
                              [&](const Arc& a) { return a.to == prev; });
      if (skip_back) --choices;
    }
    auto pick = static_cast<std::size_t>(rng.index(choices));
    std::size_t seen = 0;
    NodeId next = arcs.front().to;
    for (const Arc& a : arcs) {
      if (skip_back && a.to == prev) continue;
      if (seen++ == pick) {
        next = a.to;
        break;
      }
    }
    prev = cur;
    cur = next;
    route.nodes.push_back(cur);
  }
  return route;
}

std::size_t tournament_select_index(std::span<const Evaluated> pop,
                                    std::size_t size, Rng& rng) {
  if (pop.empty()) throw std::invalid_argument("tournament on empty population");
  size = std::max<std::size_t>(size, 1);
  std::vector<std::size_t> sample(size);
  for (auto& s : sample) s = static_cast<std::size_t>(rng.index(pop.size()));

  std::vector<std::size_t> winners;
  for (std::size_t s : sample) {
    const bool beaten = std::any_of(sample.begin(), sample.end(), [&](std::size_t o) {
      return dominates(pop[o].objectives, pop[s].objectives);
    });
    if (!beaten) winners.push_back(s);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t w : winners) best = std::min(best, pop[w].objectives.total_distance);
  std::erase_if(winners, [&](std::size_t w) { return pop[w].objectives.total_distance != best; });
  return winners[static_cast<std::size_t>(rng.index(winners.size()))];
}

Route tournament_select(std::span<const Evaluated> pop, std::size_t size, Rng& rng) {
  return pop[tournament_select_index(pop, size, rng)].route;
}

std::pair<Route, Route> crossover(const Route& a, const Route& b, Rng& rng) {
  if (a.nodes.empty() || b.nodes.empty() || a.source() != b.source() ||
      a.destination() != b.destination()) {
    throw std::invalid_argument("crossover parents must share endpoints");
  }
  if (a == b || a.size() < 3 || b.size() < 3) return {a, b};

  auto interior = [](const Route& r) {
    std::vector<NodeId> v(r.nodes.begin() + 1, r.nodes.end() - 1);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto ia = interior(a);
  const auto ib = interior(b);
  std::vector<NodeId> common;
  std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(),
                        std::back_inserter(common));
  if (common.empty()) return {a, b};

  const NodeId cut = common[static_cast<std::size_t>(rng.index(common.size()))];
  const auto i = std::find(a.nodes.begin() + 1, a.nodes.end(), cut);
  const auto j = std::find(b.nodes.begin() + 1, b.nodes.end(), cut);

  Route c1{{a.nodes.begin(), i + 1}};
  c1.nodes.insert(c1.nodes.end(), j + 1, b.nodes.end());
  Route c2{{b.nodes.begin(), j + 1}};
  c2.nodes.insert(c2.nodes.end(), i + 1, a.nodes.end());
  return {std::move(c1), std::move(c2)};
}

Route mutate(const Route& route, const RoadNetwork& net, double rate, Rng& rng,
             std::size_t max_len) {
  if (!rng.chance(rate) || route.size() < 2) return route;
  const std::size_t i =
      route.size() >= 3 ? 1 + static_cast<std::size_t>(rng.index(route.size() - 2)) : 0;
  const NodeId from = route.nodes[i];
  const NodeId to = route.destination();
  if (max_len == 0) max_len = default_walk_len(net, from, to);
  const Route tail = random_route(net, from, to, rng, max_len);
  Route out{{route.nodes.begin(), route.nodes.begin() + static_cast<std::ptrdiff_t>(i)}};
  out.nodes.insert(out.nodes.end(), tail.nodes.begin(), tail.nodes.end());
  return out;
}

ParetoArchive cap_archive(ParetoArchive archive, std::size_t n) {
  auto& m = archive.members;
  if (m.size() <= n) return archive;
  sort_archive_order(m);
  if (n == 0) {
    m.clear();
    return archive;
  }
  std::vector<bool> chosen(m.size(), false);
  std::vector<double> gap(m.size(), std::numeric_limits<double>::infinity());
  auto take = [&](std::size_t k) {
    chosen[k] = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
      gap[i] = std::min(gap[i], std::abs(m[i].objectives.total_distance -
                                         m[k].objectives.total_distance));
    }
  };
  take(0);
  if (n >= 2) take(m.size() - 1);
  for (std::size_t count = std::min<std::size_t>(n, 2); count < n; ++count) {
    std::size_t best = m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!chosen[i] && (best == m.size() || gap[i] > gap[best])) best = i;
    }
    take(best);
  }
  std::vector<Evaluated> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (chosen[i]) kept.push_back(std::move(m[i]));
  m = std::move(kept);
  return archive;
}

namespace {

// Draws `count` distinct pool positions.
std::vector<std::size_t> sample_pool(std::size_t pool, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  count = std::min(count, pool);
  for (std::size_t i = 0; i < count; ++i) {
    auto j = i + static_cast<std::size_t>(rng.index(pool - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

void check_routes(const Problem& problem, std::span<const Evaluated> pop,
                  GaTrace* trace) {
#ifdef NDEBUG
  if (!trace) return;
#endif
  for (const auto& e : pop) {
    const bool ok = is_valid_route(problem.net(), e.route, problem.source(),
                                   problem.destination());
    if (trace) {
      ++trace->routes_checked;
      if (!ok) ++trace->invalid_routes;
    }
#ifndef NDEBUG
    if (!ok) throw std::logic_error("GA produced an invalid route: " + format_route(e.route));
#endif
  }
}

}  // namespace

ParetoArchive run_ga(const Problem& problem, const GaConfig& cfg,
                     const Refiner& refiner, RefineMode mode, GaTrace* trace) {
  cfg.validate();
  const auto& net = problem.net();
  const NodeId src = problem.source();
  const NodeId dst = problem.destination();
  const std::size_t max_len =
      cfg.max_route_len ? cfg.max_route_len
                        : 4 * std::max<std::size_t>(1, problem.shortest_route().size() - 1);

  auto evaluated = [&](Route r) {
    auto obj = evaluate(problem, r);
    return Evaluated{std::move(r), obj};
  };

  std::vector<Evaluated> pool;
  pool.reserve(cfg.pool_size);
  for (std::size_t i = 0; i < cfg.pool_size; ++i) {
    Rng rng = Rng::stream(cfg.seed, 0, i);
    pool.push_back(evaluated(random_route(net, src, dst, rng, max_len)));
  }
  if (pool.empty()) throw InfeasibleError("empty route pool");

  Rng setup = Rng::stream(cfg.seed, 1);
  std::vector<Evaluated> population;
  for (std::size_t i : sample_pool(pool.size(), cfg.generation_size, setup))
    population.push_back(pool[i]);
  check_routes(problem, population, trace);

  ParetoArchive archive = cap_archive(pareto_filter(population), cfg.elite_count);

  for (int gen = 1; gen <= cfg.max_generations; ++gen) {
    const auto g = static_cast<std::uint64_t>(gen);
    Rng select_rng = Rng::stream(cfg.seed, 2, g);

    std::vector<Evaluated> offspring;
    offspring.reserve(cfg.generation_size + 1);
    for (std::size_t pair = 0; offspring.size() < cfg.generation_size; ++pair) {
      Route a = tournament_select(population, cfg.tournament_size, select_rng);
      Route b = tournament_select(population, cfg.tournament_size, select_rng);
      Rng op_rng = Rng::stream(cfg.seed, 3 + g, pair);
      if (op_rng.chance(cfg.crossover_rate)) std::tie(a, b) = crossover(a, b, op_rng);
      offspring.push_back(evaluated(mutate(a, net, cfg.mutation_rate, op_rng, max_len)));
      if (offspring.size() < cfg.generation_size)
        offspring.push_back(evaluated(mutate(b, net, cfg.mutation_rate, op_rng, max_len)));
    }
    check_routes(problem, offspring, trace);

    std::vector<Evaluated> combined = archive.members;
    combined.insert(combined.end(), population.begin(), population.end());
    combined.insert(combined.end(), offspring.begin(), offspring.end());
    archive = cap_archive(pareto_filter(std::move(combined)), cfg.elite_count);

    if (refiner && mode == RefineMode::per_generation) {
      archive = cap_archive(refiner(problem, archive), cfg.elite_count);
      check_routes(problem, archive.members, trace);
    }
    if (trace) trace->best_distance.push_back(archive.members.front().objectives.total_distance);

    // Elites plus random pool routes make up the next generation.
    population = archive.members;
    Rng refill_rng = Rng::stream(cfg.seed, 3, g);
    for (std::size_t i :
         sample_pool(pool.size(), cfg.generation_size - population.size(), refill_rng))
      population.push_back(pool[i]);
  }

  if (refiner && mode == RefineMode::final_only) {
    archive = cap_archive(refiner(problem, archive), cfg.elite_count);
    check_routes(problem, archive.members, trace);
  }
  return archive;
}

}  // namespace carpool

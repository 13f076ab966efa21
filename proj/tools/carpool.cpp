// carpool: command line front end for the carpool route optimizer.
//
//   carpool gen-grid     --rows R --cols C --spacing S --perturb P --seed N --out F
//   carpool gen-requests --network F --count N --seed S --out F
//   carpool path         --network F --src A --dst B
//   carpool optimize     [experiment options] [--refine per-gen|final|off]
//   carpool compare      [experiment options] [--out F]
//   carpool batch        [experiment options] --executions N --out DIR
//   carpool stats        --in results.csv
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 infeasible instance.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "carpool/demand.hpp"
#include "carpool/evolve.hpp"
#include "carpool/experiment.hpp"
#include "carpool/hybrid.hpp"
#include "carpool/pathfind.hpp"
#include "carpool/roadnet.hpp"

namespace {

using namespace carpool;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInfeasible = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by optimize/compare/batch. Anything left unset keeps the
// value from --config (or the built-in default).
struct ExperimentFlags {
  std::optional<std::string> config;
  std::optional<std::string> network;
  std::optional<std::string> requests;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> request_seed;
  std::optional<NodeId> src;
  std::optional<NodeId> dst;
  std::optional<double> t_km;
  std::optional<std::uint64_t> seed;
  std::optional<int> gens;
  std::optional<std::size_t> pool;
  std::optional<std::size_t> generation;
  std::optional<std::size_t> elites;
  std::optional<std::size_t> tournament;
  std::optional<double> crossover;
  std::optional<double> mutation;
  std::optional<std::size_t> max_route_len;
  std::optional<int> capacity;
  std::optional<double> fare;
  std::optional<double> stop_fee;
  std::optional<std::string> refine;
  std::optional<std::size_t> executions;
  std::optional<std::uint64_t> seed_stride;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value experiment config file");
    app->add_option("--network", network, "graph file");
    app->add_option("--requests", requests, "request file (otherwise generated)");
    app->add_option("--count", count, "number of generated requests");
    app->add_option("--request-seed", request_seed, "seed for generated requests");
    app->add_option("--src", src, "route source node");
    app->add_option("--dst", dst, "route destination node");
    app->add_option("--t-km", t_km, "pickup radius around the source, km");
    app->add_option("--seed", seed, "GA seed");
    app->add_option("--gens", gens, "generations");
    app->add_option("--pop", pool, "route pool size");
    app->add_option("--generation-size", generation, "routes per generation");
    app->add_option("--elites", elites, "Pareto elites carried forward");
    app->add_option("--tournament", tournament, "tournament size");
    app->add_option("--crossover-rate", crossover, "crossover probability");
    app->add_option("--mutation-rate", mutation, "mutation probability");
    app->add_option("--max-route-len", max_route_len, "random walk length cap");
    app->add_option("--capacity", capacity, "seat limit (default unlimited)");
    app->add_option("--fare", fare, "cost per meter of pickup/drop offset");
    app->add_option("--stop-fee", stop_fee, "cost per stop");
    app->add_option("--refine", refine, "refinement: per-gen or final");
  }

  void attach_batch(CLI::App* app) {
    app->add_option("--executions", executions, "number of executions");
    app->add_option("--seed-stride", seed_stride, "seed increment per execution");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (config) load_config(cfg, *config);
    if (network) cfg.network = *network;
    if (requests) cfg.requests = *requests;
    if (count) cfg.request_count = *count;
    if (request_seed) cfg.request_seed = *request_seed;
    if (src) cfg.source = *src;
    if (dst) cfg.destination = *dst;
    if (t_km) cfg.t_km = *t_km;
    if (seed) cfg.ga.seed = *seed;
    if (gens) cfg.ga.max_generations = *gens;
    if (pool) cfg.ga.pool_size = *pool;
    if (generation) cfg.ga.generation_size = *generation;
    if (elites) cfg.ga.elite_count = *elites;
    if (generation || elites) {
      if (cfg.ga.elite_count > cfg.ga.generation_size)
        throw UsageError("--elites must not exceed the generation size");
      cfg.ga.refill_count = cfg.ga.generation_size - cfg.ga.elite_count;
    }
    if (tournament) cfg.ga.tournament_size = *tournament;
    if (crossover) cfg.ga.crossover_rate = *crossover;
    if (mutation) cfg.ga.mutation_rate = *mutation;
    if (max_route_len) cfg.ga.max_route_len = *max_route_len;
    if (capacity) cfg.model.capacity = *capacity;
    if (fare) cfg.model.fare_per_meter = *fare;
    if (stop_fee) cfg.model.stop_fee = *stop_fee;
    if (refine) {
      if (*refine == "per-gen") cfg.refine = RefineMode::per_generation;
      else if (*refine == "final") cfg.refine = RefineMode::final_only;
      else if (*refine != "off") throw UsageError("--refine must be per-gen, final or off");
    }
    if (executions) cfg.executions = *executions;
    if (seed_stride) cfg.seed_stride = *seed_stride;
    if (cfg.network.empty()) throw UsageError("a network is required (--network or config)");
    cfg.validate();
    return cfg;
  }
};

void print_archive(std::ostream& out, const ParetoArchive& archive) {
  out << "route,total_distance,occupancy,pickup_drop_cost,detour,density\n";
  for (const auto& m : archive.members) {
    const auto& o = m.objectives;
    out << format_route(m.route) << ',' << format_number(o.total_distance) << ','
        << o.occupancy << ',' << format_number(o.pickup_drop_cost) << ','
        << format_number(o.detour) << ',' << format_number(o.density) << '\n';
  }
}

std::ostream& open_or_stdout(const std::optional<std::string>& path, std::ofstream& file) {
  if (!path) return std::cout;
  file.open(*path);
  if (!file) throw std::runtime_error("cannot write " + *path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective carpool route optimizer (GA with A* refinement)"};
  app.require_subcommand(1);

  // gen-grid
  int rows = 4, cols = 29;
  double spacing = 400.0, perturb = 50.0;
  std::uint64_t grid_seed = 1;
  std::string grid_out;
  auto* gen_grid = app.add_subcommand("gen-grid", "write a synthetic grid network");
  gen_grid->add_option("--rows", rows, "grid rows")->capture_default_str();
  gen_grid->add_option("--cols", cols, "grid columns")->capture_default_str();
  gen_grid->add_option("--spacing", spacing, "node spacing, meters")->capture_default_str();
  gen_grid->add_option("--perturb", perturb, "coordinate jitter, meters")->capture_default_str();
  gen_grid->add_option("--seed", grid_seed, "jitter seed")->capture_default_str();
  gen_grid->add_option("--out", grid_out, "output graph file")->required();

  // gen-requests
  std::string req_network, req_out;
  std::size_t req_count = 12;
  std::uint64_t req_seed = 1;
  auto* gen_requests = app.add_subcommand("gen-requests", "write a random request log");
  gen_requests->add_option("--network", req_network, "graph file")->required();
  gen_requests->add_option("--count", req_count, "number of requests")->capture_default_str();
  gen_requests->add_option("--seed", req_seed, "seed")->capture_default_str();
  gen_requests->add_option("--out", req_out, "output request file")->required();

  // path
  std::string path_network;
  NodeId path_src = 0, path_dst = 0;
  bool path_dijkstra = false;
  auto* path_cmd = app.add_subcommand("path", "shortest path between two nodes");
  path_cmd->add_option("--network", path_network, "graph file")->required();
  path_cmd->add_option("--src", path_src, "source node")->required();
  path_cmd->add_option("--dst", path_dst, "destination node")->required();
  path_cmd->add_flag("--dijkstra", path_dijkstra, "use the uninformed search");

  ExperimentFlags opt_flags, cmp_flags, batch_flags;
  std::optional<std::string> cmp_out;
  std::optional<std::string> batch_out;

  auto* optimize = app.add_subcommand("optimize", "run the GA and print the Pareto routes");
  opt_flags.attach(optimize);
  auto* compare = app.add_subcommand("compare", "GA vs GA-A* on one instance");
  cmp_flags.attach(compare);
  compare->add_option("--out", cmp_out, "reports CSV (default stdout)");
  auto* batch = app.add_subcommand("batch", "repeated GA vs GA-A* executions");
  batch_flags.attach(batch);
  batch_flags.attach_batch(batch);
  batch->add_option("--out", batch_out, "output directory");

  std::string stats_in;
  auto* stats_cmd = app.add_subcommand("stats", "summaries, t-test and boxplot data");
  stats_cmd->add_option("--in", stats_in, "reports or batch CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_grid) {
      save_network(grid_out, generate_grid(rows, cols, spacing, perturb, grid_seed));
    } else if (*gen_requests) {
      const auto net = load_network(req_network);
      save_requests(req_out, generate_requests(net, req_count, req_seed));
    } else if (*path_cmd) {
      const auto net = load_network(path_network);
      const auto r = path_dijkstra ? dijkstra(net, path_src, path_dst)
                                   : astar(net, path_src, path_dst);
      if (!r.found()) {
        std::cerr << "no path from " << path_src << " to " << path_dst << '\n';
        return kInfeasible;
      }
      std::cout << "path: " << format_route(r.route()) << '\n'
                << "cost: " << format_number(r.cost) << '\n'
                << "expanded: " << r.expanded << '\n';
    } else if (*optimize) {
      const auto cfg = opt_flags.resolve();
      const auto net = load_network(cfg.network);
      RequestLog log = cfg.requests ? load_requests(*cfg.requests)
                                    : generate_requests(net, cfg.request_count, cfg.request_seed);
      validate_log(net, log);
      Problem problem(net, radius_filter(net, log, cfg.source, cfg.t_km), cfg.source,
                      cfg.destination, cfg.model);
      ParetoArchive archive;
      if (problem.log().empty()) {
        archive.members = {{problem.shortest_route(),
                            evaluate(problem, problem.shortest_route())}};
      } else {
        const bool off = opt_flags.refine && *opt_flags.refine == "off";
        archive = off ? run_ga(problem, cfg.ga)
                      : run_ga(problem, cfg.ga, hybrid_refiner(), cfg.refine);
      }
      print_archive(std::cout, archive);
    } else if (*compare) {
      const auto cfg = cmp_flags.resolve();
      const auto net = load_network(cfg.network);
      const auto run = run_once(net, cfg, 0);
      std::ofstream file;
      write_reports_csv(open_or_stdout(cmp_out, file), {run});
      std::cerr << "timing: ga " << run.timings.ga_seconds << " s, ga-a* "
                << run.timings.hybrid_seconds << " s\n";
    } else if (*batch) {
      auto cfg = batch_flags.resolve();
      if (batch_out) cfg.output_dir = *batch_out;
      if (cfg.output_dir.empty()) throw UsageError("batch needs --out or output_dir");
      const auto net = load_network(cfg.network);
      const auto start = std::chrono::steady_clock::now();
      const auto result = run_batch(net, cfg);
      write_batch_outputs(cfg.output_dir, result);
      for (const auto& run : result.executions) {
        std::cerr << "exec " << run.exec << ": ga " << run.timings.ga_seconds
                  << " s, ga-a* " << run.timings.hybrid_seconds << " s\n";
      }
      std::cerr << "batch wall time "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
                << " s\n";
    } else if (*stats_cmd) {
      std::ifstream in(stats_in);
      if (!in) throw std::runtime_error("cannot open " + stats_in);
      write_stats_report(std::cout, read_csv(in));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}

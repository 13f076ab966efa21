#include "carpool/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "carpool/hybrid.hpp"
#include "carpool/pathfind.hpp"

namespace carpool {

void ExperimentConfig::validate() const {
  ga.validate();
  if (executions < 1) throw std::invalid_argument("executions must be >= 1");
  if (!(t_km >= 0.0)) throw std::invalid_argument("radius t_km must be >= 0");
  if (model.capacity && *model.capacity < 1)
    throw std::invalid_argument("capacity must be >= 1");
  if (!(model.fare_per_meter >= 0.0) || !(model.stop_fee >= 0.0))
    throw std::invalid_argument("fare and stop fee must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T to_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof())
    throw std::invalid_argument("config key '" + key + "': bad value '" + value + "'");
  return out;
}

}  // namespace

void apply_config(ExperimentConfig& cfg, std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto& ga = cfg.ga;
    if (key == "network") cfg.network = value;
    else if (key == "requests") cfg.requests = value;
    else if (key == "request_count") cfg.request_count = to_number<std::size_t>(key, value);
    else if (key == "request_seed") cfg.request_seed = to_number<std::uint64_t>(key, value);
    else if (key == "source") cfg.source = to_number<NodeId>(key, value);
    else if (key == "destination") cfg.destination = to_number<NodeId>(key, value);
    else if (key == "t_km") cfg.t_km = to_number<double>(key, value);
    else if (key == "pool_size") ga.pool_size = to_number<std::size_t>(key, value);
    else if (key == "generation_size") ga.generation_size = to_number<std::size_t>(key, value);
    else if (key == "elite_count") ga.elite_count = to_number<std::size_t>(key, value);
    else if (key == "refill_count") ga.refill_count = to_number<std::size_t>(key, value);
    else if (key == "max_generations") ga.max_generations = to_number<int>(key, value);
    else if (key == "tournament_size") ga.tournament_size = to_number<std::size_t>(key, value);
    else if (key == "crossover_rate") ga.crossover_rate = to_number<double>(key, value);
    else if (key == "mutation_rate") ga.mutation_rate = to_number<double>(key, value);
    else if (key == "seed") ga.seed = to_number<std::uint64_t>(key, value);
    else if (key == "max_route_len") ga.max_route_len = to_number<std::size_t>(key, value);
    else if (key == "fare") cfg.model.fare_per_meter = to_number<double>(key, value);
    else if (key == "stop_fee") cfg.model.stop_fee = to_number<double>(key, value);
    else if (key == "capacity") {
      if (value == "none") cfg.model.capacity.reset();
      else cfg.model.capacity = to_number<int>(key, value);
    } else if (key == "refine") {
      if (value == "per-gen") cfg.refine = RefineMode::per_generation;
      else if (value == "final") cfg.refine = RefineMode::final_only;
      else throw std::invalid_argument("refine must be 'per-gen' or 'final'");
    } else if (key == "executions") cfg.executions = to_number<std::size_t>(key, value);
    else if (key == "seed_stride") cfg.seed_stride = to_number<std::uint64_t>(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void load_config(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  apply_config(cfg, in);
}

std::size_t RunReport::occupancy() const {
  if (ga) return ga->objectives.occupancy;
  return hybrid ? hybrid->objectives.occupancy : 0;
}

std::optional<double> RunReport::improvement() const {
  if (!ga || !hybrid) return std::nullopt;
  return stats::pct_improvement(ga->objectives.total_distance,
                                hybrid->objectives.total_distance);
}

std::vector<RunReport> pair_reports(std::size_t exec, const ParetoArchive& ga,
                                    const ParetoArchive& hybrid) {
  auto ranked = [](std::vector<Evaluated> m) {
    std::sort(m.begin(), m.end(), [](const Evaluated& a, const Evaluated& b) {
      if (a.objectives.occupancy != b.objectives.occupancy)
        return a.objectives.occupancy < b.objectives.occupancy;
      if (a.objectives.total_distance != b.objectives.total_distance)
        return a.objectives.total_distance < b.objectives.total_distance;
      return a.route < b.route;
    });
    return m;
  };
  const auto g = ranked(ga.members);
  const auto h = ranked(hybrid.members);
  std::vector<RunReport> out;
  for (std::size_t i = 0; i < std::max(g.size(), h.size()); ++i) {
    RunReport r;
    r.exec = exec;
    r.rank = i + 1;
    if (i < g.size()) r.ga = g[i];
    if (i < h.size()) r.hybrid = h[i];
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

double mean_distance(const ParetoArchive& a) {
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (const auto& m : a.members) s += m.objectives.total_distance;
  return s / static_cast<double>(a.size());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ExecutionResult run_once(const RoadNetwork& net, const ExperimentConfig& cfg,
                         std::size_t exec) {
  cfg.validate();
  const std::uint64_t offset = exec * cfg.seed_stride;

  RequestLog log = cfg.requests
                       ? load_requests(*cfg.requests)
                       : generate_requests(net, cfg.request_count, cfg.request_seed + offset);
  validate_log(net, log);

  ExecutionResult result;
  result.exec = exec;
  result.demand = radius_filter(net, log, cfg.source, cfg.t_km);

  std::vector<NodeId> referenced{cfg.source, cfg.destination};
  for (const auto& r : result.demand.requests) {
    referenced.push_back(r.pickup);
    referenced.push_back(r.drop);
  }
  if (!is_connected(net, referenced))
    throw InfeasibleError("source, destination and demand are not connected");

  Problem problem(net, result.demand, cfg.source, cfg.destination, cfg.model);

  if (result.demand.empty()) {
    // Nothing to serve: both variants drive the shortest route.
    Evaluated shortest{problem.shortest_route(), evaluate(problem, problem.shortest_route())};
    result.ga.members = {shortest};
    result.hybrid.members = {shortest};
  } else {
    GaConfig ga = cfg.ga;
    ga.seed += offset;
    auto t0 = std::chrono::steady_clock::now();
    result.ga = run_ga(problem, ga);
    result.timings.ga_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    result.hybrid = run_ga(problem, ga, hybrid_refiner(), cfg.refine);
    result.timings.hybrid_seconds = seconds_since(t0);
  }
  result.reports = pair_reports(exec, result.ga, result.hybrid);
  result.avg_ga = mean_distance(result.ga);
  result.avg_hybrid = mean_distance(result.hybrid);
  return result;
}

std::size_t thread_budget() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CARPOOL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) threads = static_cast<std::size_t>(v);
  }
  return threads;
}

BatchResult run_batch(const RoadNetwork& net, const ExperimentConfig& cfg) {
  cfg.validate();
  BatchResult batch;
  batch.executions.resize(cfg.executions);
  std::vector<std::exception_ptr> errors(cfg.executions);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t e = next++; e < cfg.executions; e = next++) {
      try {
        batch.executions[e] = run_once(net, cfg, e);
      } catch (...) {
        errors[e] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(thread_budget(), cfg.executions);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  std::vector<double> ga, hy;
  for (const auto& run : batch.executions) {
    ga.push_back(run.avg_ga);
    hy.push_back(run.avg_hybrid);
  }
  batch.box_ga = stats::boxplot_summary(ga);
  batch.box_hybrid = stats::boxplot_summary(hy);
  if (ga.size() >= 2) {
    const auto a = stats::summarize(ga);
    const auto b = stats::summarize(hy);
    if (a.se_mean > 0.0 || b.se_mean > 0.0) batch.ttest = stats::welch_t_one_sided(a, b);
  }
  return batch;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<ExecutionResult>& runs) {
  out << kReportColumns << '\n';
  for (const auto& run : runs) {
    for (const auto& r : run.reports) {
      out << r.exec << ',' << r.rank << ',';
      out << (r.ga ? format_route(r.ga->route) : "") << ',';
      out << (r.hybrid ? format_route(r.hybrid->route) : "") << ',';
      out << r.occupancy() << ',';
      out << (r.ga ? format_number(r.ga->objectives.total_distance) : "") << ',';
      out << (r.hybrid ? format_number(r.hybrid->objectives.total_distance) : "") << ',';
      out << (r.ga ? format_number(r.ga->objectives.detour) : "") << ',';
      out << (r.hybrid ? format_number(r.hybrid->objectives.detour) : "") << ',';
      const auto imp = r.improvement();
      out << (imp ? fixed2(*imp) : "") << '\n';
    }
  }
}

void write_batch_csv(std::ostream& out, const std::vector<ExecutionResult>& runs) {
  out << kBatchColumns << '\n';
  for (const auto& run : runs) {
    out << run.exec << ',' << run.ga.size() << ',' << run.hybrid.size() << ','
        << format_number(run.avg_ga) << ',' << format_number(run.avg_hybrid) << ','
        << (run.avg_ga > 0.0 ? fixed2(stats::pct_improvement(run.avg_ga, run.avg_hybrid))
                             : "")
        << '\n';
  }
}

void write_batch_outputs(const std::filesystem::path& dir, const BatchResult& batch) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("reports.csv");
    write_reports_csv(f, batch.executions);
  }
  std::stringstream batch_csv;
  write_batch_csv(batch_csv, batch.executions);
  {
    auto f = open("batch.csv");
    f << batch_csv.str();
  }
  {
    auto f = open("summary.csv");
    write_stats_report(f, read_csv(batch_csv));
  }
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const auto col = column(name);
  if (!col) throw std::invalid_argument("missing CSV column '" + name + "'");
  std::vector<double> out;
  for (const auto& row : rows) {
    if (*col >= row.size() || row[*col].empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(row[*col].c_str(), &end);
    if (*end != '\0')
      throw std::invalid_argument("column '" + name + "': not a number '" + row[*col] + "'");
    out.push_back(v);
  }
  return out;
}

CsvTable read_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    auto row = split(line);
    if (row.size() != t.header.size())
      throw std::invalid_argument("CSV row has " + std::to_string(row.size()) +
                                  " cells, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw std::invalid_argument("empty CSV input");
  return t;
}

void write_stats_report(std::ostream& out, const CsvTable& table) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (table.column("total_ga") && table.column("total_hybrid")) {
    pairs = {{"total_ga", "total_hybrid"}, {"detour_ga", "detour_hybrid"}};
  } else if (table.column("avg_ga") && table.column("avg_hybrid")) {
    pairs = {{"avg_ga", "avg_hybrid"}};
  } else {
    throw std::invalid_argument("CSV has neither report nor batch columns");
  }

  out << "# summary\nseries,n,mean,stdev,se_mean\n";
  for (const auto& [a, b] : pairs) {
    for (const auto& name : {a, b}) {
      const auto xs = table.numbers(name);
      out << name << ',' << xs.size();
      if (xs.size() >= 2) {
        const auto s = stats::summarize(xs);
        out << ',' << format_number(s.mean) << ',' << format_number(s.stdev) << ','
            << format_number(s.se_mean);
      } else {
        out << ",,,";
      }
      out << '\n';
    }
  }

  out << "# ttest\ncomparison,t,df,p_one_sided\n";
  for (const auto& [a, b] : pairs) {
    const auto xa = table.numbers(a);
    const auto xb = table.numbers(b);
    out << a << '>' << b;
    if (xa.size() >= 2 && xb.size() >= 2) {
      const auto sa = stats::summarize(xa);
      const auto sb = stats::summarize(xb);
      if (sa.se_mean > 0.0 || sb.se_mean > 0.0) {
        const auto r = stats::welch_t_one_sided(sa, sb);
        out << ',' << format_number(r.t) << ',' << format_number(r.df) << ','
            << format_number(r.p_one_sided) << '\n';
        continue;
      }
    }
    out << ",,,\n";
  }

  out << "# boxplot\nseries,min,q1,median,q3,max\n";
  for (const auto& [a, b] : pairs) {
    for (const auto& name : {a, b}) {
      const auto xs = table.numbers(name);
      out << name;
      if (xs.empty()) {
        out << ",,,,,\n";
        continue;
      }
      const auto f = stats::boxplot_summary(xs);
      out << ',' << format_number(f.min) << ',' << format_number(f.q1) << ','
          << format_number(f.median) << ',' << format_number(f.q3) << ','
          << format_number(f.max) << '\n';
    }
  }
}

}  // namespace carpool

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carpool/demand.hpp"
#include "carpool/evolve.hpp"
#include "carpool/objectives.hpp"
#include "carpool/roadnet.hpp"
#include "carpool/stats.hpp"

namespace carpool {

struct ExperimentConfig {
  std::filesystem::path network;
  /// Request file; when empty, request_count requests are generated.
  std::optional<std::filesystem::path> requests;
  std::size_t request_count = 12;
  std::uint64_t request_seed = 1;
  NodeId source = 0;
  NodeId destination = 0;
  double t_km = 3.0;
  GaConfig ga;
  CostModel model;
  RefineMode refine = RefineMode::per_generation;
  std::size_t executions = 1;
  /// Execution e runs with ga.seed + e * seed_stride and, for generated
  /// demand, request_seed + e * seed_stride.
  std::uint64_t seed_stride = 1;
  std::filesystem::path output_dir;

  void validate() const;
};

/// Applies `key = value` lines onto cfg. Unknown keys are an error.
void apply_config(ExperimentConfig& cfg, std::istream& in);
void load_config(ExperimentConfig& cfg, const std::filesystem::path& path);

/// One GA vs GA-A* comparison row. Either side may be missing when the two archives
/// differ in size.
struct RunReport {
  std::size_t exec = 0;
  std::size_t rank = 0;
  std::optional<Evaluated> ga;
  std::optional<Evaluated> hybrid;

  std::size_t occupancy() const;
  std::optional<double> improvement() const;
};

struct PhaseTimings {
  double ga_seconds = 0.0;
  double hybrid_seconds = 0.0;
};

struct ExecutionResult {
  std::size_t exec = 0;
  RequestLog demand;  // after the radius filter
  ParetoArchive ga;
  ParetoArchive hybrid;
  std::vector<RunReport> reports;
  double avg_ga = 0.0;      // mean total distance over the GA archive
  double avg_hybrid = 0.0;  // same for GA-A*
  PhaseTimings timings;
};

/// Sorts both archives by occupancy, then total distance, and pairs them by
/// rank.
std::vector<RunReport> pair_reports(std::size_t exec, const ParetoArchive& ga,
                                    const ParetoArchive& hybrid);

/// One execution: filter demand around the source, run the plain GA and
/// the GA with A* refinement from the same seed, and pair their archives.
/// With no demand left both sides are the shortest route.
ExecutionResult run_once(const RoadNetwork& net, const ExperimentConfig& cfg,
                         std::size_t exec = 0);

struct BatchResult {
  std::vector<ExecutionResult> executions;
  std::optional<stats::TTestResult> ttest;  // avg GA vs avg GA-A*, needs >= 2 runs
  stats::FiveNumber box_ga;
  stats::FiveNumber box_hybrid;
};

/// Runs cfg.executions executions, concurrently up to CARPOOL_THREADS
/// (default: hardware threads). Results are ordered by execution index.
BatchResult run_batch(const RoadNetwork& net, const ExperimentConfig& cfg);

std::size_t thread_budget();

// CSV output.
inline constexpr const char* kReportColumns =
    "exec,rank,ga_route,hybrid_route,occupancy,total_ga,total_hybrid,"
    "detour_ga,detour_hybrid,improvement_pct";
inline constexpr const char* kBatchColumns =
    "exec,elites_ga,elites_hybrid,avg_ga,avg_hybrid,improvement_pct";

void write_reports_csv(std::ostream& out, const std::vector<ExecutionResult>& runs);
void write_batch_csv(std::ostream& out, const std::vector<ExecutionResult>& runs);

/// Writes reports.csv, batch.csv and summary.csv into dir.
void write_batch_outputs(const std::filesystem::path& dir, const BatchResult& batch);

/// Minimal CSV table: a header row and string cells, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const;
  /// Non-blank cells of a column as numbers.
  std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

/// Summary, one-sided Welch test and boxplot blocks for a reports or batch
/// CSV. Throws std::invalid_argument if the table has neither schema.
void write_stats_report(std::ostream& out, const CsvTable& table);

}  // namespace carpool

// Scenario runner: builds systems and signals per run, runs every configured
// algorithm over identical data, averages runs and writes CSV reports.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsprop/cost_model.hpp"
#include "bsprop/execution.hpp"
#include "bsprop/metrics.hpp"
#include "bsprop/scenario.hpp"
#include "bsprop/signals.hpp"

namespace bsprop {

// Per-run generator seeds, derived from (base_seed, run, stream, segment).
struct RunSeeds {
  std::uint64_t input = 0;
  std::vector<std::uint64_t> system;  // one per schedule segment
  std::vector<std::uint64_t> noise;   // one per schedule segment
};

RunSeeds derive_run_seeds(const Scenario& scenario, std::size_t run);

// Input, true-path schedule and noisy desired signal shared by every
// algorithm within one run.
struct RunData {
  SignalBuffer input;
  PathSchedule schedule;
  SignalBuffer desired;
};

RunData generate_run_data(const Scenario& scenario, std::size_t run,
                          Execution execution = Execution::kParallel);

struct Diagnostic {
  std::string algorithm;
  std::size_t run = 0;
  std::size_t sample = 0;
  std::string message;
};

struct AlgorithmResult {
  std::string label;
  AlgorithmSpec spec;
  // Averaged over the runs that stayed finite. All-NaN if none did.
  MisalignmentCurve curve;
  std::size_t diverged_runs = 0;
};

struct SegmentTiming {
  std::string label;
  std::size_t segment = 0;
  std::size_t segment_start = 0;
  // Samples from the segment start; nullopt if never reached.
  std::optional<std::size_t> time_to_minus10;
  std::optional<std::size_t> time_to_minus20;
  double final_db = 0.0;
};

struct RunReport {
  Scenario scenario;
  std::vector<AlgorithmResult> results;  // scenario order
  std::vector<SegmentTiming> timings;    // per algorithm, per segment
  std::vector<std::pair<std::string, CostBreakdown>> costs;
  std::vector<RunSeeds> seeds;
  std::vector<Diagnostic> diagnostics;

  const AlgorithmResult& result(const std::string& label) const;
  // Curve restricted to schedule segment k, with samples counted from the
  // segment start.
  MisalignmentCurve segment_curve(const std::string& label, std::size_t segment) const;
};

// Runs one algorithm over prepared data. Records misalignment against the
// active path every record_stride samples, starting at sample 0. Sets
// `diagnostic` and returns nullopt when the estimate goes non-finite.
std::optional<MisalignmentCurve> run_algorithm(const Scenario& scenario,
                                               const AlgorithmSpec& spec,
                                               const RunData& data,
                                               Diagnostic* diagnostic = nullptr);

// Identical scenarios give bit-identical reports under either execution mode.
RunReport run_scenario(const Scenario& scenario, Execution execution = Execution::kParallel);

// Clones the scenario's first BS_PNLMS entry for P = 1, each of `sizes`, and
// P = L, in that order (duplicates dropped), and runs them on shared data.
RunReport sweep_group_size(const Scenario& scenario, const std::vector<std::size_t>& sizes,
                           Execution execution = Execution::kParallel);

// Writes curves.csv, summary.csv, segments.csv, costs.csv, scenario.txt and
// diagnostics.txt into out_dir (created if missing). Returns the paths written.
std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::filesystem::path& out_dir);

// Fixed-width table of predicted_costs for all five algorithms.
std::string render_cost_table(std::size_t length, std::size_t group_size);

}  // namespace bsprop

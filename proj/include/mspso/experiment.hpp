#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mspso/config.hpp"
#include "mspso/history.hpp"

namespace mspso {

struct RunOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::optional<double> final_best; // objective sense
  std::vector<double> best_position;
  std::uint64_t eval_count = 0;
  std::optional<double> wall_seconds; // only known for fresh runs
  std::filesystem::path history_path;
};

struct Spread {
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Median (mean of the middle pair for even counts), min and max.
Spread spread_of(std::vector<double> values);

struct RunSummary {
  std::string objective;
  std::string sense;
  int t_max = 0;
  std::vector<RunOutcome> runs;
  std::optional<Spread> final_best;     // over successful runs
  std::vector<Spread> per_iteration;    // best-so-far across runs, t = 1..t_max

  bool all_ok() const;
};

/// Cross-run statistics recomputed from history files. Histories must share
/// objective, sense, dimension and t_max and must have completed.
RunSummary summarize(const std::vector<std::filesystem::path> &history_paths);

/// Delimited convergence table: `iteration`, one `run<k>_best` column per
/// history (k = position in the argument list), then `run<k>_sbest<j>` for
/// every history that ever had more than one swarm. Swarms retired by a
/// collapse leave blank cells.
void emit_plot_data(const std::vector<std::filesystem::path> &history_paths,
                    const std::filesystem::path &out_path);

std::string summary_to_json(const RunSummary &summary);

struct ExperimentOptions {
  bool force = false;
};

/// File names inside the output directory.
std::filesystem::path history_file_name(std::uint64_t seed);
inline constexpr const char *kSummaryFile = "summary.json";
inline constexpr const char *kPlotFile = "convergence.csv";

/// Runs every seed, writes histories, the summary and the convergence table.
/// A non-empty output directory is refused unless `force` is set. Failed runs
/// are reported in the summary; the remaining runs are unaffected.
RunSummary run_experiment(const ExperimentConfig &config,
                          const ExperimentOptions &options = {});

/// Same, with a caller-supplied objective in place of the configured one.
RunSummary run_experiment(const ExperimentConfig &config,
                          const Objective &objective,
                          const ExperimentOptions &options = {});

} // namespace mspso

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "mspso/config.hpp"
#include "mspso/engine.hpp"

namespace mspso {

/// History files are JSON lines:
///   {"type":"header", ...}      run identity and configuration
///   {"type":"init", ...}        bests after the initial evaluation pass
///   {"type":"iteration", ...}   one per completed iteration, t = 1..t_max
///   {"type":"final", ...}       status "ok" or "failed"
/// Field-by-field documentation lives in docs/formats.md.
inline constexpr const char *kHistoryFormat = "mspso-history/1";

/// Streams a run's history to disk; every record is flushed as it is
/// written so a failed run leaves a readable prefix behind.
class HistoryWriter {
public:
  HistoryWriter(const std::filesystem::path &path,
                const ExperimentConfig &config, const Objective &objective,
                std::uint64_t seed);

  void write_init(const RunState &state);
  void write_iteration(const IterationRecord &record);
  void write_success(const RunHistory &history);
  void write_failure(const std::string &error, std::uint64_t eval_count);

private:
  void write_line(const std::string &line);

  std::ofstream m_out;
  std::filesystem::path m_path;
  Sense m_sense;
};

struct HistoryRow {
  int t = 0;
  std::size_t stage = 0;
  double best = 0.0;              // best-so-far, objective sense
  std::vector<double> sbest;      // objective sense, one per live swarm
  std::uint64_t evals = 0;
};

struct LoadedHistory {
  std::filesystem::path path;
  std::string objective;
  std::string sense;
  std::size_t dimension = 0;
  int t_max = 0;
  std::size_t population_size = 0;
  std::string algorithm;
  std::string stage_plan;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<HistoryRow> rows;
  std::string status; // "ok", "failed", or "incomplete" without a final record
  std::string error;
  std::optional<double> final_best; // objective sense
  std::vector<double> best_position;
  std::uint64_t eval_count = 0;

  std::size_t max_swarms() const;
};

/// Reads a history file; malformed content raises ConfigError naming the
/// path and line.
LoadedHistory load_history(const std::filesystem::path &path);

} // namespace mspso

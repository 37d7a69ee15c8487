#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mspso/engine.hpp"
#include "mspso/objective.hpp"
#include "mspso/schedules.hpp"

namespace mspso {

enum class Algorithm { canonical, ldiw, tvac, two_stage, tvac_two_stage, multi_stage };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);
const std::vector<Algorithm> &all_algorithms();

/// Schedule and staging a named variant expands to for a given budget.
struct Preset {
  ScheduleSpec schedule;
  StagePlan stage_plan;
};

/// canonical/ldiw/tvac: one swarm for t_max iterations.
/// 2spso/tvac-2spso: 5 swarms for t_max/5 iterations, then one swarm
///   (5x25 1x100 at t_max = 125).
/// ms2pso: 8 -> 4 -> 2 swarms for t_max/5 iterations each, then one swarm for
///   the rest (8x25 4x25 2x25 1x50 at t_max = 125), tvac coefficients.
Preset preset_for(Algorithm algorithm, int t_max);

struct ExperimentConfig {
  std::string objective = "sphere";
  std::size_t dimension = 10;
  std::string proxy_fixture; // empty: the bundled fixture
  Algorithm algorithm = Algorithm::canonical;
  ScheduleSpec schedule;
  StagePlan stage_plan{{{1, 125}}};
  std::size_t population_size = 40;
  int t_max = 125;
  std::vector<std::uint64_t> seeds{1, 2};
  std::string output_dir = "results";
  unsigned parallelism = 0; // 0 means one thread per hardware core
  bool record_particle_fitness = false;

  friend bool operator==(const ExperimentConfig &,
                         const ExperimentConfig &) = default;
};

/// Default experiment for an algorithm: pop 40, t_max 125, seeds {1, 2}.
ExperimentConfig default_config(Algorithm algorithm);

/// All rule violations of an otherwise parsed config; empty when valid.
std::vector<std::string> validate_config(const ExperimentConfig &config);

/// Non-fatal remarks (for example a single seed).
std::vector<std::string> config_warnings(const ExperimentConfig &config);

/// Raised by parse_config/load_config. `problems` holds one entry per
/// offending line or field.
class ConfigFileError : public ConfigError {
public:
  ConfigFileError(std::string origin, std::vector<std::string> problems);
  const std::vector<std::string> &problems() const { return m_problems; }

private:
  std::vector<std::string> m_problems;
};

ExperimentConfig parse_config(const std::string &text,
                              const std::string &origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path &path);

/// Every field, one `key = value` line each, in a form parse_config reads
/// back to an equal config.
std::string write_config(const ExperimentConfig &config);

/// FNV-1a digest of the fields that influence a run's trajectory (seeds,
/// output directory and parallelism excluded), as 16 hex digits.
std::string config_digest(const ExperimentConfig &config);

/// Resolves the configured objective (benchmark or well proxy).
Objective make_objective(const ExperimentConfig &config);

} // namespace mspso

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mspso/core.hpp"
#include "mspso/objective.hpp"
#include "mspso/schedules.hpp"

namespace mspso {

/// A sub-population and its best record. Particles are kept in ascending
/// global index order.
struct Swarm {
  std::size_t id = 0;
  std::vector<Particle> particles;
  Vector sbest_position;
  double sbest_fitness = std::numeric_limits<double>::infinity();

  /// Recomputes sbest as the minimum member pbest, lowest particle index on
  /// ties.
  void refresh_best();

  friend bool operator==(const Swarm &, const Swarm &) = default;
};

struct Stage {
  int swarm_count = 1;
  int iterations = 1;

  friend bool operator==(const Stage &, const Stage &) = default;
};

/// Ordered (swarm count, iteration span) pairs. A single stage with one swarm
/// is canonical PSO; two stages give 2SPSO; more give MS2PSO.
struct StagePlan {
  std::vector<Stage> stages;

  int total_iterations() const;

  /// Every violated rule, empty when the plan is usable for the given
  /// population size and iteration budget.
  std::vector<std::string> violations(std::size_t population_size,
                                      int t_max) const;
  void validate(std::size_t population_size, int t_max) const;

  /// "8x25 4x25 2x25 1x50"
  std::string to_string() const;
  static StagePlan parse(const std::string &text);

  friend bool operator==(const StagePlan &, const StagePlan &) = default;
};

/// Maps positions to minimized fitness values, possibly on several threads.
/// Results come back in input order regardless of the thread count.
class Evaluator {
public:
  Evaluator(const Objective &objective, unsigned parallelism = 1);

  std::vector<double> evaluate(std::span<const Vector *const> positions) const;

  unsigned parallelism() const { return m_parallelism; }

private:
  const Objective *m_objective;
  unsigned m_parallelism;
};

struct RunState {
  std::vector<Swarm> swarms;
  Vector gbest_position;
  double gbest_fitness = std::numeric_limits<double>::infinity();
  IterationClock clock;
  std::uint64_t eval_count = 0;
  std::size_t stage = 0;

  std::size_t particle_count() const;
};

struct IterationRecord {
  int t = 0; // 1-based iteration number
  std::size_t stage = 0;
  double gbest_fitness = 0.0;
  std::vector<double> sbest_fitness; // one per live swarm
  Coefficients coefficients;
  std::uint64_t eval_count = 0; // cumulative, including the initial pass
  std::vector<double> particle_fitness; // by global index, when requested

  friend bool operator==(const IterationRecord &,
                         const IterationRecord &) = default;
};

struct RunHistory {
  std::uint64_t seed = 0;
  double initial_gbest_fitness = 0.0;
  std::vector<IterationRecord> records;
  Vector gbest_position;
  double gbest_fitness = 0.0;
  std::uint64_t eval_count = 0;
};

/// Everything a step needs besides the mutable state.
struct StepContext {
  const SearchSpace &space;
  const ScheduleSpec &schedule;
  const Evaluator &evaluator;
  std::uint64_t seed = 0;
  const DrawFn &draw;
  bool record_particle_fitness = false;
};

/// Per-dimension v' = omega v + c1 r1 (pbest - x) + c2 r2 (attractor - x),
/// clamped to +/- vmax. r1 and r2 come from slots 0 and 1 of `key_base` with
/// the dimension filled in.
Vector velocity_update(const Particle &particle,
                       std::span<const double> attractor,
                       const Coefficients &coefficients,
                       std::span<const double> vmax,
                       const RngStreamKey &key_base, const DrawFn &draw);

/// x' = x + v, then clamp_to_bounds.
Particle position_update(Particle particle, const SearchSpace &space);

/// Applies freshly computed fitness values (one per particle, swarm order):
/// strict-improvement pbest update, then sbest refresh. Non-finite values
/// raise EvaluationError naming the particle.
void apply_fitness(Swarm &swarm, std::span<const double> fitness);

/// Evaluates every particle of `swarm` once and applies the results.
void evaluate_and_update_bests(Swarm &swarm, const Evaluator &evaluator,
                               std::uint64_t &eval_count);

/// Lowers gbest to the best sbest when strictly better (lowest swarm on ties).
void refresh_gbest(RunState &state);

/// One synchronous iteration over all swarms. The attractor is the swarm's
/// sbest while more than one swarm is alive, gbest otherwise.
IterationRecord step(RunState &state, const StepContext &ctx);

/// Merges contiguous blocks of count/target swarms. Particle state is carried
/// over untouched.
std::vector<Swarm> collapse_swarms(std::vector<Swarm> swarms,
                                   std::size_t target_count);

/// Block partition: particles [0, k) to swarm 0, [k, 2k) to swarm 1, ...
std::vector<Swarm> partition_into_swarms(std::vector<Particle> particles,
                                         std::size_t swarm_count);

struct RunObserver {
  std::function<void(const RunState &)> on_initialized;
  std::function<void(const IterationRecord &, const RunState &)> on_iteration;
  std::function<void(const RunState &before, const RunState &after)>
      on_collapse;
};

struct RunOptions {
  unsigned parallelism = 1;
  bool record_particle_fitness = false;
  DrawFn draw = draw_uniform;
  RunObserver observer;
};

/// Initializes the population, splits it into the first stage's swarms and
/// performs the initial evaluation pass.
RunState initialize_run(const Objective &objective,
                        std::size_t population_size, const StagePlan &plan,
                        int t_max, std::uint64_t seed,
                        const Evaluator &evaluator);

/// Full staged run. Configuration problems raise ConfigError before the
/// first evaluation; evaluation failures propagate after the observer has
/// seen every completed iteration.
RunHistory run(const Objective &objective, std::size_t population_size,
               const StagePlan &plan, const ScheduleSpec &schedule,
               std::uint64_t seed, const RunOptions &options = {});

} // namespace mspso

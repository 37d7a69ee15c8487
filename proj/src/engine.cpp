#include "mspso/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace mspso {

void Swarm::refresh_best() {
  const Particle *best = nullptr;
  for (const auto &p : particles) {
    if (best == nullptr || p.pbest_fitness < best->pbest_fitness ||
        (p.pbest_fitness == best->pbest_fitness && p.index < best->index))
      best = &p;
  }
  if (best == nullptr)
    return;
  sbest_fitness = best->pbest_fitness;
  sbest_position = best->pbest_position;
}

// ---------------------------------------------------------------------------
// StagePlan

int StagePlan::total_iterations() const {
  int total = 0;
  for (const auto &s : stages)
    total += s.iterations;
  return total;
}

std::vector<std::string> StagePlan::violations(std::size_t population_size,
                                               int t_max) const {
  std::vector<std::string> out;
  if (stages.empty()) {
    out.emplace_back("stage plan is empty");
    return out;
  }
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto &s = stages[i];
    const std::string at = "stage " + std::to_string(i + 1);
    if (s.swarm_count < 1)
      out.push_back(at + ": swarm count must be at least 1");
    if (s.iterations < 1)
      out.push_back(at + ": iterations must be at least 1");
    if (i > 0 && s.swarm_count >= 1 && stages[i - 1].swarm_count >= 1) {
      const int prev = stages[i - 1].swarm_count;
      if (s.swarm_count > prev)
        out.push_back(at + ": swarm count may not increase (" +
                      std::to_string(prev) + " -> " +
                      std::to_string(s.swarm_count) + ")");
      else if (prev % s.swarm_count != 0)
        out.push_back(at + ": swarm count " + std::to_string(s.swarm_count) +
                      " does not divide previous count " +
                      std::to_string(prev));
    }
  }
  if (stages.back().swarm_count != 1)
    out.emplace_back("final stage must have exactly one swarm");
  const int first = stages.front().swarm_count;
  if (first >= 1 && population_size % static_cast<std::size_t>(first) != 0)
    out.push_back("population size " + std::to_string(population_size) +
                  " is not divisible by first-stage swarm count " +
                  std::to_string(first));
  if (total_iterations() != t_max)
    out.push_back("stage iterations sum to " +
                  std::to_string(total_iterations()) + ", expected t_max " +
                  std::to_string(t_max));
  return out;
}

void StagePlan::validate(std::size_t population_size, int t_max) const {
  const auto v = violations(population_size, t_max);
  if (v.empty())
    return;
  std::string msg = "invalid stage plan:";
  for (const auto &s : v)
    msg += " " + s + ";";
  msg.pop_back();
  throw ConfigError(msg);
}

std::string StagePlan::to_string() const {
  std::string out;
  for (const auto &s : stages) {
    if (!out.empty())
      out += ' ';
    out += std::to_string(s.swarm_count) + "x" + std::to_string(s.iterations);
  }
  return out;
}

StagePlan StagePlan::parse(const std::string &text) {
  StagePlan plan;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto x = tok.find('x');
    int count = 0, iters = 0;
    std::size_t used_a = 0, used_b = 0;
    try {
      if (x == std::string::npos)
        throw std::invalid_argument("no separator");
      const std::string a = tok.substr(0, x), b = tok.substr(x + 1);
      count = std::stoi(a, &used_a);
      iters = std::stoi(b, &used_b);
      if (used_a != a.size() || used_b != b.size())
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
      throw ConfigError("stage '" + tok +
                        "' is not of the form <swarms>x<iterations>");
    }
    plan.stages.push_back({count, iters});
  }
  if (plan.stages.empty())
    throw ConfigError("stage plan is empty");
  return plan;
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(const Objective &objective, unsigned parallelism)
    : m_objective(&objective), m_parallelism(std::max(1u, parallelism)) {}

std::vector<double>
Evaluator::evaluate(std::span<const Vector *const> positions) const {
  std::vector<double> out(positions.size());
  const std::size_t n = positions.size();
  const std::size_t workers = std::min<std::size_t>(m_parallelism, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = m_objective->minimized(*positions[i]);
    return out;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i)
            out[i] = m_objective->minimized(*positions[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  // Lowest chunk first, so the reported failure does not depend on timing.
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Kernel

std::size_t RunState::particle_count() const {
  std::size_t n = 0;
  for (const auto &s : swarms)
    n += s.particles.size();
  return n;
}

Vector velocity_update(const Particle &particle,
                       std::span<const double> attractor,
                       const Coefficients &coefficients,
                       std::span<const double> vmax,
                       const RngStreamKey &key_base, const DrawFn &draw) {
  const std::size_t dim = particle.position.size();
  if (particle.velocity.size() != dim || particle.pbest_position.size() != dim ||
      attractor.size() != dim || vmax.size() != dim)
    throw std::logic_error("velocity_update: dimension mismatch");

  const auto [omega, c1, c2] = coefficients;
  Vector v(dim);
  RngStreamKey key = key_base;
  for (std::size_t d = 0; d < dim; ++d) {
    key.dimension = d;
    key.slot = 0;
    const double r1 = draw(key);
    key.slot = 1;
    const double r2 = draw(key);
    const double x = particle.position[d];
    double vd = omega * particle.velocity[d] +
                c1 * r1 * (particle.pbest_position[d] - x) +
                c2 * r2 * (attractor[d] - x);
    v[d] = std::clamp(vd, -vmax[d], vmax[d]);
  }
  return v;
}

Particle position_update(Particle particle, const SearchSpace &space) {
  for (std::size_t d = 0; d < particle.position.size(); ++d)
    particle.position[d] += particle.velocity[d];
  return clamp_to_bounds(std::move(particle), space);
}

void apply_fitness(Swarm &swarm, std::span<const double> fitness) {
  if (fitness.size() != swarm.particles.size())
    throw std::logic_error("apply_fitness: one value per particle required");
  for (std::size_t k = 0; k < fitness.size(); ++k) {
    Particle &p = swarm.particles[k];
    const double f = fitness[k];
    if (!std::isfinite(f)) {
      std::ostringstream msg;
      msg << "objective returned " << f << " for particle " << p.index
          << " at position (";
      for (std::size_t d = 0; d < p.position.size(); ++d)
        msg << (d ? ", " : "") << p.position[d];
      msg << ")";
      throw EvaluationError(p.index, p.position, msg.str());
    }
    if (f < p.pbest_fitness) {
      p.pbest_fitness = f;
      p.pbest_position = p.position;
    }
  }
  swarm.refresh_best();
}

void evaluate_and_update_bests(Swarm &swarm, const Evaluator &evaluator,
                               std::uint64_t &eval_count) {
  std::vector<const Vector *> positions;
  positions.reserve(swarm.particles.size());
  for (const auto &p : swarm.particles)
    positions.push_back(&p.position);
  const auto fitness = evaluator.evaluate(positions);
  eval_count += fitness.size();
  apply_fitness(swarm, fitness);
}

void refresh_gbest(RunState &state) {
  const Swarm *best = nullptr;
  for (const auto &s : state.swarms)
    if (s.sbest_fitness < state.gbest_fitness &&
        (best == nullptr || s.sbest_fitness < best->sbest_fitness))
      best = &s;
  if (best != nullptr) {
    state.gbest_fitness = best->sbest_fitness;
    state.gbest_position = best->sbest_position;
  }
}

namespace {

// Evaluates all particles of all swarms as one batch and applies the results
// swarm by swarm in index order.
void evaluate_all(RunState &state, const Evaluator &evaluator,
                  std::vector<double> *particle_fitness) {
  std::vector<const Vector *> positions;
  positions.reserve(state.particle_count());
  for (const auto &s : state.swarms)
    for (const auto &p : s.particles)
      positions.push_back(&p.position);
  const auto fitness = evaluator.evaluate(positions);
  state.eval_count += fitness.size();

  std::size_t offset = 0;
  for (auto &s : state.swarms) {
    const std::span<const double> chunk(fitness.data() + offset,
                                        s.particles.size());
    apply_fitness(s, chunk);
    offset += s.particles.size();
  }
  refresh_gbest(state);

  if (particle_fitness != nullptr) {
    particle_fitness->assign(fitness.size(), 0.0);
    offset = 0;
    for (const auto &s : state.swarms)
      for (const auto &p : s.particles)
        (*particle_fitness)[p.index] = fitness[offset++];
  }
}

} // namespace

IterationRecord step(RunState &state, const StepContext &ctx) {
  if (state.clock.t >= state.clock.t_max)
    throw std::logic_error("step: run already finished");

  const Coefficients coeff = coefficients_at(ctx.schedule, state.clock);
  const bool multi = state.swarms.size() > 1;
  const auto vmax = std::span<const double>(ctx.space.vmax());

  for (auto &s : state.swarms) {
    const Vector &attractor = multi ? s.sbest_position : state.gbest_position;
    for (auto &p : s.particles) {
      const RngStreamKey key{ctx.seed, state.clock.t, p.index, 0, 0};
      p.velocity = velocity_update(p, attractor, coeff, vmax, key, ctx.draw);
      p = position_update(std::move(p), ctx.space);
    }
  }

  IterationRecord rec;
  evaluate_all(state, ctx.evaluator,
               ctx.record_particle_fitness ? &rec.particle_fitness : nullptr);
  ++state.clock.t;

  rec.t = state.clock.t;
  rec.stage = state.stage;
  rec.gbest_fitness = state.gbest_fitness;
  rec.sbest_fitness.reserve(state.swarms.size());
  for (const auto &s : state.swarms)
    rec.sbest_fitness.push_back(s.sbest_fitness);
  rec.coefficients = coeff;
  rec.eval_count = state.eval_count;
  return rec;
}

std::vector<Swarm> collapse_swarms(std::vector<Swarm> swarms,
                                   std::size_t target_count) {
  const std::size_t count = swarms.size();
  if (target_count == 0 || count == 0 || count % target_count != 0)
    throw ConfigError("cannot collapse " + std::to_string(count) +
                      " swarms into " + std::to_string(target_count));
  if (target_count == count)
    return swarms;

  const std::size_t group = count / target_count;
  std::vector<Swarm> merged(target_count);
  for (std::size_t j = 0; j < target_count; ++j) {
    Swarm &m = merged[j];
    m.id = j;
    for (std::size_t k = j * group; k < (j + 1) * group; ++k)
      for (auto &p : swarms[k].particles)
        m.particles.push_back(std::move(p));
    m.refresh_best();
  }
  return merged;
}

std::vector<Swarm> partition_into_swarms(std::vector<Particle> particles,
                                         std::size_t swarm_count) {
  if (swarm_count == 0 || particles.size() % swarm_count != 0)
    throw ConfigError("cannot split " + std::to_string(particles.size()) +
                      " particles into " + std::to_string(swarm_count) +
                      " equal swarms");
  const std::size_t k = particles.size() / swarm_count;
  std::vector<Swarm> swarms(swarm_count);
  for (std::size_t j = 0; j < swarm_count; ++j) {
    swarms[j].id = j;
    swarms[j].particles.assign(
        std::make_move_iterator(particles.begin() + j * k),
        std::make_move_iterator(particles.begin() + (j + 1) * k));
  }
  return swarms;
}

RunState initialize_run(const Objective &objective,
                        std::size_t population_size, const StagePlan &plan,
                        int t_max, std::uint64_t seed,
                        const Evaluator &evaluator) {
  plan.validate(population_size, t_max);
  RunState state;
  state.clock = {0, t_max};
  state.swarms = partition_into_swarms(
      init_population(objective.space, population_size, seed),
      static_cast<std::size_t>(plan.stages.front().swarm_count));
  evaluate_all(state, evaluator, nullptr);
  return state;
}

RunHistory run(const Objective &objective, std::size_t population_size,
               const StagePlan &plan, const ScheduleSpec &schedule,
               std::uint64_t seed, const RunOptions &options) {
  const int t_max = plan.total_iterations();
  schedule.validate();
  plan.validate(population_size, t_max);

  const Evaluator evaluator(objective, options.parallelism);
  const DrawFn &draw = options.draw ? options.draw : DrawFn(draw_uniform);
  const auto &obs = options.observer;

  RunState state =
      initialize_run(objective, population_size, plan, t_max, seed, evaluator);
  if (obs.on_initialized)
    obs.on_initialized(state);

  RunHistory history;
  history.seed = seed;
  history.initial_gbest_fitness = state.gbest_fitness;
  history.records.reserve(static_cast<std::size_t>(t_max));

  const StepContext ctx{objective.space, schedule,
                        evaluator,       seed,
                        draw,            options.record_particle_fitness};

  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    if (s > 0) {
      const auto target = static_cast<std::size_t>(plan.stages[s].swarm_count);
      if (obs.on_collapse) {
        RunState before = state;
        state.swarms = collapse_swarms(std::move(state.swarms), target);
        state.stage = s;
        obs.on_collapse(before, state);
      } else {
        state.swarms = collapse_swarms(std::move(state.swarms), target);
        state.stage = s;
      }
    }
    for (int i = 0; i < plan.stages[s].iterations; ++i) {
      history.records.push_back(step(state, ctx));
      if (obs.on_iteration)
        obs.on_iteration(history.records.back(), state);
    }
  }

  history.gbest_position = state.gbest_position;
  history.gbest_fitness = state.gbest_fitness;
  history.eval_count = state.eval_count;
  return history;
}

} // namespace mspso

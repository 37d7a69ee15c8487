#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "mspso/benchmarks.hpp"
#include "mspso/engine.hpp"
#include "reference_pso.hpp"

using namespace mspso;

namespace {

DrawFn fixed_draws(double r1, double r2) {
  return [=](const RngStreamKey &k) { return k.slot == 0 ? r1 : r2; };
}

Particle particle_1d(double x, double v, double pbest) {
  Particle p;
  p.position = {x};
  p.velocity = {v};
  p.pbest_position = {pbest};
  p.pbest_fitness = 0.0;
  return p;
}

Objective quadratic_1d() {
  return Objective{"q", SearchSpace::uniform(1, -10.0, 10.0), Sense::minimize,
                   0.0, [](std::span<const double> x) { return x[0] * x[0]; }};
}

Swarm swarm_of(std::vector<double> positions, std::size_t first_index = 0) {
  Swarm s;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Particle p = particle_1d(positions[i], 0.0, positions[i]);
    p.index = first_index + i;
    p.pbest_fitness = std::numeric_limits<double>::infinity();
    s.particles.push_back(p);
  }
  return s;
}

} // namespace

TEST_CASE("velocity_update") {
  const Vector vmax{10.0};
  SUBCASE("pure inertia") {
    const auto v = velocity_update(particle_1d(0.5, 0.3, 0.9), Vector{0.1},
                                   {1.0, 0.0, 0.0}, vmax, {}, fixed_draws(0.7, 0.2));
    CHECK(v == Vector{0.3});
  }
  SUBCASE("difference terms vanish at the attractors") {
    const auto v = velocity_update(particle_1d(0.4, -0.2, 0.4), Vector{0.4},
                                   {0.6, 2.0, 2.0}, vmax, {},
                                   fixed_draws(0.93, 0.11));
    CHECK(v == Vector{0.6 * -0.2});
  }
  SUBCASE("hand-computed update with injected draws") {
    const auto v = velocity_update(particle_1d(0.5, 0.1, 0.7), Vector{0.9},
                                   {0.5, 2.0, 2.0}, vmax, {}, fixed_draws(0.5, 0.25));
    CHECK(v[0] == doctest::Approx(0.45).epsilon(1e-14));
  }
  SUBCASE("clamped to vmax") {
    const auto v = velocity_update(particle_1d(0.0, 5.0, 0.0), Vector{0.0},
                                   {1.0, 0.0, 0.0}, Vector{2.0}, {},
                                   fixed_draws(0.5, 0.5));
    CHECK(v == Vector{2.0});
  }
  SUBCASE("draw keys carry dimension and slot") {
    std::vector<RngStreamKey> seen;
    Particle p;
    p.position = {0, 0};
    p.velocity = {0, 0};
    p.pbest_position = {1, 1};
    velocity_update(p, Vector{1, 1}, {1, 1, 1}, Vector{9, 9},
                    {11, 4, 6, 0, 0}, [&](const RngStreamKey &k) {
                      seen.push_back(k);
                      return 0.5;
                    });
    REQUIRE(seen.size() == 4);
    CHECK(seen[0] == RngStreamKey{11, 4, 6, 0, 0});
    CHECK(seen[1] == RngStreamKey{11, 4, 6, 0, 1});
    CHECK(seen[3] == RngStreamKey{11, 4, 6, 1, 1});
  }
  SUBCASE("dimension mismatch is a bug") {
    CHECK_THROWS_AS(velocity_update(particle_1d(0, 0, 0), Vector{0, 0},
                                    {1, 1, 1}, vmax, {}, fixed_draws(0, 0)),
                    std::logic_error);
  }
}

TEST_CASE("position_update") {
  const auto space = SearchSpace::uniform(1, 0.0, 1.0);
  auto p = position_update(particle_1d(0.2, 0.1, 0.2), space);
  CHECK(p.position[0] == doctest::Approx(0.3).epsilon(1e-15));
  p = position_update(particle_1d(0.95, 0.2, 0.2), space);
  CHECK(p.position == Vector{1.0});
  CHECK(p.velocity == Vector{0.0});
  p = position_update(particle_1d(0.42, 0.0, 0.2), space);
  CHECK(p.position == Vector{0.42});
}

TEST_CASE("evaluate_and_update_bests") {
  const auto obj = quadratic_1d();
  const Evaluator ev(obj);
  std::uint64_t evals = 0;

  SUBCASE("re-evaluating at pbest changes nothing") {
    Swarm s = swarm_of({1.0, -2.0, 3.0});
    evaluate_and_update_bests(s, ev, evals);
    const Swarm before = s;
    evaluate_and_update_bests(s, ev, evals);
    CHECK(s == before);
    CHECK(evals == 6);
  }
  SUBCASE("sbest adopts an improvement") {
    Swarm s = swarm_of({1.0, -2.0, 3.0});
    evaluate_and_update_bests(s, ev, evals);
    CHECK(s.sbest_fitness == 1.0);
    s.particles[2].position = {0.5};
    evaluate_and_update_bests(s, ev, evals);
    CHECK(s.sbest_fitness == 0.25);
    CHECK(s.sbest_position == Vector{0.5});
    CHECK(s.particles[2].pbest_position == Vector{0.5});
  }
  SUBCASE("ties go to the lower particle index") {
    Swarm s = swarm_of({3.0, 2.0, -2.0}, 10);
    evaluate_and_update_bests(s, ev, evals);
    CHECK(s.sbest_fitness == 4.0);
    CHECK(s.sbest_position == Vector{2.0});
  }
  SUBCASE("ties keep the incumbent pbest") {
    Swarm s = swarm_of({2.0});
    evaluate_and_update_bests(s, ev, evals);
    s.particles[0].position = {-2.0};
    evaluate_and_update_bests(s, ev, evals);
    CHECK(s.particles[0].pbest_position == Vector{2.0});
  }
  SUBCASE("non-finite fitness names the particle") {
    const Objective bad{"bad", SearchSpace::uniform(1, -1, 1), Sense::minimize,
                        std::nullopt, [](std::span<const double> x) {
                          return x[0] > 0 ? std::nan("") : 1.0;
                        }};
    Swarm s = swarm_of({-0.5, 0.5}, 7);
    try {
      evaluate_and_update_bests(s, Evaluator(bad), evals);
      FAIL("expected EvaluationError");
    } catch (const EvaluationError &e) {
      CHECK(e.particle_index() == 8);
      CHECK(e.position() == Vector{0.5});
      CHECK(std::string(e.what()).find("particle 8") != std::string::npos);
    }
  }
}

TEST_CASE("collapse_swarms") {
  std::vector<Swarm> swarms;
  for (std::size_t j = 0; j < 8; ++j) {
    std::vector<double> xs;
    for (std::size_t k = 0; k < 5; ++k)
      xs.push_back(static_cast<double>(j) - 3.5 + 0.1 * static_cast<double>(k));
    swarms.push_back(swarm_of(xs, 5 * j));
    swarms.back().id = j;
    std::uint64_t evals = 0;
    evaluate_and_update_bests(swarms.back(), Evaluator(quadratic_1d()), evals);
  }

  SUBCASE("8 swarms of 5 into 4 swarms of 10") {
    const auto merged = collapse_swarms(swarms, 4);
    REQUIRE(merged.size() == 4);
    for (const auto &m : merged)
      CHECK(m.particles.size() == 10);
    std::vector<Particle> expect = swarms[0].particles;
    expect.insert(expect.end(), swarms[1].particles.begin(),
                  swarms[1].particles.end());
    CHECK(merged[0].particles == expect);
    CHECK(merged[0].sbest_fitness ==
          std::min(swarms[0].sbest_fitness, swarms[1].sbest_fitness));
  }
  SUBCASE("two swarms into one") {
    std::vector<Swarm> two(swarms.begin() + 3, swarms.begin() + 5);
    const auto one = collapse_swarms(two, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].sbest_fitness ==
          std::min(two[0].sbest_fitness, two[1].sbest_fitness));
  }
  SUBCASE("same count is the identity") {
    CHECK(collapse_swarms(swarms, 8) == swarms);
  }
  SUBCASE("non-divisor target is rejected") {
    CHECK_THROWS_AS(collapse_swarms(swarms, 3), ConfigError);
    CHECK_THROWS_AS(collapse_swarms(swarms, 0), ConfigError);
  }
  SUBCASE("equal sbest candidates resolve to the lowest global index") {
    std::vector<Swarm> pair{swarm_of({2.0}, 0), swarm_of({-2.0}, 1)};
    std::uint64_t evals = 0;
    for (auto &s : pair)
      evaluate_and_update_bests(s, Evaluator(quadratic_1d()), evals);
    const auto one = collapse_swarms(pair, 1);
    CHECK(one[0].sbest_position == Vector{2.0});
  }
}

TEST_CASE("stage plan validation") {
  auto ok = [](const char *plan, std::size_t pop, int t_max) {
    return StagePlan::parse(plan).violations(pop, t_max).empty();
  };
  CHECK(ok("8x25 4x25 2x25 1x50", 40, 125));
  CHECK(ok("5x25 1x100", 40, 125));
  CHECK_FALSE(ok("3x25 1x100", 40, 125)); // 40 % 3
  CHECK_FALSE(ok("2x25 4x100", 40, 125)); // grows
  CHECK_FALSE(ok("8x25 3x100", 48, 125)); // 8 % 3
  CHECK_FALSE(ok("2x25", 40, 25));        // final stage not single
  CHECK_FALSE(ok("1x100", 40, 125));      // iteration sum
  CHECK_FALSE(StagePlan{}.violations(40, 125).empty());
  const StagePlan zero{{{1, 0}}};
  CHECK_THROWS_AS(zero.validate(1, 0), ConfigError);

  const auto p = StagePlan::parse("8x25 4x25 2x25 1x50");
  const StagePlan expected{{{8, 25}, {4, 25}, {2, 25}, {1, 50}}};
  CHECK(p == expected);
  CHECK(p.to_string() == "8x25 4x25 2x25 1x50");
  CHECK_THROWS_AS(StagePlan::parse("8-25"), ConfigError);
  CHECK_THROWS_AS(StagePlan::parse("8x25x"), ConfigError);
  CHECK_THROWS_AS(StagePlan::parse(""), ConfigError);
}

TEST_CASE("run budgets match the stage plans") {
  const auto sphere = make_benchmark("sphere", 5);
  struct Case {
    StagePlan plan;
    ScheduleSpec schedule;
  };
  const Case cases[] = {
      {{{{1, 125}}}, ScheduleSpec::constant_defaults()},
      {{{{5, 25}, {1, 100}}}, ScheduleSpec::constant_defaults()},
      {{{{8, 25}, {4, 25}, {2, 25}, {1, 50}}}, ScheduleSpec::tvac_defaults()},
  };
  for (const auto &c : cases) {
    std::map<std::size_t, std::size_t> swarms_per_stage;
    RunOptions opts;
    opts.observer.on_iteration = [&](const IterationRecord &r, const RunState &s) {
      swarms_per_stage[r.stage] = s.swarms.size();
      CHECK(r.sbest_fitness.size() == s.swarms.size());
    };
    const auto h = run(sphere, 40, c.plan, c.schedule, 3, opts);
    CHECK(h.records.size() == 125);
    CHECK(h.eval_count == 40u * 126u);
    CHECK(h.eval_count - 40u == 5000u);
    CHECK(h.records.back().eval_count == h.eval_count);
    for (std::size_t s = 0; s < c.plan.stages.size(); ++s)
      CHECK(swarms_per_stage[s] ==
            static_cast<std::size_t>(c.plan.stages[s].swarm_count));
  }
}

TEST_CASE("gbest never regresses and pbest dominates") {
  const auto obj = make_benchmark("rastrigin", 6);
  RunOptions opts;
  opts.record_particle_fitness = true;
  std::map<std::size_t, double> pbest;
  opts.observer.on_iteration = [&](const IterationRecord &r, const RunState &s) {
    for (const auto &sw : s.swarms) {
      for (const auto &p : sw.particles) {
        CHECK(p.pbest_fitness <= r.particle_fitness[p.index]);
        if (pbest.count(p.index))
          CHECK(p.pbest_fitness <= pbest[p.index]);
        pbest[p.index] = p.pbest_fitness;
        CHECK(p.pbest_fitness == obj.minimized(p.pbest_position));
      }
      CHECK(sw.sbest_fitness >= s.gbest_fitness);
    }
  };
  const auto h = run(obj, 16, StagePlan{{{4, 10}, {2, 10}, {1, 10}}},
                     ScheduleSpec::tvac_defaults(), 5, opts);
  double prev = h.initial_gbest_fitness;
  for (const auto &r : h.records) {
    CHECK(r.gbest_fitness <= prev);
    prev = r.gbest_fitness;
  }
}

TEST_CASE("single-swarm constant schedule reproduces the reference PSO") {
  const auto obj = make_benchmark("sphere", 2);
  const ScheduleSpec sched = ScheduleSpec::constant_defaults();
  for (const DrawFn &draw : {DrawFn(draw_uniform), DrawFn(reference::injected_draw)}) {
    const auto ref = reference::canonical_pso(
        obj.fn, -5.12, 5.12, 2, 10, 10, sched.omega_const, sched.c1_const,
        sched.c2_const, 17, draw);
    std::vector<std::vector<Vector>> seen;
    RunOptions opts;
    opts.draw = draw;
    opts.observer.on_iteration = [&](const IterationRecord &, const RunState &s) {
      std::vector<Vector> xs;
      for (const auto &p : s.swarms[0].particles)
        xs.push_back(p.position);
      seen.push_back(xs);
    };
    const auto h = run(obj, 10, StagePlan{{{1, 10}}}, sched, 17, opts);
    REQUIRE(seen.size() == 10);
    for (std::size_t t = 0; t < 10; ++t) {
      CHECK(seen[t] == ref.positions[t + 1]);
      CHECK(h.records[t].gbest_fitness == ref.gbest[t + 1]);
    }
  }
}

TEST_CASE("swarms evolve in isolation during multi-swarm stages") {
  const auto obj = make_benchmark("rastrigin", 3);
  const ScheduleSpec sched = ScheduleSpec::tvac_defaults();
  const std::uint64_t seed = 23;
  const DrawFn draw = draw_uniform;

  auto trajectory_of_swarm2 = [&](bool with_swarm0) {
    const Evaluator ev(obj);
    RunState st = initialize_run(obj, 9, StagePlan{{{3, 15}, {1, 5}}}, 20,
                                 seed, ev);
    if (!with_swarm0) {
      st.swarms.erase(st.swarms.begin());
      st.gbest_fitness = std::numeric_limits<double>::infinity();
      refresh_gbest(st);
    }
    const StepContext ctx{obj.space, sched, ev, seed, draw, false};
    std::vector<std::vector<Particle>> traj;
    for (int i = 0; i < 15; ++i) {
      step(st, ctx);
      traj.push_back(st.swarms.back().particles);
    }
    return traj;
  };
  CHECK(trajectory_of_swarm2(true) == trajectory_of_swarm2(false));
}

TEST_CASE("evaluation parallelism does not change the run") {
  const auto obj = make_benchmark("ackley", 7);
  const StagePlan plan{{{4, 10}, {2, 10}, {1, 10}}};
  RunOptions serial;
  serial.record_particle_fitness = true;
  RunOptions parallel = serial;
  parallel.parallelism = 8;
  const auto a = run(obj, 24, plan, ScheduleSpec::tvac_defaults(), 99, serial);
  const auto b = run(obj, 24, plan, ScheduleSpec::tvac_defaults(), 99, parallel);
  CHECK(a.records == b.records);
  CHECK(a.gbest_position == b.gbest_position);
}

TEST_CASE("run rejects bad configurations before evaluating") {
  int calls = 0;
  const Objective counting{"c", SearchSpace::uniform(2, -1, 1), Sense::minimize,
                           std::nullopt, [&](std::span<const double>) {
                             ++calls;
                             return 0.0;
                           }};
  CHECK_THROWS_AS(run(counting, 10, StagePlan{{{3, 5}, {1, 5}}},
                      ScheduleSpec::constant_defaults(), 1),
                  ConfigError);
  ScheduleSpec bad = ScheduleSpec::tvac_defaults();
  bad.c2_min = 9.0;
  CHECK_THROWS_AS(run(counting, 10, StagePlan{{{1, 5}}}, bad, 1), ConfigError);
  CHECK(calls == 0);
}

TEST_CASE("evaluation failure aborts after the completed iterations") {
  // Finite until the swarm closes in on the optimum.
  const Objective trap{"trap", SearchSpace::uniform(2, -5, 5), Sense::minimize,
                       std::nullopt, [](std::span<const double> x) {
                         const double v = sphere(x);
                         return v < 0.5 ? std::numeric_limits<double>::infinity() : v;
                       }};
  int completed = 0;
  RunOptions opts;
  opts.observer.on_iteration = [&](const IterationRecord &, const RunState &) {
    ++completed;
  };
  CHECK_THROWS_AS(run(trap, 10, StagePlan{{{1, 200}}},
                      ScheduleSpec::constant_defaults(), 4, opts),
                  EvaluationError);
  CHECK(completed < 200);
}

TEST_CASE("maximize objectives are negated for the engine") {
  const Objective peak{"peak", SearchSpace::uniform(1, -3, 3), Sense::maximize,
                       1.0, [](std::span<const double> x) {
                         return 1.0 - x[0] * x[0];
                       }};
  const auto h = run(peak, 10, StagePlan{{{1, 30}}},
                     ScheduleSpec::constant_defaults(), 8);
  CHECK(peak.to_raw(h.gbest_fitness) > 0.99);
  CHECK(peak.to_raw(h.gbest_fitness) == peak.raw(h.gbest_position));
}

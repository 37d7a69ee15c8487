#include "mspso/experiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <thread>

namespace mspso {

namespace fs = std::filesystem;
using nlohmann::json;

Spread spread_of(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("spread_of: no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median = n % 2 == 1
                            ? values[n / 2]
                            : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return {median, values.front(), values.back()};
}

bool RunSummary::all_ok() const {
  return std::all_of(runs.begin(), runs.end(),
                     [](const RunOutcome &r) { return r.ok; });
}

namespace {

void check_compatible(const std::vector<LoadedHistory> &hs) {
  const auto &ref = hs.front();
  for (std::size_t i = 1; i < hs.size(); ++i) {
    const auto &h = hs[i];
    std::vector<std::string> diff;
    if (h.objective != ref.objective)
      diff.push_back("objective (" + ref.objective + " vs " + h.objective + ")");
    if (h.sense != ref.sense)
      diff.push_back("sense (" + ref.sense + " vs " + h.sense + ")");
    if (h.dimension != ref.dimension)
      diff.push_back("dimension (" + std::to_string(ref.dimension) + " vs " +
                     std::to_string(h.dimension) + ")");
    if (h.t_max != ref.t_max)
      diff.push_back("t_max (" + std::to_string(ref.t_max) + " vs " +
                     std::to_string(h.t_max) + ")");
    if (!diff.empty()) {
      std::string msg = "histories " + ref.path.string() + " and " +
                        h.path.string() + " differ in:";
      for (const auto &d : diff)
        msg += " " + d + ";";
      msg.pop_back();
      throw ConfigError(msg);
    }
  }
}

std::vector<LoadedHistory> load_completed(const std::vector<fs::path> &paths) {
  if (paths.empty())
    throw ConfigError("no history files given");
  std::vector<LoadedHistory> hs;
  for (const auto &p : paths) {
    auto h = load_history(p);
    if (h.status != "ok")
      throw ConfigError("history " + p.string() + " did not complete (status " +
                        h.status + ")");
    if (static_cast<int>(h.rows.size()) != h.t_max)
      throw ConfigError("history " + p.string() + " has " +
                        std::to_string(h.rows.size()) +
                        " iteration records, expected " +
                        std::to_string(h.t_max));
    hs.push_back(std::move(h));
  }
  check_compatible(hs);
  return hs;
}

std::string format_cell(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace

RunSummary summarize(const std::vector<fs::path> &history_paths) {
  const auto hs = load_completed(history_paths);
  RunSummary s;
  s.objective = hs.front().objective;
  s.sense = hs.front().sense;
  s.t_max = hs.front().t_max;

  std::vector<double> finals;
  for (const auto &h : hs) {
    RunOutcome o;
    o.seed = h.seed;
    o.ok = true;
    o.final_best = h.final_best;
    o.best_position = h.best_position;
    o.eval_count = h.eval_count;
    o.history_path = h.path;
    finals.push_back(*h.final_best);
    s.runs.push_back(std::move(o));
  }
  s.final_best = spread_of(finals);

  s.per_iteration.reserve(static_cast<std::size_t>(s.t_max));
  for (std::size_t t = 0; t < static_cast<std::size_t>(s.t_max); ++t) {
    std::vector<double> col;
    col.reserve(hs.size());
    for (const auto &h : hs)
      col.push_back(h.rows[t].best);
    s.per_iteration.push_back(spread_of(std::move(col)));
  }
  return s;
}

void emit_plot_data(const std::vector<fs::path> &history_paths,
                    const fs::path &out_path) {
  const auto hs = load_completed(history_paths);

  std::string header = "iteration";
  for (std::size_t k = 0; k < hs.size(); ++k)
    header += ",run" + std::to_string(k) + "_best";
  std::vector<std::size_t> swarm_cols(hs.size());
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const std::size_t m = hs[k].max_swarms();
    swarm_cols[k] = m > 1 ? m : 0;
    for (std::size_t j = 0; j < swarm_cols[k]; ++j)
      header += ",run" + std::to_string(k) + "_sbest" + std::to_string(j);
  }

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write plot data to " + out_path.string());
  out << header << '\n';
  const auto rows = static_cast<std::size_t>(hs.front().t_max);
  for (std::size_t t = 0; t < rows; ++t) {
    out << hs.front().rows[t].t;
    for (const auto &h : hs)
      out << ',' << format_cell(h.rows[t].best);
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const auto &sb = hs[k].rows[t].sbest;
      for (std::size_t j = 0; j < swarm_cols[k]; ++j) {
        out << ',';
        if (j < sb.size())
          out << format_cell(sb[j]);
      }
    }
    out << '\n';
  }
  out.flush();
  if (!out)
    throw std::runtime_error("write failed for " + out_path.string());
}

std::string summary_to_json(const RunSummary &s) {
  json runs = json::array();
  for (const auto &r : s.runs) {
    json j{{"seed", r.seed},
           {"status", r.ok ? "ok" : "failed"},
           {"evals", r.eval_count},
           {"history", r.history_path.filename().string()}};
    if (r.final_best)
      j["final_best"] = *r.final_best;
    if (!r.best_position.empty())
      j["best_position"] = r.best_position;
    if (!r.ok)
      j["error"] = r.error;
    if (r.wall_seconds)
      j["wall_seconds"] = *r.wall_seconds;
    runs.push_back(std::move(j));
  }
  json out{{"format", "mspso-summary/1"},
           {"objective", s.objective},
           {"sense", s.sense},
           {"t_max", s.t_max},
           {"runs", runs}};
  if (s.final_best)
    out["final_best"] = {{"median", s.final_best->median},
                         {"min", s.final_best->min},
                         {"max", s.final_best->max}};
  json per = json::array();
  for (std::size_t t = 0; t < s.per_iteration.size(); ++t)
    per.push_back({{"t", t + 1},
                   {"median", s.per_iteration[t].median},
                   {"min", s.per_iteration[t].min},
                   {"max", s.per_iteration[t].max}});
  out["per_iteration"] = per;
  return out.dump(2) + "\n";
}

fs::path history_file_name(std::uint64_t seed) {
  return "history_seed" + std::to_string(seed) + ".jsonl";
}

RunSummary run_experiment(const ExperimentConfig &config,
                          const ExperimentOptions &options) {
  if (const auto problems = validate_config(config); !problems.empty())
    throw ConfigFileError("<config>", problems);
  const Objective objective = make_objective(config);
  return run_experiment(config, objective, options);
}

namespace {

void prepare_output_dir(const fs::path &dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir))
      throw ConfigError("output path " + dir.string() +
                        " exists and is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force)
        throw ConfigError("output directory " + dir.string() +
                          " is not empty; pass --force to overwrite");
      for (const auto &entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if ((name.rfind("history_seed", 0) == 0 &&
             entry.path().extension() == ".jsonl") ||
            name == kSummaryFile || name == kPlotFile)
          fs::remove(entry.path());
      }
    }
  }
  fs::create_directories(dir);
}

RunOutcome execute_run(const ExperimentConfig &config,
                       const Objective &objective, std::uint64_t seed,
                       unsigned eval_parallelism, const fs::path &path) {
  RunOutcome outcome;
  outcome.seed = seed;
  outcome.history_path = path;
  const auto start = std::chrono::steady_clock::now();

  HistoryWriter writer(path, config, objective, seed);
  std::uint64_t evals = 0;
  RunOptions opts;
  opts.parallelism = eval_parallelism;
  opts.record_particle_fitness = config.record_particle_fitness;
  opts.observer.on_initialized = [&](const RunState &s) {
    evals = s.eval_count;
    writer.write_init(s);
  };
  opts.observer.on_iteration = [&](const IterationRecord &r, const RunState &) {
    evals = r.eval_count;
    writer.write_iteration(r);
  };
  try {
    const auto h = run(objective, config.population_size, config.stage_plan,
                       config.schedule, seed, opts);
    writer.write_success(h);
    outcome.ok = true;
    outcome.final_best = objective.to_raw(h.gbest_fitness);
    outcome.best_position = h.gbest_position;
    outcome.eval_count = h.eval_count;
  } catch (const EvaluationError &e) {
    // Evaluations of the failing batch were spent even though the record for
    // it never landed.
    outcome.error = e.what();
    outcome.eval_count = evals;
    writer.write_failure(e.what(), evals);
  } catch (const ConfigError &) {
    throw;
  } catch (const std::exception &e) {
    outcome.error = e.what();
    outcome.eval_count = evals;
    writer.write_failure(e.what(), evals);
  }
  outcome.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  return outcome;
}

} // namespace

RunSummary run_experiment(const ExperimentConfig &config,
                          const Objective &objective,
                          const ExperimentOptions &options) {
  if (const auto problems = validate_config(config); !problems.empty())
    throw ConfigFileError("<config>", problems);
  if (objective.dimension() != config.dimension)
    throw ConfigError("objective dimension " +
                      std::to_string(objective.dimension()) +
                      " does not match configured dimension " +
                      std::to_string(config.dimension));
  const fs::path dir = config.output_dir;
  prepare_output_dir(dir, options.force);

  const unsigned total = config.parallelism != 0
                             ? config.parallelism
                             : std::max(1u, std::thread::hardware_concurrency());
  const auto n_runs = config.seeds.size();
  const unsigned run_workers =
      static_cast<unsigned>(std::min<std::size_t>(total, n_runs));
  const unsigned eval_parallelism = std::max(1u, total / run_workers);

  std::vector<RunOutcome> outcomes(n_runs);
  std::vector<std::exception_ptr> fatal(n_runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_runs; i = next++) {
      const auto seed = config.seeds[i];
      try {
        outcomes[i] = execute_run(config, objective, seed, eval_parallelism,
                                  dir / history_file_name(seed));
      } catch (...) {
        fatal[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < run_workers; ++w)
      pool.emplace_back(worker);
    worker();
  }
  for (const auto &e : fatal)
    if (e)
      std::rethrow_exception(e);

  std::vector<fs::path> completed;
  for (const auto &o : outcomes)
    if (o.ok)
      completed.push_back(o.history_path);

  RunSummary summary;
  if (!completed.empty()) {
    summary = summarize(completed);
    emit_plot_data(completed, dir / kPlotFile);
  } else {
    summary.objective = objective.name;
    summary.sense = objective.sense == Sense::maximize ? "maximize" : "minimize";
    summary.t_max = config.t_max;
  }
  // Summary rows come back in config seed order, including failed runs.
  summary.runs = outcomes;

  std::ofstream out(dir / kSummaryFile, std::ios::binary | std::ios::trunc);
  out << summary_to_json(summary);
  if (!out)
    throw std::runtime_error("cannot write " + (dir / kSummaryFile).string());
  return summary;
}

} // namespace mspso

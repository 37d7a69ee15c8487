#include "mspso/history.hpp"

#include "json.hpp"

#include <algorithm>

namespace mspso {

using nlohmann::json;

namespace {

json schedule_json(const ScheduleSpec &s) {
  return json{{"kind", std::string(to_string(s.kind))},
              {"omega", s.omega_const},
              {"c1", s.c1_const},
              {"c2", s.c2_const},
              {"omega_max", s.omega_max},
              {"omega_min", s.omega_min},
              {"c1_max", s.c1_max},
              {"c1_min", s.c1_min},
              {"c2_max", s.c2_max},
              {"c2_min", s.c2_min}};
}

double to_raw(Sense sense, double v) {
  return sense == Sense::maximize ? -v : v;
}

std::vector<double> to_raw(Sense sense, const std::vector<double> &v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [&](double x) { return to_raw(sense, x); });
  return out;
}

} // namespace

HistoryWriter::HistoryWriter(const std::filesystem::path &path,
                             const ExperimentConfig &config,
                             const Objective &objective, std::uint64_t seed)
    : m_out(path, std::ios::binary | std::ios::trunc), m_path(path),
      m_sense(objective.sense) {
  if (!m_out)
    throw std::runtime_error("cannot write history file " + path.string());
  json header{
      {"type", "header"},
      {"format", kHistoryFormat},
      {"seed", seed},
      {"config_digest", config_digest(config)},
      {"objective", objective.name},
      {"sense", objective.sense == Sense::maximize ? "maximize" : "minimize"},
      {"dimension", objective.dimension()},
      {"algorithm", std::string(to_string(config.algorithm))},
      {"population_size", config.population_size},
      {"t_max", config.t_max},
      {"stage_plan", config.stage_plan.to_string()},
      {"schedule", schedule_json(config.schedule)}};
  write_line(header.dump());
}

void HistoryWriter::write_line(const std::string &line) {
  m_out << line << '\n';
  m_out.flush();
  if (!m_out)
    throw std::runtime_error("write failed for " + m_path.string());
}

void HistoryWriter::write_init(const RunState &state) {
  std::vector<double> sbest;
  for (const auto &s : state.swarms)
    sbest.push_back(s.sbest_fitness);
  json rec{{"type", "init"},
           {"best", to_raw(m_sense, state.gbest_fitness)},
           {"sbest", to_raw(m_sense, sbest)},
           {"evals", state.eval_count}};
  write_line(rec.dump());
}

void HistoryWriter::write_iteration(const IterationRecord &r) {
  json rec{{"type", "iteration"},
           {"t", r.t},
           {"stage", r.stage},
           {"best", to_raw(m_sense, r.gbest_fitness)},
           {"gbest", r.gbest_fitness},
           {"sbest", to_raw(m_sense, r.sbest_fitness)},
           {"omega", r.coefficients.omega},
           {"c1", r.coefficients.c1},
           {"c2", r.coefficients.c2},
           {"evals", r.eval_count}};
  if (!r.particle_fitness.empty())
    rec["particle_fitness"] = to_raw(m_sense, r.particle_fitness);
  write_line(rec.dump());
}

void HistoryWriter::write_success(const RunHistory &h) {
  json rec{{"type", "final"},
           {"status", "ok"},
           {"best", to_raw(m_sense, h.gbest_fitness)},
           {"gbest", h.gbest_fitness},
           {"best_position", h.gbest_position},
           {"evals", h.eval_count}};
  write_line(rec.dump());
}

void HistoryWriter::write_failure(const std::string &error,
                                  std::uint64_t eval_count) {
  json rec{{"type", "final"},
           {"status", "failed"},
           {"error", error},
           {"evals", eval_count}};
  write_line(rec.dump());
}

std::size_t LoadedHistory::max_swarms() const {
  std::size_t m = 0;
  for (const auto &r : rows)
    m = std::max(m, r.sbest.size());
  return m;
}

LoadedHistory load_history(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open history file " + path.string());
  LoadedHistory h;
  h.path = path;
  h.status = "incomplete";
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    try {
      const json rec = json::parse(line);
      const std::string type = rec.at("type");
      if (type == "header") {
        if (rec.at("format") != kHistoryFormat)
          throw ConfigError(where + ": unsupported history format");
        h.seed = rec.at("seed");
        h.config_digest = rec.at("config_digest");
        h.objective = rec.at("objective");
        h.sense = rec.at("sense");
        h.dimension = rec.at("dimension");
        h.algorithm = rec.at("algorithm");
        h.population_size = rec.at("population_size");
        h.t_max = rec.at("t_max");
        h.stage_plan = rec.at("stage_plan");
        have_header = true;
      } else if (!have_header) {
        throw ConfigError(where + ": record before header");
      } else if (type == "init") {
        // bests before the first iteration; not part of the convergence rows
      } else if (type == "iteration") {
        HistoryRow row;
        row.t = rec.at("t");
        row.stage = rec.at("stage");
        row.best = rec.at("best");
        row.sbest = rec.at("sbest").get<std::vector<double>>();
        row.evals = rec.at("evals");
        h.rows.push_back(std::move(row));
      } else if (type == "final") {
        h.status = rec.at("status");
        h.eval_count = rec.at("evals");
        if (h.status == "ok") {
          h.final_best = rec.at("best").get<double>();
          h.best_position = rec.at("best_position").get<std::vector<double>>();
        } else {
          h.error = rec.value("error", "");
        }
      } else {
        throw ConfigError(where + ": unknown record type '" + type + "'");
      }
    } catch (const json::exception &e) {
      throw ConfigError(where + ": malformed record (" + e.what() + ")");
    }
  }
  if (!have_header)
    throw ConfigError(path.string() + ": missing header record");
  return h;
}

} // namespace mspso

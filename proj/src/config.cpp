#include "mspso/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mspso/benchmarks.hpp"
#include "mspso/well_proxy.hpp"

namespace mspso {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
  case Algorithm::canonical: return "canonical";
  case Algorithm::ldiw: return "ldiw";
  case Algorithm::tvac: return "tvac";
  case Algorithm::two_stage: return "2spso";
  case Algorithm::tvac_two_stage: return "tvac-2spso";
  case Algorithm::multi_stage: return "ms2pso";
  }
  throw ConfigError("unknown algorithm");
}

const std::vector<Algorithm> &all_algorithms() {
  static const std::vector<Algorithm> all{
      Algorithm::canonical, Algorithm::ldiw,           Algorithm::tvac,
      Algorithm::two_stage, Algorithm::tvac_two_stage, Algorithm::multi_stage};
  return all;
}

Algorithm algorithm_from_string(std::string_view name) {
  for (auto a : all_algorithms())
    if (to_string(a) == name)
      return a;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected canonical, ldiw, tvac, 2spso, tvac-2spso "
                    "or ms2pso)");
}

Preset preset_for(Algorithm algorithm, int t_max) {
  if (t_max < 1)
    throw ConfigError("t_max must be at least 1");
  const int fifth = std::max(1, t_max / 5);
  switch (algorithm) {
  case Algorithm::canonical:
    return {ScheduleSpec::constant_defaults(), {{{1, t_max}}}};
  case Algorithm::ldiw:
    return {ScheduleSpec::ldiw_defaults(), {{{1, t_max}}}};
  case Algorithm::tvac:
    return {ScheduleSpec::tvac_defaults(), {{{1, t_max}}}};
  case Algorithm::two_stage:
  case Algorithm::tvac_two_stage: {
    if (t_max < 2)
      throw ConfigError("two-stage presets need t_max >= 2");
    const auto sched = algorithm == Algorithm::two_stage
                           ? ScheduleSpec::constant_defaults()
                           : ScheduleSpec::tvac_defaults();
    return {sched, {{{5, fifth}, {1, t_max - fifth}}}};
  }
  case Algorithm::multi_stage:
    if (t_max < 4)
      throw ConfigError("the ms2pso preset needs t_max >= 4");
    {
      const int span = std::min(fifth, (t_max - 1) / 3);
      return {ScheduleSpec::tvac_defaults(),
              {{{8, span}, {4, span}, {2, span}, {1, t_max - 3 * span}}}};
    }
  }
  throw ConfigError("unknown algorithm");
}

ExperimentConfig default_config(Algorithm algorithm) {
  ExperimentConfig c;
  c.algorithm = algorithm;
  const auto p = preset_for(algorithm, c.t_max);
  c.schedule = p.schedule;
  c.stage_plan = p.stage_plan;
  return c;
}

std::vector<std::string> validate_config(const ExperimentConfig &c) {
  std::vector<std::string> out;
  const bool proxy = c.objective == "well_proxy";
  if (!proxy && !is_benchmark(c.objective))
    out.push_back("objective: unknown objective '" + c.objective + "'");
  if (c.dimension < 1)
    out.emplace_back("dimension: must be at least 1");
  if (proxy && c.dimension != 90)
    out.emplace_back("dimension: well_proxy has exactly 90 variables");
  if (c.population_size < 1)
    out.emplace_back("population_size: must be at least 1");
  if (c.t_max < 1)
    out.emplace_back("t_max: must be at least 1");
  try {
    c.schedule.validate();
  } catch (const ConfigError &e) {
    out.push_back(e.what());
  }
  for (const auto &v : c.stage_plan.violations(c.population_size, c.t_max))
    out.push_back("stage_plan: " + v);

  const auto n = c.stage_plan.stages.size();
  switch (c.algorithm) {
  case Algorithm::canonical:
  case Algorithm::ldiw:
  case Algorithm::tvac:
    if (n != 1 || c.stage_plan.stages[0].swarm_count != 1)
      out.push_back("algorithm/stage_plan mismatch: " +
                    std::string(to_string(c.algorithm)) +
                    " runs a single swarm for t_max iterations");
    break;
  case Algorithm::two_stage:
  case Algorithm::tvac_two_stage:
    if (n != 2)
      out.push_back("algorithm/stage_plan mismatch: " +
                    std::string(to_string(c.algorithm)) +
                    " requires exactly 2 stages, got " + std::to_string(n));
    break;
  case Algorithm::multi_stage:
    if (n < 3)
      out.push_back("algorithm/stage_plan mismatch: ms2pso requires at least "
                    "3 stages, got " +
                    std::to_string(n));
    break;
  }

  if (c.seeds.empty())
    out.emplace_back("seeds: at least one seed is required");
  if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() !=
      c.seeds.size())
    out.emplace_back("seeds: duplicate seeds would overwrite each other");
  if (c.output_dir.empty())
    out.emplace_back("output_dir: must not be empty");
  return out;
}

std::vector<std::string> config_warnings(const ExperimentConfig &c) {
  std::vector<std::string> out;
  if (c.seeds.size() < 2)
    out.emplace_back("only one seed configured; at least 2 repetitions are "
                     "recommended to separate algorithm effects from "
                     "initialization luck");
  return out;
}

ConfigFileError::ConfigFileError(std::string origin,
                                 std::vector<std::string> problems)
    : ConfigError([&] {
        std::string msg = origin + ": invalid configuration";
        for (const auto &p : problems)
          msg += "\n  " + p;
        return msg;
      }()),
      m_problems(std::move(problems)) {}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string &v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("'" + v + "' is not a number");
  return out;
}

std::uint64_t parse_u64(const std::string &v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("'" + v + "' is not a non-negative integer");
  return out;
}

int parse_int(const std::string &v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("'" + v + "' is not an integer");
  return out;
}

bool parse_bool(const std::string &v) {
  if (v == "true")
    return true;
  if (v == "false")
    return false;
  throw ConfigError("'" + v + "' is not true/false");
}

struct Entry {
  std::string value;
  int line = 0;
};

const std::vector<std::string> &known_keys() {
  static const std::vector<std::string> keys{
      "objective",        "dimension",        "proxy_fixture",
      "algorithm",        "population_size",  "t_max",
      "seeds",            "stage_plan",       "output_dir",
      "parallelism",      "record_particle_fitness",
      "schedule.kind",    "schedule.omega",   "schedule.c1",
      "schedule.c2",      "schedule.omega_max", "schedule.omega_min",
      "schedule.c1_max",  "schedule.c1_min",  "schedule.c2_max",
      "schedule.c2_min"};
  return keys;
}

} // namespace

ExperimentConfig parse_config(const std::string &text,
                              const std::string &origin) {
  std::vector<std::string> problems;
  std::map<std::string, Entry> entries;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    const std::string at = "line " + std::to_string(lineno);
    if (eq == std::string::npos) {
      problems.push_back(at + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto &keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      problems.push_back(at + ": " + key + ": unknown key");
      continue;
    }
    if (auto it = entries.find(key); it != entries.end()) {
      problems.push_back(at + ": " + key + ": duplicate (first set on line " +
                         std::to_string(it->second.line) + ")");
      continue;
    }
    if (value.empty()) {
      problems.push_back(at + ": " + key + ": missing value");
      continue;
    }
    entries[key] = {value, lineno};
  }

  ExperimentConfig c;
  auto apply = [&](const std::string &key, auto &&setter) {
    const auto it = entries.find(key);
    if (it == entries.end())
      return;
    try {
      setter(it->second.value);
    } catch (const ConfigError &e) {
      problems.push_back("line " + std::to_string(it->second.line) + ": " +
                         key + ": " + e.what());
    }
  };

  // The algorithm and budget pick the preset; everything else overrides it.
  apply("algorithm", [&](const std::string &v) {
    c.algorithm = algorithm_from_string(v);
  });
  apply("t_max", [&](const std::string &v) {
    c.t_max = parse_int(v);
    if (c.t_max < 1)
      throw ConfigError("must be at least 1");
  });
  try {
    const auto p = preset_for(c.algorithm, c.t_max);
    c.schedule = p.schedule;
    c.stage_plan = p.stage_plan;
  } catch (const ConfigError &e) {
    if (!entries.count("stage_plan"))
      problems.push_back(std::string("algorithm: ") + e.what());
  }

  apply("objective", [&](const std::string &v) { c.objective = v; });
  if (c.objective == "well_proxy")
    c.dimension = 90;
  apply("dimension", [&](const std::string &v) {
    const auto d = parse_u64(v);
    if (d < 1)
      throw ConfigError("must be at least 1");
    c.dimension = static_cast<std::size_t>(d);
  });
  apply("proxy_fixture", [&](const std::string &v) { c.proxy_fixture = v; });
  apply("population_size", [&](const std::string &v) {
    c.population_size = static_cast<std::size_t>(parse_u64(v));
  });
  apply("seeds", [&](const std::string &v) {
    c.seeds.clear();
    std::istringstream s(v);
    std::string tok;
    while (s >> tok)
      c.seeds.push_back(parse_u64(tok));
  });
  apply("stage_plan", [&](const std::string &v) {
    c.stage_plan = StagePlan::parse(v);
  });
  apply("output_dir", [&](const std::string &v) { c.output_dir = v; });
  apply("parallelism", [&](const std::string &v) {
    if (v == "auto") {
      c.parallelism = 0;
      return;
    }
    const int p = parse_int(v);
    if (p < 1)
      throw ConfigError("must be 'auto' or a positive integer");
    c.parallelism = static_cast<unsigned>(p);
  });
  apply("record_particle_fitness", [&](const std::string &v) {
    c.record_particle_fitness = parse_bool(v);
  });
  apply("schedule.kind", [&](const std::string &v) {
    c.schedule.kind = schedule_kind_from_string(v);
  });
  const std::pair<const char *, double ScheduleSpec::*> numeric[] = {
      {"schedule.omega", &ScheduleSpec::omega_const},
      {"schedule.c1", &ScheduleSpec::c1_const},
      {"schedule.c2", &ScheduleSpec::c2_const},
      {"schedule.omega_max", &ScheduleSpec::omega_max},
      {"schedule.omega_min", &ScheduleSpec::omega_min},
      {"schedule.c1_max", &ScheduleSpec::c1_max},
      {"schedule.c1_min", &ScheduleSpec::c1_min},
      {"schedule.c2_max", &ScheduleSpec::c2_max},
      {"schedule.c2_min", &ScheduleSpec::c2_min}};
  for (const auto &[key, field] : numeric)
    apply(key, [&, field = field](const std::string &v) {
      c.schedule.*field = parse_double(v);
    });

  if (problems.empty())
    problems = validate_config(c);
  if (!problems.empty())
    throw ConfigFileError(origin, std::move(problems));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigFileError(path.string(), {"cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string write_config(const ExperimentConfig &c) {
  std::ostringstream out;
  out << "objective = " << c.objective << '\n'
      << "dimension = " << c.dimension << '\n';
  if (!c.proxy_fixture.empty())
    out << "proxy_fixture = " << c.proxy_fixture << '\n';
  out << "algorithm = " << to_string(c.algorithm) << '\n'
      << "population_size = " << c.population_size << '\n'
      << "t_max = " << c.t_max << '\n'
      << "stage_plan = " << c.stage_plan.to_string() << '\n'
      << "seeds =";
  for (auto s : c.seeds)
    out << ' ' << s;
  out << '\n'
      << "schedule.kind = " << to_string(c.schedule.kind) << '\n'
      << "schedule.omega = " << format_double(c.schedule.omega_const) << '\n'
      << "schedule.c1 = " << format_double(c.schedule.c1_const) << '\n'
      << "schedule.c2 = " << format_double(c.schedule.c2_const) << '\n'
      << "schedule.omega_max = " << format_double(c.schedule.omega_max) << '\n'
      << "schedule.omega_min = " << format_double(c.schedule.omega_min) << '\n'
      << "schedule.c1_max = " << format_double(c.schedule.c1_max) << '\n'
      << "schedule.c1_min = " << format_double(c.schedule.c1_min) << '\n'
      << "schedule.c2_max = " << format_double(c.schedule.c2_max) << '\n'
      << "schedule.c2_min = " << format_double(c.schedule.c2_min) << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "parallelism = "
      << (c.parallelism == 0 ? std::string("auto")
                             : std::to_string(c.parallelism))
      << '\n'
      << "record_particle_fitness = "
      << (c.record_particle_fitness ? "true" : "false") << '\n';
  return out.str();
}

std::string config_digest(const ExperimentConfig &config) {
  ExperimentConfig c = config;
  c.seeds = {0};
  c.output_dir = "-";
  c.parallelism = 1;
  const std::string text = write_config(c);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Objective make_objective(const ExperimentConfig &config) {
  if (config.objective == "well_proxy") {
    const auto path = config.proxy_fixture.empty()
                          ? default_well_proxy_fixture()
                          : std::filesystem::path(config.proxy_fixture);
    return make_well_proxy_objective(load_well_proxy(path));
  }
  return make_benchmark(config.objective, config.dimension);
}

} // namespace mspso

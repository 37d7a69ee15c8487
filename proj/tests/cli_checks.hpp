#pragma once

/// CLI checks shared by the unit suite and the acceptance runner. Each
/// returns a list of human-readable failures; empty means pass.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "mspso/config.hpp"
#include "mspso/well_proxy.hpp"

namespace cli_checks {

namespace fs = std::filesystem;

inline std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path &p, const std::string &text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Runs the CLI with `args`; stdout goes to `out` when given.
inline int run_cli(const std::string &args, const fs::path &out = {}) {
  const std::string cmd = std::string("\"") + MSPSO_CLI + "\" " + args + " >" +
                          (out.empty() ? std::string("/dev/null") : "\"" + out.string() + "\"") +
                          " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline fs::path fresh_dir(const std::string &name) {
  const auto p = fs::temp_directory_path() / ("mspso_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// A fixture whose sweet spots overflow every placement score to infinity.
inline std::string overflowing_fixture() {
  std::istringstream in(slurp(MSPSO_FIXTURE));
  std::string out;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("sweet_spot", 0) == 0)
      line = line.substr(0, line.find_last_of(' ')) + " 1e308";
    if (line.rfind("movable_pi_scale", 0) == 0)
      line = "movable_pi_scale = 1e308";
    if (line.rfind("reference.", 0) == 0)
      continue;
    out += line + "\n";
  }
  return out;
}

inline std::vector<std::string> exit_code_failures() {
  const auto dir = fresh_dir("exit_codes");
  spit(dir / "ok.cfg", "objective = sphere\ndimension = 2\npopulation_size = 8\n"
                       "t_max = 5\nstage_plan = 1x5\nseeds = 1 2\n");
  spit(dir / "bad_key.cfg", "objective = sphere\nnot_a_key = 3\n");
  spit(dir / "bad_plan.cfg", "algorithm = 2spso\nstage_plan = 8x25 4x50 1x50\n");
  spit(dir / "bad_value.cfg", "t_max = many\n");
  spit(dir / "overflow.fixture", overflowing_fixture());
  spit(dir / "fail.cfg", "objective = well_proxy\ndimension = 90\n"
                         "proxy_fixture = " + (dir / "overflow.fixture").string() +
                         "\npopulation_size = 4\nt_max = 3\nstage_plan = 1x3\n"
                         "seeds = 1 2\n");
  spit(dir / "not_history.jsonl", "this is not json\n");

  const auto d = "\"" + dir.string() + "\"";
  struct Case {
    std::string args;
    int expected;
  };
  const std::vector<Case> cases{
      {"run " + d + "/ok.cfg --output " + d + "/out_ok", 0},
      {"run " + d + "/ok.cfg --output " + d + "/out_ok", 2}, // refuses overwrite
      {"run " + d + "/ok.cfg --output " + d + "/out_ok --force", 0},
      {"run " + d + "/ok.cfg --output " + d + "/out_p --parallelism 3", 0},
      {"summarize " + d + "/out_ok/history_seed1.jsonl " + d +
           "/out_ok/history_seed2.jsonl",
       0},
      {"plot-data " + d + "/out_ok/history_seed1.jsonl -o " + d + "/plot.csv", 0},
      {"presets", 0},
      {"--help", 0},
      {"run " + d + "/fail.cfg --output " + d + "/out_fail", 1},
      {"plot-data " + d + "/out_ok/history_seed1.jsonl -o " + d +
           "/no/such/dir/plot.csv",
       1},
      {"run " + d + "/bad_key.cfg --output " + d + "/o1", 2},
      {"run " + d + "/bad_plan.cfg --output " + d + "/o2", 2},
      {"run " + d + "/bad_value.cfg --output " + d + "/o3", 2},
      {"run " + d + "/missing.cfg", 2},
      {"run " + d + "/ok.cfg --parallelism 0", 2},
      {"summarize " + d + "/not_history.jsonl", 2},
      {"summarize", 2},
      {"", 2},
      {"frobnicate", 2},
  };
  std::vector<std::string> failures;
  for (const auto &c : cases) {
    const int got = run_cli(c.args);
    if (got != c.expected)
      failures.push_back("`mspso " + c.args + "` exited " + std::to_string(got) +
                         ", expected " + std::to_string(c.expected));
  }
  if (fs::exists(dir / "out_fail")) {
    const auto h = slurp(dir / "out_fail" / "history_seed1.jsonl");
    if (h.find("\"status\":\"failed\"") == std::string::npos)
      failures.emplace_back("failed run left no failure record");
  } else {
    failures.emplace_back("failed run wrote no output directory");
  }
  for (const char *o : {"o1", "o2", "o3"})
    if (fs::exists(dir / o))
      failures.push_back(std::string("invalid config still created ") + o);
  if (slurp(dir / "out_ok" / "history_seed1.jsonl") !=
      slurp(dir / "out_p" / "history_seed1.jsonl"))
    failures.emplace_back("--parallelism changed the history");
  fs::remove_all(dir);
  return failures;
}

/// Every preset the CLI prints parses back to the library default.
inline std::vector<std::string> preset_round_trip_failures() {
  const auto dir = fresh_dir("presets");
  std::vector<std::string> failures;
  if (run_cli("presets", dir / "presets.txt") != 0)
    failures.emplace_back("presets exited non-zero");
  const std::string text = slurp(dir / "presets.txt");
  std::size_t seen = 0;
  for (auto alg : mspso::all_algorithms()) {
    const std::string tag = "# " + std::string(mspso::to_string(alg)) + "\n";
    const auto start = text.find(tag);
    if (start == std::string::npos) {
      failures.push_back("presets is missing " + tag);
      continue;
    }
    const auto body_start = start + tag.size();
    const auto end = text.find("\n# ", body_start);
    const auto body = text.substr(body_start, end == std::string::npos
                                                  ? std::string::npos
                                                  : end - body_start);
    try {
      if (!(mspso::parse_config(body) == mspso::default_config(alg)))
        failures.push_back(std::string(mspso::to_string(alg)) +
                           " preset does not round-trip");
    } catch (const std::exception &e) {
      failures.push_back(std::string(mspso::to_string(alg)) + ": " + e.what());
    }
    ++seen;
  }
  if (seen != 6)
    failures.emplace_back("expected six presets");
  fs::remove_all(dir);
  return failures;
}

/// Plot tables for a small fixed experiment against the frozen copies in
/// tests/golden. Set MSPSO_UPDATE_GOLDEN=1 to rewrite them.
inline std::vector<std::string> golden_failures() {
  const auto dir = fresh_dir("golden");
  const fs::path golden = MSPSO_GOLDEN_DIR;
  const bool update = std::getenv("MSPSO_UPDATE_GOLDEN") != nullptr;
  std::vector<std::string> failures;

  const std::string common = "objective = sphere\ndimension = 2\npopulation_size = 8\n"
                             "t_max = 10\nseeds = 1 2\n";
  spit(dir / "canonical.cfg", common + "algorithm = canonical\nstage_plan = 1x10\n");
  spit(dir / "ms2pso.cfg", common + "algorithm = ms2pso\nschedule.kind = tvac\n"
                                    "stage_plan = 8x2 4x2 2x2 1x4\n");
  const auto d = "\"" + dir.string() + "\"";
  if (run_cli("run " + d + "/canonical.cfg --output " + d + "/canonical") != 0 ||
      run_cli("run " + d + "/ms2pso.cfg --output " + d + "/ms2pso") != 0) {
    fs::remove_all(dir);
    return {"golden experiments did not run"};
  }
  if (run_cli("plot-data " + d + "/canonical/history_seed1.jsonl " + d +
              "/ms2pso/history_seed1.jsonl " + d + "/ms2pso/history_seed2.jsonl -o " +
              d + "/mixed.csv") != 0)
    failures.emplace_back("plot-data over mixed histories failed");

  const std::vector<std::pair<std::string, fs::path>> outputs{
      {"canonical.csv", dir / "canonical" / "convergence.csv"},
      {"ms2pso.csv", dir / "ms2pso" / "convergence.csv"},
      {"mixed.csv", dir / "mixed.csv"},
  };
  for (const auto &[name, produced] : outputs) {
    const auto text = slurp(produced);
    if (update) {
      spit(golden / name, text);
    } else if (!fs::exists(golden / name)) {
      failures.push_back("missing golden file " + name);
    } else if (slurp(golden / name) != text) {
      failures.push_back(name + " differs from its golden copy");
    }
  }
  fs::remove_all(dir);
  return failures;
}

} // namespace cli_checks

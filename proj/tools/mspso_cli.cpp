// Command-line front end: run experiments, summarize histories, export
// convergence tables and list the algorithm presets.
//
// Exit codes: 0 success, 1 at least one run failed (or an I/O failure),
// 2 invalid configuration or usage.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mspso/config.hpp"
#include "mspso/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRunFailed = 1;
constexpr int kInvalid = 2;

int cmd_run(const std::string &config_path, bool force, int parallelism,
            const std::string &output) {
  mspso::ExperimentConfig config;
  try {
    config = mspso::load_config(config_path);
    if (parallelism > 0)
      config.parallelism = static_cast<unsigned>(parallelism);
    if (!output.empty())
      config.output_dir = output;
  } catch (const mspso::ConfigError &e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  }
  for (const auto &w : mspso::config_warnings(config))
    std::cerr << "warning: " << w << '\n';

  mspso::RunSummary summary;
  try {
    summary = mspso::run_experiment(config, {force});
  } catch (const mspso::ConfigError &e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailed;
  }

  for (const auto &r : summary.runs) {
    std::cout << "seed " << r.seed << ": ";
    if (r.ok)
      std::cout << "best " << *r.final_best << " after " << r.eval_count
                << " evaluations\n";
    else
      std::cout << "FAILED (" << r.error << ")\n";
  }
  if (summary.final_best)
    std::cout << "final best median " << summary.final_best->median
              << " [min " << summary.final_best->min << ", max "
              << summary.final_best->max << "]\n";
  std::cout << "outputs in " << config.output_dir << '\n';
  return summary.all_ok() ? kOk : kRunFailed;
}

int cmd_summarize(const std::vector<std::string> &paths,
                  const std::string &out_path) {
  try {
    const auto s = mspso::summarize({paths.begin(), paths.end()});
    const auto text = mspso::summary_to_json(s);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      out << text;
      if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return kRunFailed;
      }
    }
  } catch (const mspso::ConfigError &e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}

int cmd_plot_data(const std::vector<std::string> &paths,
                  const std::string &out_path) {
  try {
    mspso::emit_plot_data({paths.begin(), paths.end()}, out_path);
  } catch (const mspso::ConfigError &e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailed;
  }
  return kOk;
}

int cmd_presets() {
  bool first = true;
  for (auto a : mspso::all_algorithms()) {
    if (!first)
      std::cout << '\n';
    first = false;
    std::cout << "# " << mspso::to_string(a) << '\n'
              << mspso::write_config(mspso::default_config(a));
  }
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multi-stage multi-swarm PSO experiment runner"};
  app.require_subcommand(1);

  std::string config_path, output;
  bool force = false;
  int parallelism = 0;
  auto *run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_flag("--force", force, "Overwrite a non-empty output directory");
  run->add_option("--parallelism", parallelism, "Worker threads (overrides config)")
      ->check(CLI::PositiveNumber);
  run->add_option("--output", output, "Output directory (overrides config)");

  std::vector<std::string> sum_paths;
  std::string sum_out;
  auto *sum = app.add_subcommand("summarize", "Cross-run statistics from history files");
  sum->add_option("histories", sum_paths, "History files")->required();
  sum->add_option("-o,--output", sum_out, "Write the summary here instead of stdout");

  std::vector<std::string> plot_paths;
  std::string plot_out;
  auto *plot = app.add_subcommand("plot-data", "Convergence table (CSV) from history files");
  plot->add_option("histories", plot_paths, "History files")->required();
  plot->add_option("-o,--output", plot_out, "CSV file to write")->required();

  auto *presets = app.add_subcommand("presets", "List the named algorithm presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (*run)
    return cmd_run(config_path, force, parallelism, output);
  if (*sum)
    return cmd_summarize(sum_paths, sum_out);
  if (*plot)
    return cmd_plot_data(plot_paths, plot_out);
  if (*presets)
    return cmd_presets();
  return kInvalid;
}

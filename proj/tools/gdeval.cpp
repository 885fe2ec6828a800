// Command-line front end: batch runs, analysis, and report emission.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gdeval/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"goal-directedness evaluation harness"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string agent_id;
  std::vector<std::string> tasks;
  std::vector<int> blocks;
  int seeds = -1;
  std::string prompt;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "execute a task matrix");
  run_cmd->add_option("--config", config_path, "run config JSON file")
      ->required();
  run_cmd->add_option("--agent", agent_id,
                      "agent shorthand: random | oracle | noisy");
  run_cmd->add_option("--tasks", tasks, "task ids (overrides config)");
  run_cmd->add_option("--blocks", blocks, "block counts (overrides config)")
      ->delimiter(',');
  run_cmd->add_option("--seeds", seeds, "seed count (overrides config)");
  run_cmd->add_option("--prompt", prompt,
                      "prompt variant: neutral | motivated | demotivated");
  run_cmd->add_option("--out", out_dir, "output directory (overrides config)");

  // analyze
  std::string in_dir;
  int mc_iterations = 10000;
  int bootstrap = 2000;
  std::string profiles_from;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "build profiles, simulate, estimate GD");
  analyze_cmd->add_option("--in", in_dir, "directory with records.jsonl")
      ->required();
  analyze_cmd->add_option("--mc-iterations", mc_iterations,
                          "Monte Carlo iterations per task and stratum");
  analyze_cmd->add_option("--bootstrap", bootstrap, "bootstrap replicates");
  analyze_cmd->add_option(
      "--profiles-from", profiles_from,
      "take capability profiles from another run's subtask records");

  // report
  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "emit CSV/JSON tables");
  report_cmd->add_option("--in", report_dir, "directory with analysis.json")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      gdeval::RunConfig config = gdeval::load_run_config(config_path);
      if (!agent_id.empty()) config.agent = {{"kind", agent_id}};
      if (!tasks.empty()) config.tasks = tasks;
      if (!blocks.empty()) config.blocks = blocks;
      if (seeds > 0) config.seeds = seeds;
      if (!prompt.empty()) config.variant = prompt;
      if (!out_dir.empty()) config.out_dir = out_dir;
      config.validate();
      auto records = gdeval::run(config);
      std::printf("%zu records in %s\n", records.size(),
                  config.out_dir.c_str());
    } else if (analyze_cmd->parsed()) {
      gdeval::AnalyzeOptions opt;
      opt.mc_iterations = mc_iterations;
      opt.bootstrap = bootstrap;
      opt.profiles_from = profiles_from;
      auto bundle = gdeval::analyze(in_dir, opt);
      for (const auto& w : bundle.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
      for (const auto& t : bundle.tasks) {
        if (!t.aggregate.valid) continue;
        std::printf("%s: GD %.3f [%.3f, %.3f]\n", t.task.c_str(),
                    t.aggregate.gd, t.aggregate.ci_low, t.aggregate.ci_high);
      }
      std::printf("analysis written to %s/analysis.json\n", in_dir.c_str());
    } else if (report_cmd->parsed()) {
      gdeval::report(report_dir);
      std::printf("reports written to %s\n", report_dir.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

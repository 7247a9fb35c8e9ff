#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lab/runner.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for random walks in random scenery"};
  app.set_version_flag("--version", std::string(lab::kToolVersion));
  app.require_subcommand(1);

  CliArgs args;
  for (const std::string& name : lab::kSubcommands) {
    CLI::App* cmd = app.add_subcommand(name, name + " run");
    cmd->add_option("--config", args.config_path, "experiment config JSON")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--threads", args.threads,
                    "worker threads (0: RWRS_LAB_THREADS env, else cores)");
    cmd->add_option("--seed", args.seed, "override the config base seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string subcommand = app.get_subcommands().front()->get_name();
    rwrs::ExperimentConfig config = lab::parse_config_file(args.config_path);
    if (args.seed_set) config.base_seed = args.seed;

    rwrs::ExecOptions opts;
    opts.threads = args.threads;
    const lab::RunResult result = lab::run_subcommand(
        subcommand, config, args.out_dir, opts, args.config_path);

    if (result.exit_code != 0) {
      std::cerr << "acceptance rules failed:";
      for (const std::string& name : result.report.failed_rules()) {
        std::cerr << ' ' << name;
      }
      std::cerr << " (see " << result.summary_path.string() << ")\n";
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

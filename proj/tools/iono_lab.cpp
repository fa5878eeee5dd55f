// iono-lab: experiment runner for the ionocraft simulator.
#include "iono/harness/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace iono::harness;
  CLI::App app{"Ionocraft yaw-control experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  RunOptions opt;
  std::string out_dir;

  for (const char* name : {"lie-sweep", "analyze", "mbrl-train", "mbrl-eval", "mimic"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_flag("--paper-scale", opt.paper_scale, "use the full seed count");
    sub->add_flag("--force", opt.force, "overwrite existing results");
    sub->add_option("--model", opt.model_path, "model file for mbrl-eval");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  if (!out_dir.empty()) opt.out_dir = out_dir;

  try {
    const ExperimentConfig cfg = load_config(config_path);
    run_command(experiment_from_string(sub->get_name()), cfg, opt);
  } catch (const iono::IoError& e) {
    std::cerr << "iono-lab: " << e.what() << '\n';
    return kExitIo;
  } catch (const iono::ConfigError& e) {
    std::cerr << "iono-lab: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const iono::DomainError& e) {
    std::cerr << "iono-lab: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sdlab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sdlab: strong-convergence experiments for semi-discrete SDE schemes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  unsigned workers = 0;
  std::uint64_t seed = 0;
  std::string error_mode;
  bool force_tem_step = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config file")->required();
  };
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--workers", workers, "Worker threads (overrides experiment.workers)")
        ->check(CLI::Range(1u, 4096u));
    cmd->add_option("--seed", seed, "Seed (overrides experiment.seed)");
    cmd->add_flag("--force-tem-step", force_tem_step,
                  "Run TEM above its (8 c_bar)^(-2/epsilon2) step bound");
  };

  auto* run = app.add_subcommand("run", "Run the strong-error experiment and write the results CSV");
  add_common(run);
  add_overrides(run);
  run->add_option("--out", out_path, "Results CSV path ('-' for stdout)");
  run->add_option("--error-mode", error_mode, "Error used for rmse and ci_half_width")
      ->check(CLI::IsMember({"sup", "end"}));

  std::string scheme;
  double delta = 0.0;
  std::uint64_t path_index = 0;
  auto* path = app.add_subcommand("path", "Write one coupled trajectory and its reference");
  add_common(path);
  add_overrides(path);
  path->add_option("--out", out_path, "Trajectory CSV path ('-' for stdout)");
  path->add_option("--scheme", scheme, "sd, tsd, tem or em")->required();
  path->add_option("--delta", delta, "Step size; must appear in experiment.step_sizes")->required();
  path->add_option("--path-index", path_index, "Brownian path index");

  auto* check = app.add_subcommand("check", "Run the assumption-check suite");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sdlab::kExitConfigError;
  }

  sdlab::Overrides overrides;
  if (workers > 0) overrides.workers = workers;
  if ((run->parsed() && run->count("--seed")) || (path->parsed() && path->count("--seed")))
    overrides.seed = seed;
  if (error_mode == "sup") overrides.error_mode = sdlab::ErrorMode::Supremum;
  if (error_mode == "end") overrides.error_mode = sdlab::ErrorMode::Terminal;
  overrides.force_tem_step = force_tem_step;

  try {
    if (run->parsed())
      return sdlab::cmd_run(config_path, out_path, overrides, std::cout, std::cerr);
    if (path->parsed())
      return sdlab::cmd_path(config_path, scheme, delta, path_index, out_path, overrides,
                             std::cout, std::cerr);
    return sdlab::cmd_check(config_path, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sdlab::kExitConfigError;
  }
}

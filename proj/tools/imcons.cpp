#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "imcons/error.hpp"

namespace {

imcons::RunConfig load(const std::string& path, const std::string& scenario,
                       std::uint64_t seed, long horizon) {
  imcons::RunConfig c;
  if (!path.empty()) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw imcons::Error(imcons::ErrorCode::kConfig, "cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    try {
      c = imcons::parse_config(s.str());
    } catch (const imcons::Error& e) {
      throw imcons::Error(e.code(), path + ": " + e.what());
    }
    if (seed != 0) c.seed = seed;
  } else {
    c = imcons::builtin_config(scenario, seed);
  }
  if (horizon > 0) c.horizon = horizon;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained output consensus for agents tracking a ramp"};
  app.require_subcommand(1);
  std::string config_path, scenario, out_dir;
  std::uint64_t seed = 0;
  long horizon = 0;
  bool no_plots = false;

  auto add_source = [&](CLI::App* cmd) {
    auto* cfg = cmd->add_option("--config", config_path, "JSON run configuration")
                    ->check(CLI::ExistingFile);
    auto* sc = cmd->add_option("--scenario", scenario, "built-in scenario")
                   ->check(CLI::IsMember({"paper-s1", "paper-s2"}));
    cfg->excludes(sc);
    cmd->add_option("--seed", seed, "seed for perturbed initial conditions (paper-s1)");
    cmd->add_option("--horizon", horizon, "number of steps")->check(CLI::PositiveNumber);
  };
  CLI::App* check = app.add_subcommand("check", "verify the standing assumptions");
  CLI::App* mcai = app.add_subcommand("mcai", "compute the invariant sets");
  CLI::App* run = app.add_subcommand("run", "simulate and write traces and plots");
  for (CLI::App* cmd : {check, mcai, run}) add_source(cmd);
  mcai->add_option("--out", out_dir, "output directory");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--no-plots", no_plots, "write CSV and JSON only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : imcons::cli::kValidation;
  }
  if (config_path.empty() && scenario.empty()) {
    std::cerr << "error: one of --config or --scenario is required\n";
    return imcons::cli::kValidation;
  }
  try {
    const imcons::RunConfig c = load(config_path, scenario, seed, horizon);
    const std::string out = out_dir.empty() ? c.output_dir : out_dir;
    if (check->parsed()) return imcons::cli::cmd_check(c, std::cout);
    if (mcai->parsed()) return imcons::cli::cmd_mcai(c, out, std::cout);
    return imcons::cli::cmd_run(c, out, !no_plots, std::cout);
  } catch (const imcons::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return imcons::cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return imcons::cli::kRuntime;
  }
}

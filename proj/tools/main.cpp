#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string problem;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "run configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory (default: current)");
  cmd->add_option("--problem", opts.problem, "problem name override");
  cmd->add_option("--set", opts.overrides, "override `key=value` pairs");
}

redopt::cli::Config load(const CommonOpts& opts) {
  redopt::cli::Config cfg;
  if (!opts.config_path.empty())
    cfg = redopt::cli::Config::from_file(opts.config_path);
  if (!opts.problem.empty()) cfg.set("problem", opts.problem);
  for (const std::string& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw redopt::ConfigError("--set expects key=value, got: " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetry reduction of affine optimal control systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* simulate = app.add_subcommand("simulate", "integrate the canonical flow");
  auto* compare = app.add_subcommand(
      "reduce-compare", "integrate full and reduced flows and compare");
  auto* shoot = app.add_subcommand("shoot", "solve the two-point boundary problem");
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  app.add_subcommand("list", "list built-in problems");
  for (auto* cmd : {simulate, compare, shoot, verify}) add_common(cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return redopt::cli::cmd_simulate(load(opts), opts.out_dir);
    if (compare->parsed())
      return redopt::cli::cmd_reduce_compare(load(opts), opts.out_dir);
    if (shoot->parsed()) return redopt::cli::cmd_shoot(load(opts), opts.out_dir);
    if (verify->parsed()) return redopt::cli::cmd_verify(load(opts), opts.out_dir);
    return redopt::cli::cmd_list();
  } catch (const redopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const redopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

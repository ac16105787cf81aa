#include <iostream>

#include <CLI11.hpp>

#include "glvortex/commands.hpp"
#include "glvortex/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-component Ginzburg-Landau minimizers and their eps -> 0 diagnostics"};
  app.require_subcommand(1);

  glvortex::CommandOptions options;
  double epsilon = 0.0;
  std::string out_dir;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", options.config_path, "Run configuration (JSON with dotted keys)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Run directory (default: timestamped directory under output.dir)");
    sub->add_flag("--trace", options.trace, "Write per-iteration energy and residual to trace.csv");
    sub->add_option("--seed", seed, "Seed for random initial fields (overrides solver.seed)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Minimize at one eps");
  add_common(solve);
  solve->add_option("--epsilon", epsilon, "eps (default: first entry of the schedule)");
  CLI::App* cont = app.add_subcommand("continue", "Warm-started sweep along the eps schedule");
  add_common(cont);
  CLI::App* ab = app.add_subcommand("alpha-beta", "Constrained minima alpha and beta");
  add_common(ab);
  CLI::App* base = app.add_subcommand("baseline", "Single-component sweep for each boundary map");
  add_common(base);
  CLI::App* check = app.add_subcommand("check", "Fast invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : glvortex::exit_config_error;
  }

  if (check->parsed()) {
    std::cout << "kernels: " << glvortex::kernels::active().name << "\n";
    return glvortex::cmd_check(std::cout);
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) options.out = out_dir;
  if (sub->count("--seed")) options.seed = seed;
  if (sub == solve && solve->count("--epsilon")) options.epsilon = epsilon;

  if (sub == solve) return glvortex::cmd_solve(options, std::cout, std::cerr);
  if (sub == cont) return glvortex::cmd_continue(options, std::cout, std::cerr);
  if (sub == ab) return glvortex::cmd_alpha_beta(options, std::cout, std::cerr);
  return glvortex::cmd_baseline(options, std::cout, std::cerr);
}

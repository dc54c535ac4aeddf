#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "critpair/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Critical points of random polynomials: experiments, solver and plots"};
  app.require_subcommand(1);

  std::string config;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run an experiment campaign from a JSON config");
  run->add_option("config", config, "Campaign config (JSON)")->required();
  run->add_option("--out", run_out, "Override the config's output_dir");

  std::string roots;
  critpair::CritptsOptions crit;
  auto* critpts = app.add_subcommand("critpts", "Critical points of the polynomial with the given roots");
  critpts->add_option("roots", roots, "CSV with header re,im")->required();
  critpts->add_flag("--oracle", crit.oracle, "Cross-check against companion-matrix eigenvalues (n <= 200)");
  critpts->add_option("--tol", crit.tol, "Solver tolerance in [1e-14, 1e-6]");
  critpts->add_option("-o,--output", crit.out, "Write the CSV here instead of standard output");

  std::string input;
  critpair::PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render an SVG from a trial JSON or critical-point CSV");
  plot_cmd->add_option("input", input, "trial_*.json from run, or a critpts CSV")->required();
  plot_cmd->add_option("--out", plot.out_dir, "Output directory");
  plot_cmd->add_option("--roots", plot.roots, "Roots CSV drawn with a critpts CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : critpair::kExitUsage;
  }

  try {
    if (*run) return critpair::cmd_run(config, run_out.empty() ? std::nullopt : std::optional<std::string>(run_out), std::cerr);
    if (*critpts) return critpair::cmd_critpts(roots, crit, std::cout, std::cerr);
    if (*plot_cmd) return critpair::cmd_plot(input, plot, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return critpair::kExitUsage;
  }
  return critpair::kExitUsage;
}

// levy_schemes: command-line front end.
//
//   levy_schemes scheme   --config cfg.json
//   levy_schemes converge --config cfg.json --out results/
//   levy_schemes fig1     --config cfg.json --out results/ [--gnuplot]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "levy/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Moment-matched finite-activity schemes for Levy-driven SDEs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(levy::kVersion));

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<int> workers;
  bool gnuplot = false;

  auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", seed, "master seed (overrides config)");
    cmd->add_option("--paths", paths, "Monte Carlo paths per point (overrides config)");
    cmd->add_option("--workers", workers,
                    "worker threads (overrides config; fallback LEVY_SCHEMES_WORKERS)");
    if (with_out) cmd->add_option("--out", out_dir, "output directory");
  };

  auto* scheme = app.add_subcommand("scheme", "build a scheme and print it as JSON");
  add_common(scheme, false);
  auto* converge = app.add_subcommand("converge", "convergence study with CSV and slope summary");
  add_common(converge, true);
  auto* fig1 = app.add_subcommand("fig1", "3-moment / Gaussian / Euler error-vs-cost curves");
  add_common(fig1, true);
  fig1->add_flag("--gnuplot", gnuplot, "also write a gnuplot script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : levy::cli::kConfigError;
  }

  return levy::cli::run_guarded(
      [&] {
        levy::cli::Overrides ov{seed, paths, workers, out_dir};
        auto cfg = levy::cli::load_config(config_path, ov);
        if (gnuplot) cfg.gnuplot = true;
        if (scheme->parsed()) return levy::cli::cmd_scheme(cfg, std::cout);
        if (converge->parsed()) return levy::cli::cmd_converge(cfg, std::cout);
        return levy::cli::cmd_fig1(cfg, std::cout);
      },
      std::cerr);
}

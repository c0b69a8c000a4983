#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ginibre/cli.hpp"

int main(int argc, char** argv) {
  using ginibre::cli::RunConfig;
  CLI::App app{"Ginibre point process lab: samplers, formula tables and verification suites"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> params;
  std::string replay_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "root seed");
    sub->add_option("--threads", cfg.threads, "worker cap (0: GINIBRE_LAB_THREADS or all cores)");
    sub->add_option("-M", cfg.M, "truncation / matrix size");
    sub->add_option("--budget", cfg.budget, "draws, replications or instances (0: default)");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("-p,--param", params, "key=value, repeatable");
  };

  auto* sample = app.add_subcommand("sample", "draw a point sample");
  sample->add_option("--model", cfg.target, "ginibre | palm | hkpv | thinned | poisson")->required();
  common(sample);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", cfg.target, "analytic | discrete | montecarlo")->required();
  common(verify);

  auto* table = app.add_subcommand("table", "tabulate a quantity");
  table->add_option("quantity", cfg.target, "void_prob | H | W_k | J | side_prob | moments")->required();
  common(table);

  auto* replay = app.add_subcommand("replay", "re-run the config embedded in an output file");
  replay->add_option("file", replay_path, "file written by sample, verify or table")->required();
  replay->add_option("--out", cfg.out, "where to write the regenerated file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ginibre::cli::kConfigError;
  }

  if (replay->parsed()) return ginibre::cli::replay(replay_path, cfg.out, std::cerr);

  for (const auto& p : params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "config error: --param expects key=value, got '" << p << "'\n";
      return ginibre::cli::kConfigError;
    }
    cfg.params[p.substr(0, eq)] = p.substr(eq + 1);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return ginibre::cli::run(cfg, std::cerr);
}

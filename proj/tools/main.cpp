#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  using fbc::cli::Command;
  using fbc::cli::ExperimentConfig;

  CLI::App app{"Growth, hierarchies and torsion homology gradients of "
               "free-by-cyclic groups with UPG monodromy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fbc::cli::tool_version);

  ExperimentConfig config;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--monodromy", config.monodromy,
                    "Monodromy JSON file (or inline JSON)")
        ->required();
    sub->add_option("--out", config.out, "Output directory");
  };
  auto add_chain = [&](CLI::App* sub) {
    sub->add_option("--chain", config.chain, "Chain construction")
        ->check(CLI::IsMember({"cyclic", "modp", "lowindex"}));
    sub->add_option("--levels", config.levels, "Levels of the cyclic chain");
    sub->add_option("--primes", config.primes, "Primes of the mod-p chain")
        ->delimiter(',');
    sub->add_option("--max-index", config.max_index,
                    "Index bound of the low-index chain");
    sub->add_option("--ball", config.ball,
                    "Word length for the Farber diagnostic");
    sub->add_option("--sample", config.sample,
                    "Sample size when the word ball is too large");
    sub->add_option("--seed", config.seed, "Sampling seed");
  };

  auto* analyze = app.add_subcommand("analyze", "Growth degrees and hierarchy");
  add_common(analyze);

  auto* chain = app.add_subcommand("chain", "Build and diagnose a subgroup chain");
  add_common(chain);
  add_chain(chain);

  auto* gradient
      = app.add_subcommand("gradient", "Full pipeline with torsion gradients");
  add_common(gradient);
  add_chain(gradient);

  auto* oracle = app.add_subcommand(
      "oracle", "H_1 of the mapping tori of phi^n for n = 1..levels");
  add_common(oracle);
  oracle->add_option("--levels", config.levels, "Largest power");

  auto* snf = app.add_subcommand("snf", "Smith normal form of a JSON matrix");
  snf->add_option("--matrix", config.matrix, "Matrix JSON file")->required();
  snf->add_option("--out", config.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return fbc::cli::exit_config;
  }

  if (*analyze) {
    config.command = Command::analyze;
  } else if (*chain) {
    config.command = Command::chain;
  } else if (*gradient) {
    config.command = Command::gradient;
  } else if (*oracle) {
    config.command = Command::oracle;
  } else {
    config.command = Command::snf;
  }
  return fbc::cli::run(config, std::cerr);
}

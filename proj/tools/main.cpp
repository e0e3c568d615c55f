#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "orlicz/commands.hpp"
#include "orlicz/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Orlicz level-set estimator"};
  app.set_version_flag("--version", orlicz::tool_version());
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;
  };
  Args args;
  orlicz::CliOptions options;

  const char* commands[][2] = {
      {"verify", "run the sweep and every configured check"},
      {"sweep", "emit the per-t table and fit, no verdicts"},
      {"delta2", "estimate the Delta2 constant of the Young function"},
      {"oracle", "closed-form values for an indicator"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "JSON run configuration")->required();
    sub->add_option("--seed", args.seed, "master seed, overrides the config");
    sub->add_option("--threads", args.threads, "worker threads (no effect on results)");
    sub->add_option("--out", args.out, "output directory, overrides the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : orlicz::kExitConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  options.config = args.config;
  if (sub->count("--seed")) options.seed = args.seed;
  if (sub->count("--threads")) options.threads = args.threads;
  if (sub->count("--out")) options.out_dir = args.out;
  return orlicz::run_cli(sub->get_name(), options, std::cout, std::cerr);
}

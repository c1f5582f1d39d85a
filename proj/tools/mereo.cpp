// mereo <decide|eliminate|oracle-compare|hf-verify> [input] [flags]

#include <iostream>

#include <CLI11.hpp>

#include "mereo/cli.hpp"

int main(int argc, char** argv) {
  using namespace mereo::cli;

  CLI::App app{"Decision procedure for set-theoretic mereology, with a hereditarily finite sets laboratory"};
  std::string command;
  std::string input;
  std::string format;
  RunConfig config;

  app.add_option("command", command, "decide | eliminate | oracle-compare | hf-verify")->required();
  app.add_option("input", input, "formula text, @file, or - for stdin");
  app.add_option("--format", format, "text | json");
  app.add_flag("--trace", config.trace, "include the elimination trace");
  app.add_option("--budget", config.budget, "node budget; pair budget for hf-verify")->capture_default_str();
  app.add_option("--seed", config.seed, "random seed")->capture_default_str();
  app.add_option("--count", config.count, "formulas for oracle-compare")->capture_default_str();
  app.add_option("--universe-size", config.universe_size, "elements drawn from for oracle-compare")
      ->capture_default_str();
  app.add_option("--max-rank", config.max_rank, "universe rank for hf-verify (at most 4)")->capture_default_str();
  app.add_option("--z", config.z_spec, "the set swapped with its singleton, in brace notation")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto cmd = parse_command(command);
  if (!cmd) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  }
  config.command = *cmd;
  if (!format.empty()) {
    config.format = parse_format(format);
    if (!config.format) {
      std::cerr << "error: --format must be text or json\n";
      return kExitUsage;
    }
  }
  const bool needs_input = *cmd == Command::Decide || *cmd == Command::Eliminate;
  if (needs_input && input.empty()) {
    std::cerr << "error: " << command << " needs an input formula\n";
    return kExitUsage;
  }

  std::string text;
  try {
    if (!input.empty()) text = resolve_input(input, std::cin);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  RunResult r = run(config, text);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}

// Command-line front end: plans rescue-depot coverage areas and locations on
// a rail network, exports the underlying binary programs, and renders plans.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "railcover/cli.hpp"

namespace {

struct SharedFlags {
  std::string input;
  std::string output;
  std::vector<std::string> sets;
  std::string sense;
  std::string model = "coverage";
  bool oracle = false;
};

void add_common(CLI::App* cmd, SharedFlags& flags, bool with_model, bool with_oracle) {
  cmd->add_option("--input", flags.input, "network document (JSON)")->required();
  cmd->add_option("--output", flags.output, "write the artifact to this file");
  cmd->add_option("--set", flags.sets, "parameter override, name=value (repeatable)");
  cmd->add_option("--sense", flags.sense, "objective sense: maximize or minimize")
      ->check(CLI::IsMember({"maximize", "minimize"}));
  if (with_model)
    cmd->add_option("--model", flags.model, "which model to build: coverage or location")
        ->check(CLI::IsMember({"coverage", "location"}));
  if (with_oracle)
    cmd->add_flag("--oracle", flags.oracle, "solve by exhaustive enumeration (small instances)");
}

int to_config_and_run(railcover::Command command, const SharedFlags& flags) {
  railcover::RunConfig config;
  config.command = command;
  config.input_path = flags.input;
  if (!flags.output.empty()) config.output_path = flags.output;
  for (const std::string& kv : flags.sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "input error: --set expects name=value, got '" << kv << "'\n";
      return railcover::kExitInputError;
    }
    config.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.sense == "maximize") config.sense = railcover::ObjectiveSense::maximize;
  else if (flags.sense == "minimize") config.sense = railcover::ObjectiveSense::minimize;
  config.use_oracle = flags.oracle;
  config.model = flags.model == "location" ? railcover::ModelKind::location
                                           : railcover::ModelKind::coverage;
  return railcover::run(config, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rescue-depot location and coverage planning for rail networks"};
  app.require_subcommand(1);

  SharedFlags merge_flags, coverage_flags, location_flags, export_flags, render_flags;

  CLI::App* merge = app.add_subcommand("merge", "print the merged distance/time matrices");
  add_common(merge, merge_flags, false, false);

  CLI::App* coverage =
      app.add_subcommand("solve-coverage", "assign every station to a fixed rescue depot");
  add_common(coverage, coverage_flags, false, true);

  CLI::App* location = app.add_subcommand(
      "solve-location", "choose rescue stations among candidates and assign coverage");
  add_common(location, location_flags, false, true);

  CLI::App* export_lp = app.add_subcommand("export-lp", "write the model as an LP file");
  add_common(export_lp, export_flags, true, false);

  CLI::App* render = app.add_subcommand("render", "solve and emit a Graphviz rendering");
  add_common(render, render_flags, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : railcover::kExitInputError;
  }

  if (merge->parsed()) return to_config_and_run(railcover::Command::merge, merge_flags);
  if (coverage->parsed())
    return to_config_and_run(railcover::Command::solve_coverage, coverage_flags);
  if (location->parsed())
    return to_config_and_run(railcover::Command::solve_location, location_flags);
  if (export_lp->parsed()) return to_config_and_run(railcover::Command::export_lp, export_flags);
  if (render->parsed()) return to_config_and_run(railcover::Command::render, render_flags);
  return railcover::kExitInputError;
}

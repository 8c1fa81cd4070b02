#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hydrowave/commands.hpp"

namespace {

struct CommonOptions {
  std::string configPath;
  std::vector<std::string> sets;
  std::optional<unsigned> jobs;
  std::optional<std::string> output;
};

hydrowave::RunConfig loadConfig(const CommonOptions& o) {
  hydrowave::RunConfig cfg;
  if (!o.configPath.empty()) cfg = hydrowave::parseConfig(hydrowave::readFile(o.configPath));
  for (const std::string& s : o.sets) hydrowave::applyAssignment(cfg, s);
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.output) cfg.output = *o.output;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic traveling waves of the interfacial hydroelastic problem with interface mass"};
  app.require_subcommand(1);

  using Command = int (*)(const hydrowave::RunConfig&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"analyze", "write the linear mode table (modes.csv)", hydrowave::cmdAnalyze},
      {"solve", "solve for one traveling wave (state.json)", hydrowave::cmdSolve},
      {"continue", "trace a branch (branch.json, branch.csv)", hydrowave::cmdContinue},
      {"surface", "trace one branch per Atilde value (surface.json, branch_*.json)", hydrowave::cmdSurface},
      {"converge", "compare a branch at nGrid and 2 nGrid", hydrowave::cmdConverge},
      {"profile", "export curve samples of a stored state (profile.csv, curve.json)", hydrowave::cmdProfile},
  };

  CommonOptions opts;
  Command selected = nullptr;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opts.configPath, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", opts.sets, "override one key, as key=value (repeatable)");
    sub->add_option("-o,--output", opts.output, "output directory");
    sub->add_option("-j,--jobs", opts.jobs, "concurrent branches for surface")->check(CLI::PositiveNumber);
    sub->callback([&selected, f = fn]() { selected = f; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : hydrowave::kExitUsage;
  }

  try {
    return selected(loadConfig(opts));
  } catch (const hydrowave::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hydrowave::exitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hydrowave::kExitNumerical;
  }
}

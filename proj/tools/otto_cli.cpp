#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "otto/app/commands.hpp"
#include "otto/app/config.hpp"
#include "otto/errors.hpp"

using namespace otto::app;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::string format;
  int threads = 1;
  long seed = 0;  // reserved; every computation is deterministic
};

void add_common(CLI::App* sub, Common& c) {
  auto* cfg = sub->add_option("--config", c.config, "Config file");
  auto* pre = sub->add_option("--preset", c.preset, "Named preset");
  cfg->excludes(pre);
  sub->add_option("--out", c.out, "Output directory (default: $OTTO_OUT_DIR or .)");
  sub->add_option("--format", c.format, "Dataset format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", c.threads, "Worker threads for sweeps (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", c.seed, "Reserved, unused");
}

RunConfig load(const Common& c) {
  if (c.config.empty() == c.preset.empty()) {
    throw otto::ConfigError("give exactly one of --config or --preset");
  }
  return load_config(c.config.empty() ? preset_path(c.preset) : std::filesystem::path(c.config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sudden quantum Otto refrigerator with a coupled spin-pair working medium"};
  app.require_subcommand(1);
  Common common;
  int samples = 0;
  double tolerance = 0.0;

  using Command = int (*)(const RunConfig&, const CommandOptions&, std::ostream&);
  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"limit-cycle", {cmd_limit_cycle, "Limit cycle and its thermodynamics"}},
      {"trajectory", {cmd_trajectory, "Sampled trajectory along the limit cycle"}},
      {"sweep", {cmd_sweep, "Parameter sweep (plus optional curve analysis)"}},
      {"island-map", {cmd_island_map, "Refrigeration islands over (tau_c, tau_h)"}},
      {"approx-compare", {cmd_approx_compare, "Closed-form approximations against exact values"}},
      {"validate", {cmd_validate, "Cross-check every segment against the Lindblad integrator"}},
      {"run-all", {cmd_run_all, "Every command that applies to the config"}},
  };
  std::map<CLI::App*, Command> handlers;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    add_common(sub, common);
    if (name == "trajectory" || name == "sweep" || name == "run-all") {
      sub->add_option("--samples", samples, "Samples per segment")->check(CLI::PositiveNumber);
    }
    if (name == "validate") {
      sub->add_option("--tolerance", tolerance, "Oracle tolerance")->check(CLI::PositiveNumber);
    }
    handlers[sub] = entry.first;
  }
  app.add_subcommand("presets", "List available presets")->callback([] {
    for (const auto& p : list_presets()) std::cout << p << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  for (const auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    try {
      const RunConfig config = load(common);
      CommandOptions o;
      o.out_dir = common.out.empty() ? default_out_dir() : std::filesystem::path(common.out);
      o.threads = common.threads;
      if (!common.format.empty()) o.format = common.format == "json" ? Format::Json : Format::Csv;
      if (samples > 0) o.samples = samples;
      if (tolerance > 0.0) o.tolerance = tolerance;
      return handler(config, o, std::cout);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_status(e);
    }
  }
  return 0;
}

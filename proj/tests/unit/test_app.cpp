#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "otto/app/commands.hpp"
#include "otto/app/config.hpp"
#include "otto/app/datasets.hpp"
#include "otto/errors.hpp"

using namespace otto;
using namespace otto::app;

namespace {

const char* kMinimal = R"(# minimal
[meta]
name = tiny

[medium]
J = 2
omega_c = 0.1
omega_h = 6

[cold]
T = 14
kappa_down = 0.328
tau = 0.9

[hot]
T = 15
kappa_down = 0.36
tau = 0.00025

[compression]
tau = 0.00035

[expansion]
tau = 0.00035
)";

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config parses and round trips") {
  const auto c = parse_config(kMinimal);
  CHECK(c.name == "tiny");
  CHECK(c.params.hot.tau == 0.00025);
  CHECK_FALSE(c.sweep);
  const auto again = parse_config(to_config_text(c));
  CHECK(resolved_entries(again) == resolved_entries(c));
}

TEST_CASE("config diagnostics name line and key") {
  std::string bad = kMinimal;
  bad.replace(bad.find("tau = 0.9"), 9, "tauc = 0.9");
  const auto msg = message_of(bad);
  CHECK(msg.find("t.cfg:") == 0);
  CHECK(msg.find("tauc") != std::string::npos);
  CHECK(message_of(std::string(kMinimal) + "[sweep]\naxis1 = tau_c lin 1 2\n").find("axis1") !=
        std::string::npos);
  CHECK(message_of(std::string(kMinimal) + "[mode]\nadiabat = class-9\n").find("class-1") !=
        std::string::npos);
  std::string missing = kMinimal;
  missing.erase(missing.find("omega_h = 6"), 11);
  CHECK(message_of(missing).find("omega_h") != std::string::npos);
  CHECK(message_of(std::string(kMinimal) + "[medium]\nJ = 3\n").find("J") != std::string::npos);
}

TEST_CASE("every preset loads") {
  const auto names = list_presets();
  CHECK(names.size() >= 10);
  for (const auto& n : names) {
    CAPTURE(n);
    CHECK_NOTHROW(load_config(preset_path(n)));
  }
  CHECK_THROWS_AS(preset_path("no-such-preset"), ConfigError);
}

TEST_CASE("fig2 preset segment times") {
  const auto c = load_config(preset_path("fig2"));
  CHECK(c.params.cold.tau == 0.2);
  CHECK(c.params.compression.tau == 0.21);
  CHECK(c.params.hot.tau == 0.44);
  CHECK(c.params.expansion.tau == 0.21);
}

TEST_CASE("csv and json rendering") {
  const auto c = parse_config(kMinimal);
  Table t{"demo", {"a", "b", "c"}, {}};
  t.add({1.5, static_cast<long long>(2), std::string("x")});
  t.add({Cell{}, 0.1, std::string("y")});
  const auto csv = render_csv(t, c);
  CHECK(csv.find("# dataset = demo") == 0);
  CHECK(csv.find("a,b,c\n1.5,2,x\n,0.1,y\n") != std::string::npos);
  const auto json = render_json(t, c);
  CHECK(json.find("\"kind\"") != std::string::npos);
  CHECK(json.find("null") != std::string::npos);
  CHECK_THROWS(t.add({1.0}));
}

TEST_CASE("commands write datasets and report status") {
  const auto dir = std::filesystem::temp_directory_path() / "otto_app_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  CommandOptions o;
  o.out_dir = dir;
  std::ostringstream log;
  const auto fig1 = load_config(preset_path("fig1"));
  CHECK(cmd_limit_cycle(fig1, o, log) == kExitRefrigerating);
  CHECK(std::filesystem::exists(dir / "fig1.limit_cycle.csv"));
  CHECK(std::filesystem::exists(dir / "fig1.corners.csv"));
  CHECK(log.str().find("refrigerating") != std::string::npos);

  auto warm = fig1;
  warm.params.cold.T = 0.9 * warm.params.medium.compression_ratio() * warm.params.hot.T;
  CHECK(cmd_limit_cycle(warm, o, log) == kExitNotRefrigerating);

  CHECK(cmd_validate(load_config(preset_path("fig2")), o, log) == kExitOk);
  CHECK_THROWS_AS(cmd_sweep(fig1, o, log), ConfigError);
  CHECK(exit_status(ConfigError("x")) == kExitConfigError);
  CHECK(exit_status(MarginalCycle("x")) == kExitMarginalCycle);
  CHECK(exit_status(NoConvergence("x")) == kExitNoConvergence);
  std::filesystem::remove_all(dir);
}

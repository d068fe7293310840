#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otto/sweep.hpp"

namespace otto::app {

enum class Format { Csv, Json };
enum class Analysis { Grid, PcVsTemperature, CopVsPower, CoherenceVsAdiabatTime };
enum class Regime { Case1, Case2, Case3a, Case3b };

std::string_view to_string(Analysis a);
std::string_view to_string(Regime r);

struct SweepConfig {
  std::vector<Axis> axes;
  std::vector<Constraint> constraints;
  Analysis analysis = Analysis::Grid;
  bool approximations = false;
  std::vector<double> tau_adi;  // coherence-vs-adiabat-time family
};

/// Everything one CLI invocation needs; units hbar = k_B = 1.
struct RunConfig {
  std::string name = "run";
  std::string description;
  CycleParams params;
  std::optional<SweepConfig> sweep;
  std::optional<Regime> regime;
  int trajectory_samples = 200;
  double validate_tolerance = 1e-6;
  Format format = Format::Csv;

  SweepSpec sweep_spec() const;  // ConfigError without a [sweep] section
};

/// Parses the sectioned key = value format. Errors name the source, line and
/// field: "fig1.cfg:12: [cold] unknown key 'tauc'".
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Flattened "section.key" = value pairs of the resolved configuration, in
/// a fixed order. Feeding them back through parse_config reproduces the config.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& c);
std::string to_config_text(const RunConfig& c);

/// Preset lookup: OTTO_PRESET_DIR, else the directory compiled in.
std::filesystem::path preset_dir();
std::filesystem::path preset_path(const std::string& name);
std::vector<std::string> list_presets();

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace otto::app

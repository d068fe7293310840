#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "otto/app/config.hpp"
#include "otto/limit_cycle.hpp"
#include "otto/lindblad_oracle.hpp"
#include "otto/sweep.hpp"

namespace otto::app {

using Cell = std::variant<std::monostate, double, long long, std::string>;

/// One dataset: a named table with a fixed column order.
struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// CSV with a leading "# key = value" block holding the resolved config.
std::string render_csv(const Table& t, const RunConfig& config);
/// {"config": {...}, "kind": ..., "columns": [...], "rows": [[...]]}.
std::string render_json(const Table& t, const RunConfig& config);

/// Writes <dir>/<config.name>.<kind>.<csv|json> and returns the path.
std::filesystem::path write_table(const Table& t, const RunConfig& config,
                                  const std::filesystem::path& dir, Format format);

Table limit_cycle_table(const CycleReport& r);
Table corners_table(const CycleReport& r);
Table trajectory_table(const std::vector<TrajectorySample>& samples);
/// Gibbs S_E against Omega at both bath temperatures, for isotherm curves.
Table isotherm_table(const CycleParams& p, int points = 201);
Table sweep_table(const SweepResult& r);
Table island_table(const SweepResult& r, const IslandMap& m);
Table island_summary_table(const SweepResult& r, const IslandMap& m);
Table pc_curve_table(const SweepResult& r, const PcCurve& c);
Table cop_curve_table(const SweepResult& r, const CopCurve& c);
Table coherence_table(const std::vector<CoherenceTrace>& traces);

}  // namespace otto::app

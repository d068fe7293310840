#include "otto/app/datasets.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "otto/errors.hpp"

namespace otto::app {
namespace {

Cell num(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }
Cell num(const std::optional<double>& v) { return v ? num(*v) : Cell{}; }
Cell integer(long long v) { return Cell{v}; }
Cell text(std::string_view s) { return Cell{std::string(s)}; }

std::string csv_cell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct V {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double d) const { return d; }
    nlohmann::ordered_json operator()(long long i) const { return i; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

const char* corner_name(int i) {
  static const char* names[] = {"A", "B", "C", "D"};
  return names[i];
}

std::string_view cell_state(CellState s) {
  switch (s) {
    case CellState::Refrigerating: return "refrigerating";
    case CellState::NonRefrigerating: return "non-refrigerating";
    case CellState::Failed: return "failed";
  }
  return "unknown";
}

std::vector<std::string> axis_columns(const SweepResult& r) {
  std::vector<std::string> c{"i", "j"};
  for (const auto& a : r.spec.axes) c.emplace_back(to_string(a.param));
  return c;
}

std::vector<Cell> axis_cells(const SweepResult& r, const SweepPoint& p) {
  std::vector<Cell> row{integer(p.index[0]), integer(p.index[1])};
  for (std::size_t k = 0; k < r.spec.axes.size(); ++k) row.push_back(num(p.coord[k]));
  return row;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvalidParameter("dataset " + kind + ": row width does not match columns");
  }
  rows.push_back(std::move(row));
}

std::string render_csv(const Table& t, const RunConfig& config) {
  std::string out = "# dataset = " + t.kind + "\n";
  for (const auto& [k, v] : resolved_entries(config)) out += "# " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& t, const RunConfig& config) {
  nlohmann::ordered_json j;
  j["kind"] = t.kind;
  auto& cfg = j["config"];
  cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : resolved_entries(config)) cfg[k] = v;
  j["columns"] = t.columns;
  auto& rows = j["rows"];
  rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    rows.push_back(std::move(r));
  }
  return j.dump(1) + "\n";
}

std::filesystem::path write_table(const Table& t, const RunConfig& config,
                                  const std::filesystem::path& dir, Format format) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (config.name + "." + t.kind + (format == Format::Csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << (format == Format::Csv ? render_csv(t, config) : render_json(t, config));
  return path;
}

Table limit_cycle_table(const CycleReport& r) {
  Table t{"limit_cycle",
          {"Q_c", "Q_h", "W_on", "P_c", "COP", "S_u", "refrigerating", "cycle_time",
           "n_iterations", "spectral_gap", "fixed_point_residual", "first_law_residual",
           "closure_residual", "iteration_deviation", "commutator", "cop_otto", "cop_carnot",
           "violations", "notes"},
          {}};
  std::string violations, notes;
  for (const auto& v : r.violations) violations += (violations.empty() ? "" : "; ") + v;
  for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
  t.add({num(r.Q_c), num(r.Q_h), num(r.W_on), num(r.P_c), num(r.COP), num(r.S_u),
         integer(r.refrigerating() ? 1 : 0), num(r.cycle_time), integer(r.n_iterations),
         num(r.spectral_gap), num(r.fixed_point_residual), num(r.first_law_residual),
         num(r.closure_residual), num(r.iteration_deviation), num(r.commutator),
         num(r.cop_otto), num(r.cop_carnot), text(violations), text(notes)});
  return t;
}

Table corners_table(const CycleReport& r) {
  Table t{"corners", {"corner", "Omega", "E", "L", "C", "D", "S_E", "S_VN", "coherence"}, {}};
  for (int i = 0; i < 4; ++i) {
    const auto& x = r.corner_vectors[i];
    t.add({text(corner_name(i)), num(r.corner_Omega[i]), num(x.E), num(x.L), num(x.C), num(x.D),
           num(r.corner_entropies[i].energy), num(r.corner_entropies[i].von_neumann),
           num(r.corner_coherence[i])});
  }
  return t;
}

Table trajectory_table(const std::vector<TrajectorySample>& samples) {
  Table t{"trajectory",
          {"t", "segment", "omega", "Omega", "E", "L", "C", "D", "S_E", "S_VN", "coherence"},
          {}};
  for (const auto& s : samples) {
    t.add({num(s.t), text(to_string(s.segment)), num(s.omega), num(s.Omega), num(s.x.E),
           num(s.x.L), num(s.x.C), num(s.x.D), num(s.s.energy), num(s.s.von_neumann),
           num(s.coherence)});
  }
  return t;
}

Table isotherm_table(const CycleParams& p, int points) {
  Table t{"isotherms", {"Omega", "S_E_cold", "S_E_hot"}, {}};
  const double lo = p.medium.Omega_c(), hi = p.medium.Omega_h();
  for (int k = 0; k < points; ++k) {
    const double Omega = k + 1 == points ? hi : lo + (hi - lo) * k / (points - 1);
    t.add({num(Omega), num(gibbs_energy_entropy(Omega, p.cold.T)),
           num(gibbs_energy_entropy(Omega, p.hot.T))});
  }
  return t;
}

Table sweep_table(const SweepResult& r) {
  Table t{"sweep", axis_columns(r), {}};
  for (const char* c : {"T_c", "T_h", "tau_c", "tau_h", "tau_ch", "tau_hc", "omega_h",
                        "status", "failure", "Q_c", "Q_h", "W_on", "P_c", "COP", "S_u",
                        "n_iterations", "spectral_gap"}) {
    t.columns.emplace_back(c);
  }
  const bool approx = r.spec.approximations;
  if (approx) {
    for (const char* c : {"qc_appr1", "qc_appr1b", "qc_appr2", "qc_appr3a", "qc_appr3b",
                          "work_appr", "work_first_order", "cop_appr", "su_appr"}) {
      t.columns.emplace_back(c);
    }
  }
  for (const auto& p : r.points) {
    auto row = axis_cells(r, p);
    const auto& q = p.params;
    for (double v : {q.cold.T, q.hot.T, q.cold.tau, q.hot.tau, q.compression.tau,
                     q.expansion.tau, q.medium.omega_h}) {
      row.push_back(num(v));
    }
    if (p.report) {
      const auto& rep = *p.report;
      row.push_back(text(rep.refrigerating() ? "refrigerating" : "non-refrigerating"));
      row.push_back(Cell{});
      for (double v : {rep.Q_c, rep.Q_h, rep.W_on, rep.P_c}) row.push_back(num(v));
      row.push_back(num(rep.COP));
      row.push_back(num(rep.S_u));
      row.push_back(integer(rep.n_iterations));
      row.push_back(num(rep.spectral_gap));
    } else {
      row.push_back(text("failed"));
      row.push_back(text(p.failure ? to_string(*p.failure) : "unknown"));
      for (int k = 0; k < 8; ++k) row.push_back(Cell{});
    }
    if (approx) {
      const ApproxValues a = p.approx.value_or(ApproxValues{});
      for (const auto* v : {&a.qc_appr1, &a.qc_appr1b, &a.qc_appr2, &a.qc_appr3a, &a.qc_appr3b,
                            &a.work_appr, &a.work_first_order, &a.cop_appr, &a.su_appr}) {
        row.push_back(num(*v));
      }
    }
    t.add(std::move(row));
  }
  return t;
}

Table island_table(const SweepResult& r, const IslandMap& m) {
  Table t{"island_map", axis_columns(r), {}};
  t.columns.emplace_back("state");
  t.columns.emplace_back("island");
  t.columns.emplace_back("Q_c");
  for (std::size_t n = 0; n < r.points.size(); ++n) {
    auto row = axis_cells(r, r.points[n]);
    row.push_back(text(cell_state(m.cells[n])));
    row.push_back(integer(m.labels[n]));
    row.push_back(r.points[n].report ? num(r.points[n].report->Q_c) : Cell{});
    t.add(std::move(row));
  }
  return t;
}

Table island_summary_table(const SweepResult& r, const IslandMap& m) {
  Table t{"islands", {"island", "cells", "axis1_min", "axis1_max", "axis2_min", "axis2_max"}, {}};
  for (int label = 0; label < m.islands(); ++label) {
    double lo0 = INFINITY, hi0 = -INFINITY, lo1 = INFINITY, hi1 = -INFINITY;
    for (std::size_t n = 0; n < r.points.size(); ++n) {
      if (m.labels[n] != label) continue;
      lo0 = std::min(lo0, r.points[n].coord[0]);
      hi0 = std::max(hi0, r.points[n].coord[0]);
      lo1 = std::min(lo1, r.points[n].coord[1]);
      hi1 = std::max(hi1, r.points[n].coord[1]);
    }
    t.add({integer(label), integer(m.island_sizes[label]), num(lo0), num(hi0), num(lo1), num(hi1)});
  }
  return t;
}

Table pc_curve_table(const SweepResult& r, const PcCurve& c) {
  Table t{"pc_curve", {"J_over_Tc", "T_c", "T_h", "P_c", "ln_P_c", "status", "is_max"}, {}};
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    t.add({num(c.x[i]), num(p.params.cold.T), num(p.params.hot.T),
           p.report ? num(p.report->P_c) : Cell{}, num(c.ln_pc[i]),
           text(p.failure ? "failed" : p.refrigerating() ? "refrigerating" : "non-refrigerating"),
           integer(c.max_index && *c.max_index == static_cast<int>(i) ? 1 : 0)});
  }
  return t;
}

Table cop_curve_table(const SweepResult& r, const CopCurve& c) {
  Table t{"cop_curve", {std::string(to_string(r.spec.axes[0].param)), "inv_P_c", "inv_COP", "run"}, {}};
  for (std::size_t i = 0; i < c.inv_pc.size(); ++i) {
    long long run = 0;
    for (std::size_t k = 0; k < c.monotone_runs.size(); ++k) {
      if (static_cast<int>(i) >= c.monotone_runs[k][0]) run = static_cast<long long>(k);
    }
    t.add({num(c.coord[i]), num(c.inv_pc[i]), num(c.inv_cop[i]), integer(run)});
  }
  return t;
}

Table coherence_table(const std::vector<CoherenceTrace>& traces) {
  Table t{"coherence", {"tau_adi", "sample", "Omega", "coherence", "max_coherence"}, {}};
  for (const auto& tr : traces) {
    for (std::size_t k = 0; k < tr.Omega.size(); ++k) {
      t.add({num(tr.tau_adi), integer(static_cast<long long>(k)), num(tr.Omega[k]),
             num(tr.coherence[k]), num(tr.max_coherence)});
    }
  }
  return t;
}

}  // namespace otto::app

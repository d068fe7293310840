#include "otto/app/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>

#include "otto/app/datasets.hpp"
#include "otto/errors.hpp"
#include "otto/lindblad_oracle.hpp"
#include "otto/sudden_approx.hpp"

namespace otto::app {
namespace {

Format format_of(const RunConfig& c, const CommandOptions& o) { return o.format.value_or(c.format); }

void emit(const Table& t, const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  log << "wrote " << write_table(t, c, o.out_dir, format_of(c, o)).string() << "\n";
}

std::optional<double> regime_value(Regime r, const ApproxValues& a) {
  switch (r) {
    case Regime::Case1: return a.qc_appr1b;
    case Regime::Case2: return a.qc_appr2;
    case Regime::Case3a: return a.qc_appr3a;
    case Regime::Case3b: return a.qc_appr3b;
  }
  return std::nullopt;
}

int sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("OTTO_OUT_DIR"); env && *env) return env;
  return ".";
}

int exit_status(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::ConfigError:
      case ErrorKind::InvalidParameter: return kExitConfigError;
      case ErrorKind::MarginalCycle: return kExitMarginalCycle;
      case ErrorKind::NoConvergence: return kExitNoConvergence;
      default: return kExitOtherError;
    }
  }
  return kExitOtherError;
}

int cmd_limit_cycle(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const CycleReport r = cycle_report(c.params);
  log << std::setprecision(10);
  log << "preset/config : " << c.name << "\n"
      << "status        : " << (r.refrigerating() ? "refrigerating" : "not a refrigerator") << "\n"
      << "Q_c           : " << r.Q_c << "\n"
      << "Q_h           : " << r.Q_h << "\n"
      << "W_on          : " << r.W_on << "\n"
      << "P_c           : " << r.P_c << "\n"
      << "COP           : " << (r.COP ? format_number(*r.COP) : std::string("-")) << "\n"
      << "S_u           : " << r.S_u << "\n"
      << "cycle time    : " << r.cycle_time << "\n"
      << "iterations    : " << r.n_iterations << " (spectral gap " << r.spectral_gap << ")\n"
      << "residuals     : fixed point " << r.fixed_point_residual << ", first law "
      << r.first_law_residual << ", closure " << r.closure_residual << "\n";
  for (int i = 0; i < 4; ++i) {
    const auto& x = r.corner_vectors[i];
    log << "corner " << "ABCD"[i] << "      : E=" << x.E << " L=" << x.L << " C=" << x.C
        << " D=" << x.D << " S_E=" << r.corner_entropies[i].energy
        << " S_VN=" << r.corner_entropies[i].von_neumann << "\n";
  }
  for (const auto& v : r.violations) log << "violation     : " << v << "\n";
  for (const auto& n : r.notes) log << "note          : " << n << "\n";
  emit(limit_cycle_table(r), c, o, log);
  emit(corners_table(r), c, o, log);
  return r.refrigerating() ? kExitRefrigerating : kExitNotRefrigerating;
}

int cmd_trajectory(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const auto samples = trajectory(c.params, o.samples.value_or(c.trajectory_samples));
  emit(trajectory_table(samples), c, o, log);
  emit(isotherm_table(c.params), c, o, log);
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const SweepConfig& s = [&]() -> const SweepConfig& {
    if (!c.sweep) throw ConfigError(c.name + ": sweep needs a [sweep] section");
    return *c.sweep;
  }();
  if (s.analysis == Analysis::CoherenceVsAdiabatTime) {
    const auto traces = coherence_vs_adiabat_time(c.params, s.tau_adi,
                                                  o.samples.value_or(c.trajectory_samples), o.threads);
    for (const auto& tr : traces) {
      log << "tau_adi " << tr.tau_adi << ": max coherence " << tr.max_coherence << "\n";
    }
    emit(coherence_table(traces), c, o, log);
    return kExitOk;
  }
  const SweepResult r = run_sweep(c.sweep_spec(), o.threads);
  long failed = 0, fridge = 0;
  for (const auto& p : r.points) {
    failed += p.failure.has_value();
    fridge += p.refrigerating();
  }
  log << r.points.size() << " points, " << fridge << " refrigerating, " << failed << " failed\n";
  emit(sweep_table(r), c, o, log);
  if (s.analysis == Analysis::PcVsTemperature) {
    const PcCurve pc = pc_vs_temperature(r);
    if (pc.max_location) log << "interior maximum of ln P_c at J/T_c = " << *pc.max_location << "\n";
    if (pc.cutoff) log << "last refrigerating J/T_c = " << *pc.cutoff << "\n";
    emit(pc_curve_table(r, pc), c, o, log);
  } else if (s.analysis == Analysis::CopVsPower) {
    const CopCurve cop = cop_vs_power(r);
    log << cop.inv_pc.size() << " refrigerating points in " << cop.monotone_runs.size()
        << " monotone runs\n";
    emit(cop_curve_table(r, cop), c, o, log);
  }
  return kExitOk;
}

int cmd_island_map(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  const SweepResult r = run_sweep(c.sweep_spec(), o.threads);
  const IslandMap m = island_map(r);
  log << m.rows << "x" << m.cols << " grid: " << m.islands() << " refrigerating islands, "
      << m.row_sign_changes << " row / " << m.col_sign_changes << " column sign changes\n";
  emit(island_table(r, m), c, o, log);
  emit(island_summary_table(r, m), c, o, log);
  return kExitOk;
}

int cmd_approx_compare(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  if (!c.regime) throw ConfigError(c.name + ": approx-compare needs [mode] regime");
  SweepSpec spec;
  if (c.sweep) {
    spec = c.sweep_spec();
  } else {
    spec.base = c.params;
    spec.axes.push_back(Axis{Param::tau_c, c.params.cold.tau, c.params.cold.tau, 1, false, {}});
  }
  spec.approximations = true;
  // The exact counterpart always uses the exact propagators.
  spec.base.models = {};
  const SweepResult r = run_sweep(spec, o.threads);

  Table t{"approx_compare", {"i", "j"}, {}};
  for (const auto& a : spec.axes) t.columns.emplace_back(to_string(a.param));
  for (const char* col : {"Q_c", "W_on", "COP", "S_u", "qc_appr1", "qc_appr1b", "qc_appr2",
                          "qc_appr3a", "qc_appr3b", "work_appr", "work_first_order", "cop_appr",
                          "su_appr", "regime_value", "rel_dev", "sign_agree"}) {
    t.columns.emplace_back(col);
  }
  long agree = 0, compared = 0;
  for (const auto& p : r.points) {
    std::vector<Cell> row{static_cast<long long>(p.index[0]), static_cast<long long>(p.index[1])};
    for (std::size_t k = 0; k < spec.axes.size(); ++k) row.emplace_back(p.coord[k]);
    auto opt = [](const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; };
    if (p.report) {
      row.emplace_back(p.report->Q_c);
      row.emplace_back(p.report->W_on);
      row.push_back(opt(p.report->COP));
      row.emplace_back(p.report->S_u);
    } else {
      for (int k = 0; k < 4; ++k) row.emplace_back();
    }
    const ApproxValues a = p.approx.value_or(ApproxValues{});
    for (const auto* v : {&a.qc_appr1, &a.qc_appr1b, &a.qc_appr2, &a.qc_appr3a, &a.qc_appr3b,
                          &a.work_appr, &a.work_first_order, &a.cop_appr, &a.su_appr}) {
      row.push_back(opt(*v));
    }
    const auto rv = regime_value(*c.regime, a);
    row.push_back(opt(rv));
    if (rv && p.report) {
      const double exact = p.report->Q_c;
      row.push_back(exact != 0.0 ? Cell{std::abs(*rv - exact) / std::abs(exact)} : Cell{});
      const bool same = sign(*rv) == sign(exact);
      row.emplace_back(static_cast<long long>(same));
      agree += same;
      ++compared;
    } else {
      row.emplace_back();
      row.emplace_back();
    }
    t.add(std::move(row));
  }
  log << "regime " << to_string(*c.regime) << ": sign agreement at " << agree << " of " << compared
      << " points\n";
  emit(t, c, o, log);

  // Sign changes of qc_appr1b along tau_c next to the predicted crossings.
  int tc_axis = -1;
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    if (spec.axes[k].param == Param::tau_c) tc_axis = static_cast<int>(k);
  }
  if (*c.regime == Regime::Case1 && tc_axis >= 0 && spec.axes[tc_axis].values().size() > 1) {
    const auto tcs = spec.axes[tc_axis].values();
    const int other_n = r.shape[1 - tc_axis];
    Table roots{"roots", {"row", "kind", "tau_c", "bracket_lo", "bracket_hi", "nearest", "distance"}, {}};
    for (int row = 0; row < other_n; ++row) {
      auto point = [&](int k) -> const SweepPoint& {
        return tc_axis == 0 ? r.at(k, row) : r.at(row, k);
      };
      const CycleParams& p0 = point(0).params;
      const auto predicted = sign_switch_roots(p0.medium, p0.cold, tcs.front(), tcs.back());
      std::vector<std::array<double, 2>> changes;
      for (std::size_t k = 1; k < tcs.size(); ++k) {
        const auto& a = point(static_cast<int>(k) - 1).approx;
        const auto& b = point(static_cast<int>(k)).approx;
        if (a && b && a->qc_appr1b && b->qc_appr1b && sign(*a->qc_appr1b) != sign(*b->qc_appr1b)) {
          changes.push_back({tcs[k - 1], tcs[k]});
        }
      }
      auto nearest = [](double x, const std::vector<double>& ys) {
        double best = NAN;
        for (double y : ys) {
          if (std::isnan(best) || std::abs(y - x) < std::abs(best - x)) best = y;
        }
        return best;
      };
      std::vector<double> mids;
      for (const auto& ch : changes) mids.push_back(0.5 * (ch[0] + ch[1]));
      for (double x : predicted) {
        const double n = nearest(x, mids);
        roots.add({static_cast<long long>(row), std::string("predicted_root"), x, Cell{}, Cell{},
                   std::isnan(n) ? Cell{} : Cell{n}, std::isnan(n) ? Cell{} : Cell{std::abs(n - x)}});
      }
      for (const auto& ch : changes) {
        const double mid = 0.5 * (ch[0] + ch[1]);
        const double n = nearest(mid, predicted);
        roots.add({static_cast<long long>(row), std::string("appr1b_sign_change"), mid, ch[0], ch[1],
                   std::isnan(n) ? Cell{} : Cell{n}, std::isnan(n) ? Cell{} : Cell{std::abs(n - mid)}});
      }
      log << "row " << row << ": " << predicted.size() << " predicted crossings, " << changes.size()
          << " qc_appr1b sign changes\n";
    }
    emit(roots, c, o, log);
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  CycleParams p = c.params;
  p.models = {};
  const double tol = o.tolerance.value_or(c.validate_tolerance);
  ReportOptions ro;
  ro.run_power_iteration = false;
  const CycleReport r = cycle_report(p, ro);
  const auto& m = p.medium;
  auto adiabat_seg = [&](double from, double to, const AdiabatSegment& a) {
    return a.schedule == Schedule::ConstantMu ? oracle::constant_mu_segment(m.J, from, to, a.tau)
                                              : oracle::linear_segment(m.J, from, to, a.tau);
  };
  const std::array<oracle::OracleSegment, 4> segs{
      oracle::isochore_segment(m.omega_c, m.J, p.cold),
      adiabat_seg(m.omega_c, m.omega_h, p.compression),
      oracle::isochore_segment(m.omega_h, m.J, p.hot),
      adiabat_seg(m.omega_h, m.omega_c, p.expansion)};
  const auto segments = build_segments(p);

  Table t{"validate", {"segment", "dE", "dL", "dC", "dD", "max_abs", "tolerance", "pass"}, {}};
  bool ok = true;
  for (int k = 0; k < 4; ++k) {
    const ObservableVector start = r.corner_vectors[k];
    const ObservableVector expect = segments[k].apply(start);
    const ObservableVector got = oracle::propagate(start, segs[k]);
    const Vec5 d = (got.affine() - expect.affine()).cwiseAbs();
    const double worst = d.maxCoeff();
    const bool pass = worst < tol;
    ok = ok && pass;
    t.add({std::string(to_string(segments[k].kind)), d(0), d(1), d(2), d(3), worst, tol,
           static_cast<long long>(pass)});
    log << std::left << std::setw(20) << to_string(segments[k].kind) << " max |d(E,L,C,D)| = "
        << worst << (pass ? "  pass" : "  FAIL") << "\n";
  }
  emit(t, c, o, log);
  return ok ? kExitOk : kExitValidateFailed;
}

std::vector<std::string> applicable_commands(const RunConfig& c) {
  std::vector<std::string> out{"limit-cycle", "trajectory"};
  if (c.sweep) {
    out.emplace_back("sweep");
    if (c.sweep->analysis == Analysis::Grid && c.sweep->axes.size() == 2) out.emplace_back("island-map");
  }
  if (c.regime) out.emplace_back("approx-compare");
  return out;
}

int cmd_run_all(const RunConfig& c, const CommandOptions& o, std::ostream& log) {
  for (const auto& name : applicable_commands(c)) {
    log << "== " << name << "\n";
    if (name == "limit-cycle") cmd_limit_cycle(c, o, log);
    else if (name == "trajectory") cmd_trajectory(c, o, log);
    else if (name == "sweep") cmd_sweep(c, o, log);
    else if (name == "island-map") cmd_island_map(c, o, log);
    else if (name == "approx-compare") cmd_approx_compare(c, o, log);
  }
  return kExitOk;
}

}  // namespace otto::app

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otto/errors.hpp"
#include "otto/limit_cycle.hpp"

namespace otto {

/// Sweepable parameters. tau_adi sets both adiabat times; time_scale
/// multiplies all four base times; J_over_Tc sets T_c = J / x.
enum class Param {
  J, omega_c, omega_h, T_c, T_h, kappa_c, kappa_h, gamma_c, gamma_h,
  tau_c, tau_h, tau_ch, tau_hc, tau_adi, time_scale, J_over_Tc,
};

std::string_view to_string(Param p);
std::optional<Param> parse_param(std::string_view name);

/// Current value of a parameter (time_scale reads as 1 relative to itself).
double get_param(const CycleParams& p, Param which);
void set_param(CycleParams& p, const CycleParams& base, Param which, double value);

struct Axis {
  Param param = Param::tau_c;
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  bool log = false;
  std::vector<double> list;  // explicit values override lo/hi/count

  std::vector<double> values() const;
  void validate() const;
};

/// Tied-parameter rules, applied after the axis values in this order.
struct Constraint {
  enum class Kind { TemperatureRatio, Product } kind = Kind::TemperatureRatio;
  // TemperatureRatio: T_h = T_c / value.  Product: target = value / source.
  double value = 1.0;
  Param source = Param::omega_h;
  Param target = Param::tau_h;
};

struct SweepSpec {
  CycleParams base;
  std::vector<Axis> axes;  // one or two
  std::vector<Constraint> constraints;
  bool approximations = false;
  ReportOptions report;

  void validate() const;
  std::array<int, 2> shape() const;
};

/// Closed-form values at one point; absent where the formula raised.
struct ApproxValues {
  std::optional<double> qc_appr1, qc_appr1b, qc_appr2, qc_appr3a, qc_appr3b;
  std::optional<double> work_appr, work_first_order, cop_appr, su_appr;
};

struct SweepPoint {
  std::array<int, 2> index{0, 0};
  std::array<double, 2> coord{0.0, 0.0};
  CycleParams params;
  std::optional<CycleReport> report;
  std::optional<ErrorKind> failure;
  std::string reason;
  std::optional<ApproxValues> approx;

  bool refrigerating() const { return report && report->Q_c > 0.0; }
};

struct SweepResult {
  SweepSpec spec;
  std::array<int, 2> shape{1, 1};
  std::vector<SweepPoint> points;  // row-major, first axis outer

  const SweepPoint& at(int i, int j) const { return points[i * shape[1] + j]; }
};

/// Parameters at a grid index after axis values and ties are applied.
CycleParams point_params(const SweepSpec& spec, int i, int j);

ApproxValues approx_values(const CycleParams& p);

/// Evaluates every grid point; threads <= 0 selects hardware concurrency.
/// Results are keyed by grid index, so the output does not depend on threads.
SweepResult run_sweep(const SweepSpec& spec, int threads = 1);

enum class CellState { Refrigerating, NonRefrigerating, Failed };

struct IslandMap {
  int rows = 0, cols = 0;
  std::vector<CellState> cells;
  std::vector<int> labels;          // island id per cell, -1 outside
  std::vector<int> island_sizes;    // indexed by label
  int row_sign_changes = 0;
  int col_sign_changes = 0;

  int islands() const { return static_cast<int>(island_sizes.size()); }
};

/// 4-neighbour flood fill of the refrigerating cells of a 2-axis sweep.
IslandMap island_map(const SweepResult& result);
IslandMap island_map(const std::vector<CellState>& cells, int rows, int cols);

struct PcCurve {
  std::vector<double> x;
  std::vector<std::optional<double>> ln_pc;  // only at refrigerating points
  std::optional<int> max_index;              // interior maximum on the grid
  std::optional<double> max_location;        // parabolic refinement
  std::optional<double> cutoff;              // last refrigerating x
};

/// ln P_c along a 1-axis sweep over J_over_Tc.
PcCurve pc_vs_temperature(const SweepResult& result);

struct CopCurve {
  std::vector<double> coord;
  std::vector<double> inv_pc, inv_cop;     // refrigerating points, sweep order
  std::vector<std::array<int, 2>> monotone_runs;  // [first, last] indices
};

CopCurve cop_vs_power(const SweepResult& result);

struct TrajectorySample {
  double t = 0.0;      // time since A
  SegmentKind segment = SegmentKind::ColdIsochore;
  double omega = 0.0;
  double Omega = 0.0;
  ObservableVector x;
  Entropies s;
  double coherence = 0.0;
};

/// Limit-cycle trajectory with `samples` steps per segment (samples + 1
/// points including both ends), each from an exact sub-interval propagator.
std::vector<TrajectorySample> trajectory(const CycleParams& params, int samples = 200);

struct CoherenceTrace {
  double tau_adi = 0.0;
  std::vector<double> Omega, coherence;
  double max_coherence = 0.0;
};

std::vector<CoherenceTrace> coherence_vs_adiabat_time(const CycleParams& base,
                                                      const std::vector<double>& tau_adi,
                                                      int samples = 200, int threads = 1);

}  // namespace otto

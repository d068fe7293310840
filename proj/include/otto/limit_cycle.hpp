#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "otto/core_model.hpp"
#include "otto/cycle.hpp"
#include "otto/propagators.hpp"
#include "otto/types.hpp"

namespace otto {

/// Segment propagators in cycle order (U_c, U_ch, U_h, U_hc), starting at A.
/// Regime warnings of approximate models are appended to `notes` if given.
std::array<SegmentPropagator, 4> build_segments(const CycleParams& params,
                                                std::vector<std::string>* notes = nullptr);

struct IterationResult {
  ObservableVector x;
  long n_iterations = 0;
};

struct IterationOptions {
  double tol = 1e-12;
  long max_iter = 1'000'000;
};

/// Affine fixed point x = M x + b via a direct solve of (I - M) x = b with one
/// refinement step. Throws MarginalCycle when I - M is numerically singular.
ObservableVector fixed_point(const Mat5& U_global);

/// Repeated application of U_global. Stops once the step size, scaled by the
/// spectral gap, is below tol (floored at the rounding level of the iterate);
/// the distance to the fixed point is then bounded by about tol.
IterationResult iterate_to_limit(const ObservableVector& x0, const Mat5& U_global,
                                 const IterationOptions& options = {});

struct Corners {
  std::array<ObservableVector, 4> x;  // A, B, C, D
  double closure_residual = 0.0;      // ||U_hc D - A||_inf
  ObservableVector A_returned;        // U_hc D
};

Corners corner_states(const ObservableVector& x_A,
                      const std::array<SegmentPropagator, 4>& segments);

struct CycleReport {
  double Q_c = 0.0;
  double Q_h = 0.0;
  double W_on = 0.0;
  double P_c = 0.0;
  std::optional<double> COP;  // only for Q_c > 0 and W_on > 0
  double S_u = 0.0;
  std::array<ObservableVector, 4> corner_vectors;
  std::array<Entropies, 4> corner_entropies;
  std::array<double, 4> corner_coherence{};
  std::array<double, 4> corner_Omega{};
  long n_iterations = 0;
  double spectral_gap = 0.0;

  double cycle_time = 0.0;
  double fixed_point_residual = 0.0;   // ||U X - X||_inf
  double first_law_residual = 0.0;     // Q_c + (E_D - E_C) + W_on
  double closure_residual = 0.0;
  double iteration_deviation = 0.0;    // ||x_power - x_direct||_inf
  double commutator = 0.0;             // ||[U_AB, U_c]||_F
  double cop_otto = 0.0;
  double cop_carnot = 0.0;
  // Failed first/second-law or COP-bound checks. Always empty for exact
  // propagators (those raise instead); approximate models may populate it.
  std::vector<std::string> violations;
  std::vector<std::string> notes;  // regime warnings of approximate models

  bool refrigerating() const { return COP.has_value(); }
};

struct ReportOptions {
  bool run_power_iteration = true;
  IterationOptions iteration;
};

/// What the thermodynamic bookkeeping needs besides the segment maps.
struct CycleContext {
  double T_c = 1.0;
  double T_h = 1.0;
  double Omega_c = 1.0;  // field scale at A and B
  double Omega_h = 1.0;  // field scale at C and D
  double cycle_time = 1.0;
  bool exact = true;     // violations raise instead of being recorded
};

CycleContext cycle_context(const CycleParams& params);

/// Limit cycle and its thermodynamics at point A (start of the cold isochore).
/// Propagates MarginalCycle and NoConvergence. With exact propagators a
/// failed first/second-law or COP-bound check raises PhysicalityViolation.
CycleReport cycle_report(const CycleParams& params, const ReportOptions& options = {});

/// Same, for hand-built segments (zero-time adiabats, commuting constructions).
CycleReport cycle_report(const std::array<SegmentPropagator, 4>& segments,
                         const CycleContext& context, const ReportOptions& options = {});

}  // namespace otto

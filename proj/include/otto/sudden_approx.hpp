#pragma once

#include <string>
#include <vector>

#include "otto/cycle.hpp"
#include "otto/propagators.hpp"

namespace otto {

// Regime thresholds: "much smaller" is a factor 10, "much larger" a factor 3.
inline constexpr double kMuchSmaller = 0.1;
inline constexpr double kMuchLarger = 3.0;

/// Outcome of an applicability predicate: hard failures reject the request,
/// warnings flag parameters at the margin of the regime.
struct RegimeCheck {
  bool hard_fail = false;
  std::vector<std::string> warnings;
};

RegimeCheck check_adiabat_class(AdiabatClass cls, const WorkingMedium& medium, double tau);

struct ApproxPropagator {
  SegmentPropagator propagator;
  std::vector<std::string> notes;
};

/// Sudden adiabat for a class; ClassInapplicable when the predicate fails hard.
ApproxPropagator approx_adiabat_propagator(AdiabatClass cls, const WorkingMedium& medium,
                                           Direction direction, double tau);

/// Short-time isochore. Dephasing is neglected by all three truncations.
Mat5 approx_isochore_matrix(IsochoreOrder order, double Omega, const BathSegment& bath);
ApproxPropagator approx_isochore_propagator(IsochoreOrder order, const WorkingMedium& medium,
                                            Side side, const BathSegment& bath);

/// Equilibrium quantities shared by the cooling formulas.
struct BathPhysics {
  double Omega_c, Omega_h;
  double E_c, E_h;          // equilibrium energies
  double Gamma_c, Gamma_h;  // heat conductances
};
BathPhysics bath_physics(const CycleParams& p);

struct Appr1Terms {
  double leading = 0.0;     // qc_appr1b
  double correction = 0.0;  // second term, neglected by qc_appr1b
  double total() const { return leading + correction; }
};

/// Case 1: omega_c << J, omega_h >> J, tau_h << tau_c.
Appr1Terms qc_appr1_terms(const CycleParams& p);
double qc_appr1(const CycleParams& p);
double qc_appr1b(const CycleParams& p);

/// Crossings of exp(-Gamma_c tau) and cos(Omega_c tau) in [lo, hi]; these
/// track the sign changes of qc_appr1b along tau_c. Sign changes are found on
/// a uniform grid and bisected; tangential zeros are bisected on the
/// derivative. Returns an empty list when there is no crossing.
std::vector<double> sign_switch_roots(double Omega_c, double Gamma_c, double lo, double hi,
                                      int grid = 10000);
std::vector<double> sign_switch_roots(const WorkingMedium& medium, const BathSegment& cold,
                                      double lo, double hi, int grid = 10000);

/// Case 2: omega_c ~ J, omega_h >> J, second-order isochores.
double qc_appr2(const CycleParams& p);

/// Case 3a; RegimeViolation unless Gamma_c tau_c + Gamma_h tau_h < 2.
double qc_appr3a(const CycleParams& p);

/// Case 3b, mu taken from the chosen adiabat (hot-to-cold by default).
double qc_appr3b(const CycleParams& p, Direction mu_from = Direction::HotToCold);

/// Case-1 work input including the tau_h^2 terms.
double work_appr(const CycleParams& p);
/// Leading order: -tau_h E_h Gamma_h.
double work_first_order(const CycleParams& p);
double cop_appr(const CycleParams& p);
double su_appr(const CycleParams& p);

/// (J / 2 T_c) at maximum cooling power; NoMaximum unless 2 J kappa tau > 1.
double max_cooling_point(double J, double kappa_down_c, double tau_c);
/// Left-hand side of the stationarity condition whose root is max_cooling_point.
double max_cooling_residual(double x, double J, double kappa_down_c, double tau_c);

}  // namespace otto

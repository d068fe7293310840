#pragma once

#include <array>
#include <span>
#include <string_view>

#include "otto/core_model.hpp"
#include "otto/types.hpp"

namespace otto {

enum class SegmentKind { ColdIsochore, CompressionAdiabat, HotIsochore, ExpansionAdiabat };
enum class Direction { ColdToHot, HotToCold };
enum class Side { Cold, Hot };

std::string_view to_string(SegmentKind kind);

/// A segment map on the affine observable space. The last row is always
/// exactly (0, 0, 0, 0, 1).
struct SegmentPropagator {
  Mat5 matrix = Mat5::Identity();
  SegmentKind kind = SegmentKind::ColdIsochore;
  double omega_exit = 0.0;

  Vec5 apply(const Vec5& x) const { return matrix * x; }
  ObservableVector apply(const ObservableVector& x) const {
    return ObservableVector::from_affine(matrix * x.affine());
  }
};

/// Exact isochore at fixed Omega: E relaxes to E_eq at rate Gamma, (L, C)
/// rotate by Omega*tau and decay as K = exp(-(Gamma + gamma Omega^2) tau).
Mat5 isochore_matrix(double Omega, const BathSegment& bath);

SegmentPropagator isochore_propagator(const WorkingMedium& medium, Side side,
                                      const BathSegment& bath);

/// Closed-form unitary adiabat for a constant adiabatic parameter
/// mu = J omega' / Omega^3 between two arbitrary fields. Throws
/// DegenerateAdiabat for omega_from == omega_to.
Mat5 constant_mu_matrix(double J, double omega_from, double omega_to, double tau);

/// Parameters of the constant-mu solution between two fields. theta is the
/// accumulated angle integral Omega dt; the rotation angle is q * theta.
struct AdiabatAngles {
  double K = 0.0;
  double mu = 0.0;
  double q = 1.0;
  double Phi = 0.0;
  double Theta = 0.0;
};
AdiabatAngles adiabat_angles(double J, double omega_from, double omega_to, double tau);

SegmentPropagator adiabat_propagator_constant_mu(const WorkingMedium& medium,
                                                 Direction direction, double tau);

/// Product of `slices` constant-mu steps whose endpoints follow a linear ramp.
Mat5 linear_ramp_matrix(double J, double omega_from, double omega_to, double tau,
                        int slices);

/// Linear ramp with adaptive slice doubling until the entrywise change drops
/// below 1e-9 (at most 2^16 slices).
Mat5 linear_ramp_matrix(double J, double omega_from, double omega_to, double tau);
/// Slice count the adaptive linear ramp settles on.
int linear_ramp_slices(double J, double omega_from, double omega_to, double tau);

SegmentPropagator adiabat_propagator_linear(const WorkingMedium& medium,
                                            Direction direction, double tau,
                                            int slices);
SegmentPropagator adiabat_propagator_linear(const WorkingMedium& medium,
                                            Direction direction, double tau);

SegmentPropagator adiabat_propagator(const WorkingMedium& medium, Direction direction,
                                     const AdiabatSegment& adiabat);

/// U_hc * U_h * U_ch * U_c for segments given in cycle order starting at A.
/// Throws SegmentOrderMismatch otherwise.
Mat5 global_propagator(std::span<const SegmentPropagator> segments);

/// Frobenius norm of [U_ab, U_c].
double commutator_norm(const Mat5& U_ab, const Mat5& U_c);

/// Largest eigenvalue modulus of the upper-left 4x4 block.
double spectral_radius(const Mat5& U);

}  // namespace otto

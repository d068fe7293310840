#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "otto/core_model.hpp"
#include "otto/types.hpp"

// Brute-force reference dynamics on the full 4x4 density matrix in the
// product basis |uu>, |ud>, |du>, |dd>. Nothing here uses the 5-vector
// propagators, so agreement between the two is a real check.
namespace otto::oracle {

using DenseState = CMat4;
using CVec4 = Eigen::Vector4cd;

struct SpinOperators {
  CMat4 B1, B2, B3, B5;
};
const SpinOperators& spin_operators();

/// omega B1 + J B2.
CMat4 build_hamiltonian(double omega, double J);

/// H, L, C, D operators at field omega, in that order.
std::array<CMat4, 4> observable_operators(double omega, double J);

/// Instantaneous eigenvectors with energies -Omega, 0, 0, +Omega. The zero
/// subspace is fixed to the symmetric/antisymmetric one-up combinations.
struct EnergyBasis {
  CVec4 g, s, a, e;
};
/// Throws DegenerateBasisAmbiguity if the fixed zero-energy pair does not
/// diagonalise H.
EnergyBasis energy_basis(double omega, double J);

/// Four lowering (sqrt(kappa_down)) and four raising (sqrt(kappa_up)) jumps
/// along the ladder e -> {s, a} -> g.
std::vector<CMat4> build_jump_operators(double omega, double J, double kappa_down,
                                        double kappa_up);

/// State with prescribed (E, L, C, D): populations from the level structure,
/// the g/e coherence solved from the L and C constraints.
DenseState dense_from_observables(const ObservableVector& x, double omega, double J);
ObservableVector expectations(const DenseState& rho, double omega, double J);

struct Dissipation {
  double kappa_down = 0.0;
  double kappa_up = 0.0;
  double gamma = 0.0;
};

/// One segment for the integrator: field schedule and (optional) bath.
struct OracleSegment {
  double J = 1.0;
  double tau = 0.0;
  std::function<double(double)> omega;  // omega(t), t in [0, tau]
  std::optional<Dissipation> bath;
};

OracleSegment isochore_segment(double omega, double J, const BathSegment& bath);
/// omega(t) keeping J omega' / Omega^3 constant between the two fields.
OracleSegment constant_mu_segment(double J, double omega_from, double omega_to, double tau);
OracleSegment linear_segment(double J, double omega_from, double omega_to, double tau);

/// d rho / dt. The coherent part uses H/2 so that (L, C) rotate at the level
/// spacing Omega; dephasing is -gamma [H/2, [H/2, rho]].
DenseState lindblad_rhs(const DenseState& rho, const CMat4& H,
                        const std::vector<CMat4>& jumps, double gamma);

struct EvolveOptions {
  int initial_steps = 128;
  double target = 1e-8;       // endpoint observable change on halving
  int max_steps = 1 << 20;
  int samples = 0;            // if > 0, also record states at k tau / samples
};

struct Trajectory {
  DenseState final_state;
  std::vector<double> times;
  std::vector<DenseState> states;  // only when samples > 0
  int steps = 0;
  double halving_change = 0.0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
};

/// Classical RK4 at fixed step, halving dt until the endpoint observables
/// move by less than `target`. Throws StepTooLarge at max_steps.
Trajectory evolve(const DenseState& rho0, const OracleSegment& segment,
                  const EvolveOptions& options = {});

/// Observable vector after one segment, starting from x at the entry field.
ObservableVector propagate(const ObservableVector& x, const OracleSegment& segment,
                           const EvolveOptions& options = {});

double von_neumann_entropy(const DenseState& rho);

}  // namespace otto::oracle

#pragma once

#include <utility>

#include "otto/types.hpp"

namespace otto {

/// Spin-pair working medium H = omega(t) B1 + J B2 (hbar = k_B = 1).
/// The instantaneous spectrum is {-Omega, 0, 0, Omega}, Omega = sqrt(omega^2 + J^2).
struct WorkingMedium {
  double J = 1.0;
  double omega_c = 0.5;
  double omega_h = 2.0;

  /// Throws InvalidParameter unless J > 0 and 0 < omega_c < omega_h.
  void validate() const;
  double Omega_c() const;
  double Omega_h() const;
  double compression_ratio() const { return Omega_c() / Omega_h(); }
};

/// One isochore: bath temperature, downward rate, dephasing and duration.
struct BathSegment {
  double T = 1.0;
  double kappa_down = 1.0;
  double gamma = 0.0;
  double tau = 1.0;

  void validate() const;
  /// Detailed balance: kappa_up = kappa_down * exp(-Omega / T).
  double kappa_up(double Omega) const;
  /// Heat conductance Gamma = kappa_down + kappa_up.
  double relaxation_rate(double Omega) const;
};

enum class Schedule { ConstantMu, Linear };

struct AdiabatSegment {
  double tau = 0.1;
  Schedule schedule = Schedule::ConstantMu;

  void validate() const;
};

/// Expectation values (E, L, C, D) of the operators H, L, C, D; the affine
/// unit component is implicit and always exactly 1.
struct ObservableVector {
  double E = 0.0;
  double L = 0.0;
  double C = 0.0;
  double D = 0.0;

  Vec5 affine() const;
  /// Throws InvalidParameter if the unit component differs from 1.
  static ObservableVector from_affine(const Vec5& x);
};

/// 4x4 state in the instantaneous energy basis ordered (g, s, a, e), where
/// g/e carry energy -Omega/+Omega and s/a are the symmetric/antisymmetric
/// zero-energy states.
struct EnergyDensityMatrix {
  CMat4 rho;
  double Omega = 1.0;
};

struct Entropies {
  double energy = 0.0;        // S_E, Shannon entropy of the populations
  double von_neumann = 0.0;   // S_VN
};

double big_omega(double omega, double J);

/// -Omega tanh(Omega / 2T): Gibbs energy of the spectrum {-Omega, 0, 0, Omega}.
double equilibrium_energy(double Omega, double T);

/// Gibbs observable vector (E_eq, 0, 0, E_eq^2 / Omega).
ObservableVector equilibrium_vector(double Omega, double T);

/// Builds the energy-frame state and checks that it is physical:
/// eigenvalues below -1e-10 raise PhysicalityViolation.
EnergyDensityMatrix reconstruct_rho(const ObservableVector& x, double Omega);

/// Eigenvalues in [-1e-10, 0) are clamped to 0; 0 ln 0 = 0.
Entropies entropies(const EnergyDensityMatrix& rho);

/// Squared off-diagonal weight (L^2 + C^2) / (2 Omega^2).
double coherence(const ObservableVector& x, double Omega);

/// S_E of the Gibbs state at (Omega, T); used for isotherm curves.
double gibbs_energy_entropy(double Omega, double T);

}  // namespace otto

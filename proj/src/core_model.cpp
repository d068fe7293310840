#include "otto/core_model.hpp"

#include <cmath>
#include <sstream>

#include "otto/errors.hpp"

namespace otto {
namespace {

constexpr double kEigenFloor = 1e-10;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

[[noreturn]] void invalid(const std::string& what) { throw InvalidParameter(what); }

}  // namespace

void WorkingMedium::validate() const {
  if (!(J > 0.0)) invalid("working medium: J must be > 0");
  if (!(omega_c > 0.0)) invalid("working medium: omega_c must be > 0");
  if (!(omega_h > omega_c)) invalid("working medium: omega_h must exceed omega_c");
}

double WorkingMedium::Omega_c() const { return big_omega(omega_c, J); }
double WorkingMedium::Omega_h() const { return big_omega(omega_h, J); }

void BathSegment::validate() const {
  if (!(T > 0.0)) invalid("bath: T must be > 0");
  if (!(kappa_down > 0.0)) invalid("bath: kappa_down must be > 0");
  if (!(gamma >= 0.0)) invalid("bath: gamma must be >= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau)) invalid("bath: tau must be >= 0");
}

double BathSegment::kappa_up(double Omega) const {
  return kappa_down * std::exp(-Omega / T);
}

double BathSegment::relaxation_rate(double Omega) const {
  return kappa_down + kappa_up(Omega);
}

void AdiabatSegment::validate() const {
  if (!(tau > 0.0)) invalid("adiabat: tau must be > 0");
}

Vec5 ObservableVector::affine() const {
  Vec5 v;
  v << E, L, C, D, 1.0;
  return v;
}

ObservableVector ObservableVector::from_affine(const Vec5& x) {
  if (x(4) != 1.0) {
    std::ostringstream os;
    os << "observable vector: unit component is " << x(4) << ", expected 1";
    invalid(os.str());
  }
  return {x(0), x(1), x(2), x(3)};
}

double big_omega(double omega, double J) { return std::hypot(omega, J); }

double equilibrium_energy(double Omega, double T) {
  return -Omega * std::tanh(Omega / (2.0 * T));
}

ObservableVector equilibrium_vector(double Omega, double T) {
  const double E = equilibrium_energy(Omega, T);
  return {E, 0.0, 0.0, E * E / Omega};
}

EnergyDensityMatrix reconstruct_rho(const ObservableVector& x, double Omega) {
  if (!(Omega > 0.0)) invalid("reconstruct_rho: Omega must be > 0");
  const double inv = 1.0 / Omega;
  CMat4 rho = CMat4::Zero();
  rho(0, 0) = 0.25 * (1.0 + (x.D - 2.0 * x.E) * inv);
  rho(1, 1) = 0.25 * (1.0 - x.D * inv);
  rho(2, 2) = rho(1, 1);
  rho(3, 3) = 0.25 * (1.0 + (x.D + 2.0 * x.E) * inv);
  rho(0, 3) = std::complex<double>(x.L, x.C) * (0.5 * inv);
  rho(3, 0) = std::conj(rho(0, 3));

  Eigen::SelfAdjointEigenSolver<CMat4> es(rho, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -kEigenFloor) {
    std::ostringstream os;
    os << "observable vector (E=" << x.E << ", L=" << x.L << ", C=" << x.C
       << ", D=" << x.D << ") at Omega=" << Omega
       << " is not a state: eigenvalue " << lowest;
    throw PhysicalityViolation(os.str());
  }
  return {rho, Omega};
}

Entropies entropies(const EnergyDensityMatrix& state) {
  Entropies s;
  for (int i = 0; i < 4; ++i) {
    const double p = state.rho(i, i).real();
    s.energy -= xlogx(p < 0.0 && p >= -kEigenFloor ? 0.0 : p);
  }
  Eigen::SelfAdjointEigenSolver<CMat4> es(state.rho, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 4; ++i) {
    const double lambda = es.eigenvalues()(i);
    s.von_neumann -= xlogx(lambda < 0.0 ? 0.0 : lambda);
  }
  return s;
}

double coherence(const ObservableVector& x, double Omega) {
  return (x.L * x.L + x.C * x.C) / (2.0 * Omega * Omega);
}

double gibbs_energy_entropy(double Omega, double T) {
  const ObservableVector g = equilibrium_vector(Omega, T);
  return entropies(reconstruct_rho(g, Omega)).energy;
}

}  // namespace otto

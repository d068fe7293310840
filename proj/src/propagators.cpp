#include "otto/propagators.hpp"

#include <cmath>
#include <sstream>

#include "otto/errors.hpp"

namespace otto {
namespace {

constexpr SegmentKind kCycleOrder[] = {
    SegmentKind::ColdIsochore, SegmentKind::CompressionAdiabat,
    SegmentKind::HotIsochore, SegmentKind::ExpansionAdiabat};

constexpr int kMaxSlices = 1 << 16;
constexpr double kSliceTolerance = 1e-9;

}  // namespace

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::ColdIsochore: return "cold-isochore";
    case SegmentKind::CompressionAdiabat: return "compression-adiabat";
    case SegmentKind::HotIsochore: return "hot-isochore";
    case SegmentKind::ExpansionAdiabat: return "expansion-adiabat";
  }
  return "unknown";
}

Mat5 isochore_matrix(double Omega, const BathSegment& bath) {
  const double Gamma = bath.relaxation_rate(Omega);
  const double E_eq = equilibrium_energy(Omega, bath.T);
  const double alpha = std::exp(-Gamma * bath.tau);
  const double K = std::exp(-(Gamma + bath.gamma * Omega * Omega) * bath.tau);
  const double phase = Omega * bath.tau;
  const double c = std::cos(phase);
  const double s = std::sin(phase);

  Mat5 U = Mat5::Zero();
  U(0, 0) = alpha;
  U(0, 4) = E_eq * (1.0 - alpha);
  U(1, 1) = K * c;
  U(1, 2) = -K * s;
  U(2, 1) = K * s;
  U(2, 2) = K * c;
  // D relaxes at 2 Gamma, driven by E through the four-transition ladder.
  U(3, 0) = 2.0 * E_eq * (alpha - alpha * alpha) / Omega;
  U(3, 3) = alpha * alpha;
  U(3, 4) = E_eq * E_eq / Omega * (1.0 - alpha) * (1.0 - alpha);
  U(4, 4) = 1.0;
  return U;
}

SegmentPropagator isochore_propagator(const WorkingMedium& medium, Side side,
                                      const BathSegment& bath) {
  medium.validate();
  bath.validate();
  const bool cold = side == Side::Cold;
  const double omega = cold ? medium.omega_c : medium.omega_h;
  return {isochore_matrix(big_omega(omega, medium.J), bath),
          cold ? SegmentKind::ColdIsochore : SegmentKind::HotIsochore, omega};
}

AdiabatAngles adiabat_angles(double J, double omega_from, double omega_to, double tau) {
  if (omega_from == omega_to) {
    throw DegenerateAdiabat("adiabat with omega_from == omega_to has no ramp");
  }
  if (!(tau > 0.0)) throw InvalidParameter("adiabat: tau must be > 0");
  const double O_from = big_omega(omega_from, J);
  const double O_to = big_omega(omega_to, J);
  AdiabatAngles a;
  a.K = (omega_to / O_to - omega_from / O_from) / J;
  a.mu = a.K / tau;
  a.q = std::sqrt(1.0 + a.mu * a.mu);
  a.Phi = std::asin(omega_to / O_to) - std::asin(omega_from / O_from);
  a.Theta = tau / a.K * a.Phi;
  return a;
}

Mat5 constant_mu_matrix(double J, double omega_from, double omega_to, double tau) {
  const AdiabatAngles a = adiabat_angles(J, omega_from, omega_to, tau);
  const double mu = a.mu;
  const double q = a.q;
  const double q2 = q * q;
  const double c = std::cos(q * a.Theta);
  const double s = std::sin(q * a.Theta);
  const double scale = big_omega(omega_to, J) / big_omega(omega_from, J);

  Mat5 U = Mat5::Zero();
  U(0, 0) = (1.0 + mu * mu * c) / q2;
  U(0, 1) = -mu * s / q;
  U(0, 2) = mu * (1.0 - c) / q2;
  U(1, 0) = mu * s / q;
  U(1, 1) = c;
  U(1, 2) = -s / q;
  U(2, 0) = mu * (1.0 - c) / q2;
  U(2, 1) = s / q;
  U(2, 2) = (mu * mu + c) / q2;
  U(3, 3) = 1.0;
  U.topLeftCorner<4, 4>() *= scale;
  U(4, 4) = 1.0;
  return U;
}

SegmentPropagator adiabat_propagator_constant_mu(const WorkingMedium& medium,
                                                 Direction direction, double tau) {
  medium.validate();
  const bool up = direction == Direction::ColdToHot;
  const double from = up ? medium.omega_c : medium.omega_h;
  const double to = up ? medium.omega_h : medium.omega_c;
  return {constant_mu_matrix(medium.J, from, to, tau),
          up ? SegmentKind::CompressionAdiabat : SegmentKind::ExpansionAdiabat, to};
}

Mat5 linear_ramp_matrix(double J, double omega_from, double omega_to, double tau,
                        int slices) {
  if (slices < 1) throw InvalidParameter("linear adiabat: slices must be >= 1");
  if (omega_from == omega_to) {
    throw DegenerateAdiabat("adiabat with omega_from == omega_to has no ramp");
  }
  const double dt = tau / slices;
  const double step = (omega_to - omega_from) / slices;
  Mat5 U = Mat5::Identity();
  double w0 = omega_from;
  for (int k = 1; k <= slices; ++k) {
    const double w1 = k == slices ? omega_to : omega_from + step * k;
    U = constant_mu_matrix(J, w0, w1, dt) * U;
    w0 = w1;
  }
  return U;
}

Mat5 linear_ramp_matrix(double J, double omega_from, double omega_to, double tau) {
  const int slices = linear_ramp_slices(J, omega_from, omega_to, tau);
  return linear_ramp_matrix(J, omega_from, omega_to, tau, slices);
}

int linear_ramp_slices(double J, double omega_from, double omega_to, double tau) {
  int slices = 64;
  Mat5 prev = linear_ramp_matrix(J, omega_from, omega_to, tau, slices);
  while (slices < kMaxSlices) {
    slices *= 2;
    Mat5 next = linear_ramp_matrix(J, omega_from, omega_to, tau, slices);
    const double change = (next - prev).cwiseAbs().maxCoeff();
    prev = std::move(next);
    if (change < kSliceTolerance) break;
  }
  return slices;
}

SegmentPropagator adiabat_propagator_linear(const WorkingMedium& medium,
                                            Direction direction, double tau,
                                            int slices) {
  medium.validate();
  const bool up = direction == Direction::ColdToHot;
  const double from = up ? medium.omega_c : medium.omega_h;
  const double to = up ? medium.omega_h : medium.omega_c;
  return {linear_ramp_matrix(medium.J, from, to, tau, slices),
          up ? SegmentKind::CompressionAdiabat : SegmentKind::ExpansionAdiabat, to};
}

SegmentPropagator adiabat_propagator_linear(const WorkingMedium& medium,
                                            Direction direction, double tau) {
  medium.validate();
  const bool up = direction == Direction::ColdToHot;
  const double from = up ? medium.omega_c : medium.omega_h;
  const double to = up ? medium.omega_h : medium.omega_c;
  return {linear_ramp_matrix(medium.J, from, to, tau),
          up ? SegmentKind::CompressionAdiabat : SegmentKind::ExpansionAdiabat, to};
}

SegmentPropagator adiabat_propagator(const WorkingMedium& medium, Direction direction,
                                     const AdiabatSegment& adiabat) {
  adiabat.validate();
  return adiabat.schedule == Schedule::ConstantMu
             ? adiabat_propagator_constant_mu(medium, direction, adiabat.tau)
             : adiabat_propagator_linear(medium, direction, adiabat.tau);
}

Mat5 global_propagator(std::span<const SegmentPropagator> segments) {
  if (segments.size() != 4) {
    throw SegmentOrderMismatch("global propagator needs exactly four segments");
  }
  Mat5 U = Mat5::Identity();
  for (std::size_t i = 0; i < 4; ++i) {
    if (segments[i].kind != kCycleOrder[i]) {
      std::ostringstream os;
      os << "segment " << i << " is " << to_string(segments[i].kind) << ", expected "
         << to_string(kCycleOrder[i]);
      throw SegmentOrderMismatch(os.str());
    }
    U = segments[i].matrix * U;
  }
  return U;
}

double commutator_norm(const Mat5& U_ab, const Mat5& U_c) {
  return (U_ab * U_c - U_c * U_ab).norm();
}

double spectral_radius(const Mat5& U) {
  const Mat4 M = U.topLeftCorner<4, 4>();
  Eigen::EigenSolver<Mat4> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace otto

#include "otto/lindblad_oracle.hpp"

#include <cmath>
#include <sstream>

#include "otto/errors.hpp"

namespace otto::oracle {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

CMat4 outer(const CVec4& a, const CVec4& b) { return a * b.adjoint(); }

double observable_distance(const DenseState& a, const DenseState& b, double omega, double J) {
  const ObservableVector x = expectations(a, omega, J);
  const ObservableVector y = expectations(b, omega, J);
  return (x.affine() - y.affine()).cwiseAbs().maxCoeff();
}

struct Generator {
  const OracleSegment& seg;
  std::vector<CMat4> jumps;

  explicit Generator(const OracleSegment& s) : seg(s) {
    if (seg.bath) {
      // Isochores keep omega fixed, so the jump operators are built once.
      jumps = build_jump_operators(seg.omega(0.0), seg.J, seg.bath->kappa_down,
                                   seg.bath->kappa_up);
    }
  }
  DenseState operator()(double t, const DenseState& rho) const {
    return lindblad_rhs(rho, build_hamiltonian(seg.omega(t), seg.J), jumps,
                        seg.bath ? seg.bath->gamma : 0.0);
  }
};

struct Run {
  DenseState rho;
  std::vector<DenseState> samples;
  double trace_err = 0.0, herm_err = 0.0, min_eig = 1.0;
};

Run integrate(const DenseState& rho0, const Generator& f, double tau, int n, int samples,
              bool diagnostics) {
  Run r;
  r.rho = rho0;
  const double dt = tau / n;
  const int stride = samples > 0 ? n / samples : 0;
  if (samples > 0) r.samples.push_back(rho0);
  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    const DenseState k1 = f(t, r.rho);
    const DenseState k2 = f(t + 0.5 * dt, r.rho + 0.5 * dt * k1);
    const DenseState k3 = f(t + 0.5 * dt, r.rho + 0.5 * dt * k2);
    const DenseState k4 = f(t + dt, r.rho + dt * k3);
    r.rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (diagnostics) {
      r.trace_err = std::max(r.trace_err, std::abs(r.rho.trace() - 1.0));
      r.herm_err = std::max(r.herm_err, (r.rho - r.rho.adjoint()).cwiseAbs().maxCoeff());
      const Eigen::SelfAdjointEigenSolver<CMat4> es(r.rho, Eigen::EigenvaluesOnly);
      r.min_eig = std::min(r.min_eig, es.eigenvalues().minCoeff());
    }
    if (stride > 0 && (k + 1) % stride == 0) r.samples.push_back(r.rho);
  }
  return r;
}

}  // namespace

const SpinOperators& spin_operators() {
  static const SpinOperators ops = [] {
    SpinOperators o;
    o.B1 = CMat4::Zero();
    o.B1(0, 0) = 1.0;
    o.B1(3, 3) = -1.0;
    o.B2 = CMat4::Zero();
    o.B2(0, 3) = o.B2(3, 0) = 1.0;
    o.B3 = CMat4::Zero();
    o.B3(0, 3) = -I;
    o.B3(3, 0) = I;
    o.B5 = CMat4::Zero();
    o.B5.diagonal() << 1.0, -1.0, -1.0, 1.0;
    return o;
  }();
  return ops;
}

CMat4 build_hamiltonian(double omega, double J) {
  const auto& b = spin_operators();
  return omega * b.B1 + J * b.B2;
}

std::array<CMat4, 4> observable_operators(double omega, double J) {
  const auto& b = spin_operators();
  const double Omega = big_omega(omega, J);
  return {omega * b.B1 + J * b.B2, -J * b.B1 + omega * b.B2, Omega * b.B3, Omega * b.B5};
}

EnergyBasis energy_basis(double omega, double J) {
  const CMat4 H = build_hamiltonian(omega, J);
  const double Omega = big_omega(omega, J);
  EnergyBasis basis;
  basis.s << 0.0, 1.0, 1.0, 0.0;
  basis.a << 0.0, 1.0, -1.0, 0.0;
  basis.s /= std::sqrt(2.0);
  basis.a /= std::sqrt(2.0);
  if ((H * basis.s).norm() > 1e-12 * Omega || (H * basis.a).norm() > 1e-12 * Omega) {
    throw DegenerateBasisAmbiguity("zero-energy pair does not diagonalise H");
  }
  const Eigen::SelfAdjointEigenSolver<CMat4> es(H);
  // Eigenvalues ascend: -Omega, 0, 0, +Omega.
  basis.g = es.eigenvectors().col(0);
  basis.e = es.eigenvectors().col(3);
  return basis;
}

std::vector<CMat4> build_jump_operators(double omega, double J, double kappa_down,
                                        double kappa_up) {
  const EnergyBasis b = energy_basis(omega, J);
  const double down = std::sqrt(kappa_down);
  const double up = std::sqrt(kappa_up);
  std::vector<CMat4> F;
  for (const CVec4* m : {&b.s, &b.a}) {
    F.push_back(down * outer(*m, b.e));
    F.push_back(down * outer(b.g, *m));
    F.push_back(up * outer(b.e, *m));
    F.push_back(up * outer(*m, b.g));
  }
  return F;
}

DenseState dense_from_observables(const ObservableVector& x, double omega, double J) {
  const EnergyBasis b = energy_basis(omega, J);
  const double Omega = big_omega(omega, J);
  const double p_g = 0.25 * (1.0 + (x.D - 2.0 * x.E) / Omega);
  const double p_e = 0.25 * (1.0 + (x.D + 2.0 * x.E) / Omega);
  const double p_m = 0.25 * (1.0 - x.D / Omega);
  DenseState rho = p_g * outer(b.g, b.g) + p_e * outer(b.e, b.e) +
                   p_m * (outer(b.s, b.s) + outer(b.a, b.a));
  // rho += z |g><e| + h.c.; tr(|g><e| A) = <e|A|g> fixes z from L and C.
  const auto ops = observable_operators(omega, J);
  const CMat4 ge = outer(b.g, b.e);
  const cd l = (ge * ops[1]).trace();
  const cd c = (ge * ops[2]).trace();
  Eigen::Matrix2d A;
  A << 2.0 * l.real(), -2.0 * l.imag(), 2.0 * c.real(), -2.0 * c.imag();
  const Eigen::Vector2d z = A.fullPivLu().solve(Eigen::Vector2d(x.L, x.C));
  const cd zc{z(0), z(1)};
  rho += zc * ge + std::conj(zc) * ge.adjoint();
  return rho;
}

ObservableVector expectations(const DenseState& rho, double omega, double J) {
  const auto ops = observable_operators(omega, J);
  return {(rho * ops[0]).trace().real(), (rho * ops[1]).trace().real(),
          (rho * ops[2]).trace().real(), (rho * ops[3]).trace().real()};
}

OracleSegment isochore_segment(double omega, double J, const BathSegment& bath) {
  const double Omega = big_omega(omega, J);
  OracleSegment s;
  s.J = J;
  s.tau = bath.tau;
  s.omega = [omega](double) { return omega; };
  s.bath = Dissipation{bath.kappa_down, bath.kappa_up(Omega), bath.gamma};
  return s;
}

OracleSegment constant_mu_segment(double J, double omega_from, double omega_to, double tau) {
  const double u0 = omega_from / big_omega(omega_from, J);
  const double u1 = omega_to / big_omega(omega_to, J);
  OracleSegment s;
  s.J = J;
  s.tau = tau;
  // u = omega / Omega moves linearly in time when mu is constant.
  s.omega = [=](double t) {
    const double u = u0 + (u1 - u0) * t / tau;
    return J * u / std::sqrt(1.0 - u * u);
  };
  return s;
}

OracleSegment linear_segment(double J, double omega_from, double omega_to, double tau) {
  OracleSegment s;
  s.J = J;
  s.tau = tau;
  s.omega = [=](double t) { return omega_from + (omega_to - omega_from) * t / tau; };
  return s;
}

DenseState lindblad_rhs(const DenseState& rho, const CMat4& H,
                        const std::vector<CMat4>& jumps, double gamma) {
  const CMat4 h = 0.5 * H;
  const DenseState comm = h * rho - rho * h;
  DenseState d = -I * comm;
  for (const CMat4& f : jumps) {
    const CMat4 fd = f.adjoint();
    const CMat4 fdf = fd * f;
    d += f * rho * fd - 0.5 * (fdf * rho + rho * fdf);
  }
  if (gamma != 0.0) d -= gamma * (h * comm - comm * h);
  return d;
}

Trajectory evolve(const DenseState& rho0, const OracleSegment& segment,
                  const EvolveOptions& options) {
  if (!(segment.tau > 0.0)) throw InvalidParameter("oracle: segment tau must be > 0");
  const Generator f(segment);
  const double omega_end = segment.omega(segment.tau);
  int n = std::max(options.initial_steps, 1);
  if (options.samples > 0) n = ((n + options.samples - 1) / options.samples) * options.samples;
  Run coarse = integrate(rho0, f, segment.tau, n, 0, false);
  for (;;) {
    const int fine_n = 2 * n;
    if (fine_n > options.max_steps) {
      std::ostringstream os;
      os << "oracle step halving reached " << n << " steps without meeting " << options.target;
      throw StepTooLarge(os.str());
    }
    Run fine = integrate(rho0, f, segment.tau, fine_n, 0, false);
    const double change = observable_distance(coarse.rho, fine.rho, omega_end, segment.J);
    if (change < options.target) {
      // Re-run the accepted resolution with diagnostics and samples.
      Run done = integrate(rho0, f, segment.tau, fine_n, options.samples, true);
      Trajectory tr;
      tr.final_state = done.rho;
      tr.steps = fine_n;
      tr.halving_change = change;
      tr.max_trace_error = done.trace_err;
      tr.max_hermiticity_error = done.herm_err;
      tr.min_eigenvalue = done.min_eig;
      tr.states = std::move(done.samples);
      for (int k = 0; k < static_cast<int>(tr.states.size()); ++k) {
        tr.times.push_back(segment.tau * k / options.samples);
      }
      return tr;
    }
    coarse = std::move(fine);
    n = fine_n;
  }
}

ObservableVector propagate(const ObservableVector& x, const OracleSegment& segment,
                           const EvolveOptions& options) {
  const DenseState rho0 = dense_from_observables(x, segment.omega(0.0), segment.J);
  const Trajectory tr = evolve(rho0, segment, options);
  return expectations(tr.final_state, segment.omega(segment.tau), segment.J);
}

double von_neumann_entropy(const DenseState& rho) {
  const Eigen::SelfAdjointEigenSolver<CMat4> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace otto::oracle

#include "otto/sudden_approx.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "otto/errors.hpp"

namespace otto {
namespace {

using std::numbers::pi;

std::string fmt(const char* what, double value) {
  std::ostringstream os;
  os << what << " (" << value << ")";
  return os.str();
}

// Rotation of the (E, L) pair by phi with C and D frozen, scaled by the
// compression ratio; the common shape of every sudden adiabat class.
Mat5 sudden_rotation(double phi, double scale) {
  Mat5 U = Mat5::Zero();
  U(0, 0) = std::cos(phi);
  U(0, 1) = -std::sin(phi);
  U(1, 0) = std::sin(phi);
  U(1, 1) = std::cos(phi);
  U(2, 2) = 1.0;
  U(3, 3) = 1.0;
  U.topLeftCorner<4, 4>() *= scale;
  U(4, 4) = 1.0;
  return U;
}

struct Ramp {
  double from, to, O_from, O_to;
  SegmentKind kind;
};

Ramp ramp(const WorkingMedium& m, Direction d) {
  const bool up = d == Direction::ColdToHot;
  Ramp r{};
  r.from = up ? m.omega_c : m.omega_h;
  r.to = up ? m.omega_h : m.omega_c;
  r.O_from = big_omega(r.from, m.J);
  r.O_to = big_omega(r.to, m.J);
  r.kind = up ? SegmentKind::CompressionAdiabat : SegmentKind::ExpansionAdiabat;
  return r;
}

}  // namespace

std::string_view to_string(AdiabatClass c) {
  switch (c) {
    case AdiabatClass::SuddenGeneric: return "sudden-generic";
    case AdiabatClass::Class1: return "class-1";
    case AdiabatClass::Class2: return "class-2";
    case AdiabatClass::Class3a: return "class-3a";
    case AdiabatClass::Class3b: return "class-3b";
  }
  return "unknown";
}

std::string_view to_string(IsochoreOrder o) {
  switch (o) {
    case IsochoreOrder::FrozenRotation: return "frozen-rotation";
    case IsochoreOrder::FirstOrder: return "first-order";
    case IsochoreOrder::SecondOrder: return "second-order";
  }
  return "unknown";
}

RegimeCheck check_adiabat_class(AdiabatClass cls, const WorkingMedium& m, double tau) {
  RegimeCheck r;
  const double J = m.J;
  const double sudden_time = kMuchSmaller * 2.0 * pi / m.Omega_h();
  auto warn = [&](const std::string& w) { r.warnings.push_back(w); };
  auto require_short = [&] {
    if (tau > sudden_time) warn(fmt("tau_adi not << 2 pi / Omega_h", tau));
  };
  switch (cls) {
    case AdiabatClass::SuddenGeneric: {
      const double mu = std::abs(adiabat_angles(J, m.omega_c, m.omega_h, tau).mu);
      if (mu < 1.0 / kMuchSmaller) warn(fmt("|mu| not >> 1", mu));
      break;
    }
    case AdiabatClass::Class1:
      if (m.omega_c > J || m.omega_h < J) r.hard_fail = true;
      if (m.omega_c > kMuchSmaller * J) warn(fmt("omega_c not << J", m.omega_c));
      if (m.omega_h < kMuchLarger * J) warn(fmt("omega_h not >> J", m.omega_h));
      require_short();
      break;
    case AdiabatClass::Class2:
      if (m.omega_c < 0.25 * J || m.omega_c > 4.0 * J || m.omega_h < J) r.hard_fail = true;
      if (m.omega_c < 0.9 * J / std::sqrt(2.0) || m.omega_c > 1.1 * J) {
        warn(fmt("omega_c not ~ J", m.omega_c));
      }
      if (m.omega_h < kMuchLarger * J) warn(fmt("omega_h not >> J", m.omega_h));
      require_short();
      break;
    case AdiabatClass::Class3a:
    case AdiabatClass::Class3b:
      if (m.omega_c < J) r.hard_fail = true;
      if (m.omega_c < kMuchLarger * J) warn(fmt("omega_c not >> J", m.omega_c));
      if (cls == AdiabatClass::Class3a) {
        require_short();
      } else {
        const double mu = std::abs(adiabat_angles(J, m.omega_h, m.omega_c, tau).mu);
        if (mu >= 1.0) warn(fmt("|mu| not < 1", mu));
        if (tau < 0.1 || tau > 10.0) warn(fmt("tau_adi not ~ 1", tau));
      }
      break;
  }
  return r;
}

ApproxPropagator approx_adiabat_propagator(AdiabatClass cls, const WorkingMedium& m,
                                           Direction direction, double tau) {
  m.validate();
  if (!(tau > 0.0)) throw InvalidParameter("adiabat: tau must be > 0");
  RegimeCheck check = check_adiabat_class(cls, m, tau);
  if (check.hard_fail) {
    std::ostringstream os;
    os << to_string(cls) << " adiabat does not apply to J=" << m.J
       << ", omega_c=" << m.omega_c << ", omega_h=" << m.omega_h;
    throw ClassInapplicable(os.str());
  }
  const Ramp r = ramp(m, direction);
  const double scale = r.O_to / r.O_from;
  // Rotation angles are written for cold-to-hot and negated on the way back.
  const double sign = direction == Direction::ColdToHot ? 1.0 : -1.0;

  ApproxPropagator out;
  out.notes = std::move(check.warnings);
  Mat5 U;
  switch (cls) {
    case AdiabatClass::SuddenGeneric:
      U = sudden_rotation(adiabat_angles(m.J, r.from, r.to, tau).Phi, scale);
      break;
    case AdiabatClass::Class1:
      U = sudden_rotation(sign * pi / 2.0, scale);
      break;
    case AdiabatClass::Class2:
      if (m.omega_c == m.J) {
        U = sudden_rotation(sign * pi / 4.0, scale);
        U(0, 0) = U(1, 1) = scale / std::sqrt(2.0);
        U(0, 1) = -sign * scale / std::sqrt(2.0);
        U(1, 0) = sign * scale / std::sqrt(2.0);
        out.notes.emplace_back("class-2 printed 1/sqrt(2) form (omega_c == J)");
      } else {
        const double phi = pi / 2.0 - std::asin(m.omega_c / m.Omega_c());
        U = sudden_rotation(sign * phi, scale);
        out.notes.emplace_back("class-2 evaluated with exact arcsin(omega_c / Omega_c)");
      }
      break;
    case AdiabatClass::Class3a:
      U = sudden_rotation(0.0, scale);
      break;
    case AdiabatClass::Class3b: {
      const double mu = adiabat_angles(m.J, r.from, r.to, tau).mu;
      const double c = std::cos(tau * m.J);
      const double s = std::sin(tau * m.J);
      U = Mat5::Zero();
      U(0, 0) = 1.0;
      U(0, 1) = -mu * s;
      U(0, 2) = mu * (1.0 - c);
      U(1, 0) = mu * s;
      U(1, 1) = c;
      U(1, 2) = -s;
      U(2, 0) = mu * (1.0 - c);
      U(2, 1) = s;
      U(2, 2) = c;
      U(3, 3) = 1.0;
      U.topLeftCorner<4, 4>() *= scale;
      U(4, 4) = 1.0;
      break;
    }
  }
  out.propagator = {U, r.kind, r.to};
  return out;
}

Mat5 approx_isochore_matrix(IsochoreOrder order, double Omega, const BathSegment& bath) {
  const double Gamma = bath.relaxation_rate(Omega);
  const double E = equilibrium_energy(Omega, bath.T);
  const double tau = bath.tau;
  const double G = Gamma * tau;
  Mat5 U = Mat5::Zero();
  U(4, 4) = 1.0;
  switch (order) {
    case IsochoreOrder::FrozenRotation: {
      const double a = std::exp(-G);
      U(0, 0) = a;
      U(0, 4) = E * (1.0 - a);
      U(1, 1) = a;
      U(2, 2) = a;
      U(3, 0) = 2.0 * E * (a - a * a) / Omega;
      U(3, 3) = a * a;
      U(3, 4) = E * E / Omega * (1.0 - a) * (1.0 - a);
      break;
    }
    case IsochoreOrder::FirstOrder:
      U(0, 0) = 1.0 - G;
      U(0, 4) = E * G;
      U(1, 1) = 1.0 - G;
      U(1, 2) = -Omega * tau;
      U(2, 1) = Omega * tau;
      U(2, 2) = 1.0 - G;
      U(3, 0) = 2.0 * E / Omega * G;
      U(3, 3) = 1.0 - 2.0 * G;
      break;
    case IsochoreOrder::SecondOrder: {
      const double rot = 1.0 - G + (Gamma * Gamma - Omega * Omega) * tau * tau / 2.0;
      const double skew = Omega * tau - Gamma * Omega * tau * tau;
      U(0, 0) = 1.0 - G + G * G / 2.0;
      U(0, 4) = E * (G - G * G / 2.0);
      U(1, 1) = rot;
      U(1, 2) = -skew;
      U(2, 1) = skew;
      U(2, 2) = rot;
      U(3, 0) = 2.0 * E / Omega * (G - 1.5 * G * G);
      U(3, 3) = 1.0 - 2.0 * G + 2.0 * G * G;
      U(3, 4) = E * E / Omega * G * G;
      break;
    }
  }
  return U;
}

ApproxPropagator approx_isochore_propagator(IsochoreOrder order, const WorkingMedium& m,
                                            Side side, const BathSegment& bath) {
  m.validate();
  bath.validate();
  const bool cold = side == Side::Cold;
  const double omega = cold ? m.omega_c : m.omega_h;
  const double Omega = big_omega(omega, m.J);
  ApproxPropagator out;
  const double G = bath.relaxation_rate(Omega) * bath.tau;
  if (order != IsochoreOrder::FrozenRotation && G > 1.0) {
    out.notes.push_back(fmt("Gamma tau > 1", G));
  }
  if (order == IsochoreOrder::SecondOrder && Omega * bath.tau > 1.0) {
    out.notes.push_back(fmt("Omega tau > 1", Omega * bath.tau));
  }
  if (bath.gamma > 0.0) out.notes.emplace_back("dephasing neglected");
  out.propagator = {approx_isochore_matrix(order, Omega, bath),
                    cold ? SegmentKind::ColdIsochore : SegmentKind::HotIsochore, omega};
  return out;
}

BathPhysics bath_physics(const CycleParams& p) {
  BathPhysics b{};
  b.Omega_c = p.medium.Omega_c();
  b.Omega_h = p.medium.Omega_h();
  b.E_c = equilibrium_energy(b.Omega_c, p.cold.T);
  b.E_h = equilibrium_energy(b.Omega_h, p.hot.T);
  b.Gamma_c = p.cold.relaxation_rate(b.Omega_c);
  b.Gamma_h = p.hot.relaxation_rate(b.Omega_h);
  return b;
}

namespace {

// Quantities shared by the case-1 expressions.
struct Case1 {
  BathPhysics b;
  double alpha, cc, ss, tau_h;
  double bracket;      // Omega_c ss E_h Gamma_h - Omega_h^2 E_c cc + E_c alpha Omega_h^2
  double denominator;  // alpha^2 - 2 alpha cc + 1
};

Case1 case1(const CycleParams& p) {
  Case1 k{};
  k.b = bath_physics(p);
  k.alpha = std::exp(-k.b.Gamma_c * p.cold.tau);
  k.cc = std::cos(k.b.Omega_c * p.cold.tau);
  k.ss = std::sin(k.b.Omega_c * p.cold.tau);
  k.tau_h = p.hot.tau;
  const double Oh2 = k.b.Omega_h * k.b.Omega_h;
  k.bracket = k.b.Omega_c * k.ss * k.b.E_h * k.b.Gamma_h - Oh2 * k.b.E_c * k.cc +
              k.b.E_c * k.alpha * Oh2;
  k.denominator = k.alpha * k.alpha - 2.0 * k.alpha * k.cc + 1.0;
  return k;
}

}  // namespace

Appr1Terms qc_appr1_terms(const CycleParams& p) {
  const Case1 k = case1(p);
  const double th2 = k.tau_h * k.tau_h;
  Appr1Terms t;
  t.leading = -k.alpha * th2 * k.bracket / k.denominator;
  t.correction = 2.0 * k.alpha * th2 * k.b.Gamma_h * k.b.Gamma_h * k.b.E_c *
                 (k.alpha - k.cc) / (k.alpha - 1.0);
  return t;
}

double qc_appr1(const CycleParams& p) { return qc_appr1_terms(p).total(); }
double qc_appr1b(const CycleParams& p) { return qc_appr1_terms(p).leading; }

std::vector<double> sign_switch_roots(double Omega_c, double Gamma_c, double lo, double hi,
                                      int grid) {
  if (!(hi > lo) || grid < 2) throw InvalidParameter("sign_switch_roots: empty range");
  auto f = [&](double t) { return std::exp(-Gamma_c * t) - std::cos(Omega_c * t); };
  const double h = (hi - lo) / (grid - 1);
  std::vector<double> roots;
  double t_prev = lo;
  double f_prev = f(lo);
  double f_before = f_prev;
  for (int i = 1; i < grid; ++i) {
    const double t = i + 1 == grid ? hi : lo + h * i;
    const double ft = f(t);
    if (f_prev == 0.0) {
      if (roots.empty() || roots.back() != t_prev) roots.push_back(t_prev);
    } else if ((f_prev < 0.0) != (ft < 0.0) && ft != 0.0) {
      double a = t_prev, b = t, fa = f_prev;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    } else if (i >= 2 && (f_before < 0.0) == (f_prev < 0.0) &&
               std::abs(f_prev) < std::abs(f_before) &&
               std::abs(f_prev) <= std::abs(ft)) {
      // Local minimum of |f| without a sign change: a tangential zero sits
      // where f' crosses zero, which bisects to full precision.
      auto df = [&](double t) {
        return -Gamma_c * std::exp(-Gamma_c * t) + Omega_c * std::sin(Omega_c * t);
      };
      double a = t_prev - h, b = t;
      double da = df(a);
      if ((da < 0.0) == (df(b) < 0.0)) {
        f_before = f_prev;
        t_prev = t;
        f_prev = ft;
        continue;
      }
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double dm = df(mid);
        if ((dm < 0.0) == (da < 0.0)) {
          a = mid;
          da = dm;
        } else {
          b = mid;
        }
      }
      const double t_min = 0.5 * (a + b);
      if (std::abs(f(t_min)) < 1e-12) roots.push_back(t_min);
    }
    f_before = f_prev;
    t_prev = t;
    f_prev = ft;
  }
  // A root sitting on a grid node can be reported by two neighbouring cells.
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > 0.5 * h) unique.push_back(r);
  }
  return unique;
}

std::vector<double> sign_switch_roots(const WorkingMedium& medium, const BathSegment& cold,
                                      double lo, double hi, int grid) {
  const double Omega_c = medium.Omega_c();
  return sign_switch_roots(Omega_c, cold.relaxation_rate(Omega_c), lo, hi, grid);
}

double qc_appr2(const CycleParams& p) {
  const BathPhysics b = bath_physics(p);
  const double gc = b.Gamma_c * p.cold.tau;
  const double gh = b.Gamma_h * p.hot.tau;
  const double s = gc + gh;
  return (b.E_c - b.Omega_c * b.E_h / b.Omega_h) * (gc - 0.5 * gc * gc) *
         (gh - 0.5 * gh * gh) / (s - 0.5 * s * s);
}

double qc_appr3a(const CycleParams& p) {
  const BathPhysics b = bath_physics(p);
  const double gc = b.Gamma_c * p.cold.tau;
  const double gh = b.Gamma_h * p.hot.tau;
  const double s = gc + gh;
  if (s >= 2.0) throw RegimeViolation(fmt("case 3a needs Gamma_c tau_c + Gamma_h tau_h < 2", s));
  // Second-order expansion of 1 - exp(-s) in the denominator.
  return b.E_h * (b.E_c / b.E_h - b.Omega_c / b.Omega_h) * gc * gh / (s - 0.5 * s * s);
}

double qc_appr3b(const CycleParams& p, Direction mu_from) {
  const BathPhysics b = bath_physics(p);
  const bool hc = mu_from == Direction::HotToCold;
  const double tau_adi = hc ? p.expansion.tau : p.compression.tau;
  const double mu = hc ? adiabat_angles(p.medium.J, p.medium.omega_h, p.medium.omega_c,
                                        tau_adi).mu
                       : adiabat_angles(p.medium.J, p.medium.omega_c, p.medium.omega_h,
                                        tau_adi).mu;
  const double c = std::cos(p.medium.J * tau_adi);
  const double A_c = std::exp(-b.Gamma_c * p.cold.tau);
  const double A_h = std::exp(-b.Gamma_h * p.hot.tau);
  const double gc = b.Gamma_c * p.cold.tau;
  const double gh = b.Gamma_h * p.hot.tau;
  const double ratio = b.E_c / b.E_h;
  const double mixing = mu * mu * (1.0 - c);
  const double num = (ratio - b.Omega_c / b.Omega_h) * gc * gh -
                     2.0 * ratio * (1.0 - A_c) * A_h * mixing;
  const double den = 1.0 - A_h * A_c * (1.0 + 2.0 * mixing);
  return b.E_h * num / den;
}

double work_appr(const CycleParams& p) {
  const Case1 k = case1(p);
  const BathPhysics& b = k.b;
  const double a = k.alpha;
  const double th = k.tau_h;
  const double gh = b.Gamma_h * th;
  const double num =
      th * b.E_h * b.Gamma_h * (1.0 - a) * k.denominator +
      th * th * (b.E_h * b.Gamma_h * b.Gamma_h * a * a * k.ss * k.ss * (2.0 * a - 1.0) -
                 b.Omega_h * b.Omega_h / b.Omega_c * k.ss * b.Gamma_h * b.E_c * a * (1.0 - a));
  const double den = (a - 1.0) * k.denominator +
                     b.Omega_h * b.Omega_h * th * th * a * a * (a - k.cc) -
                     a * a * gh * (a - 2.0 * a * gh + 2.0 * gh * k.cc);
  return num / den - qc_appr1b(p);
}

double work_first_order(const CycleParams& p) {
  const BathPhysics b = bath_physics(p);
  return -p.hot.tau * b.E_h * b.Gamma_h;
}

double cop_appr(const CycleParams& p) {
  const Case1 k = case1(p);
  return k.tau_h * k.alpha * k.bracket / (k.b.E_h * k.b.Gamma_h * k.denominator);
}

double su_appr(const CycleParams& p) {
  const Case1 k = case1(p);
  const double th = k.tau_h;
  return -(k.alpha * th * th * k.bracket / (k.denominator * p.cold.T) +
           th * k.b.E_h * k.b.Gamma_h / p.hot.T);
}

double max_cooling_point(double J, double kappa_down_c, double tau_c) {
  const double g = 2.0 * J * kappa_down_c * tau_c;
  if (!(g > 1.0)) {
    throw NoMaximum(fmt("maximum cooling needs 2 J kappa_c tau_c > 1", g));
  }
  return -0.25 * std::log(1.0 - 1.0 / g);
}

double max_cooling_residual(double x, double J, double kappa_down_c, double tau_c) {
  const double kt = kappa_down_c * tau_c;
  const double decay = std::exp(-2.0 * x);
  return 2.0 * kt * decay + 1.0 / (2.0 * J * std::sinh(2.0 * x)) - 4.0 * kt * decay;
}

}  // namespace otto

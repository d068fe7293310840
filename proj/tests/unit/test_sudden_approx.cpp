#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "otto/errors.hpp"
#include "otto/limit_cycle.hpp"
#include "otto/sudden_approx.hpp"

using namespace otto;
using std::numbers::pi;
using test::max_abs;

TEST_CASE("class-1 applied twice negates the rotation block") {
  const WorkingMedium m{2.0, 0.1, 6.0};
  const Mat5 up = approx_adiabat_propagator(AdiabatClass::Class1, m, Direction::ColdToHot,
                                            0.00035).propagator.matrix;
  const Mat5 down = approx_adiabat_propagator(AdiabatClass::Class1, m, Direction::HotToCold,
                                              0.00035).propagator.matrix;
  const Mat5 up_up = up * up / (m.Omega_h() / m.Omega_c()) / (m.Omega_h() / m.Omega_c());
  CHECK(up_up(0, 0) == doctest::Approx(-1.0));
  CHECK(up_up(1, 1) == doctest::Approx(-1.0));
  // Hot-to-cold inverts cold-to-hot.
  CHECK(max_abs(down * up, Mat5::Identity()) < 1e-14);
}

TEST_CASE("class predicates") {
  CHECK_THROWS_AS(approx_adiabat_propagator(AdiabatClass::Class1, {2.0, 2.5, 6.0},
                                            Direction::ColdToHot, 0.001),
                  ClassInapplicable);
  CHECK_THROWS_AS(approx_adiabat_propagator(AdiabatClass::Class3a, {2.0, 1.0, 6.0},
                                            Direction::ColdToHot, 0.001),
                  ClassInapplicable);
  CHECK_THROWS_AS(approx_adiabat_propagator(AdiabatClass::Class2, {2.0, 0.1, 6.0},
                                            Direction::ColdToHot, 0.001),
                  ClassInapplicable);
  const auto margin = check_adiabat_class(AdiabatClass::Class1, {2.0, 0.5, 6.0}, 0.00035);
  CHECK_FALSE(margin.hard_fail);
  CHECK_FALSE(margin.warnings.empty());
  const auto clean = check_adiabat_class(AdiabatClass::Class1, {2.0, 0.1, 6.0}, 0.00035);
  CHECK(clean.warnings.empty());
}

TEST_CASE("class-1 is close to the exact adiabat at fig1 parameters") {
  // Entrywise distance to the exact map; the sudden rotation ignores the
  // small angle picked up during tau, so this is loose.
  const WorkingMedium m{2.0, 0.1, 6.0};
  const Mat5 exact = constant_mu_matrix(m.J, m.omega_c, m.omega_h, 0.00035);
  const Mat5 c1 = approx_adiabat_propagator(AdiabatClass::Class1, m, Direction::ColdToHot,
                                            0.00035).propagator.matrix;
  const Mat5 gen = approx_adiabat_propagator(AdiabatClass::SuddenGeneric, m,
                                             Direction::ColdToHot, 0.00035).propagator.matrix;
  CHECK(max_abs(exact, gen) < 0.05);
  // class-1 replaces the sudden angle by pi / 2; at omega_h = 3 J that is far
  // off, so the error is set by the angle mismatch times the scaling.
  const double dphi = pi / 2.0 - adiabat_angles(m.J, m.omega_c, m.omega_h, 0.00035).Phi;
  const double scale = m.Omega_h() / m.Omega_c();
  CHECK(max_abs(exact, c1) <= scale * std::abs(dphi) + max_abs(exact, gen));
}

TEST_CASE("approximation ladder sharpens toward the exact map") {
  // class-1 error falls as omega_c / J -> 0.
  double prev = 1e9;
  for (double wc : {0.2, 0.05, 0.0125}) {
    const WorkingMedium m{2.0, wc, 60.0};
    const double tau = 1e-6;
    const double err = max_abs(
        constant_mu_matrix(m.J, m.omega_c, m.omega_h, tau),
        approx_adiabat_propagator(AdiabatClass::Class1, m, Direction::ColdToHot, tau)
            .propagator.matrix);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("class-3b with tau J = 2 pi has an identity rotation block") {
  const WorkingMedium m{1.25, 6.5, 11.0};
  const double tau = 2.0 * pi / m.J;
  const Mat5 U = approx_adiabat_propagator(AdiabatClass::Class3b, m, Direction::HotToCold, tau)
                     .propagator.matrix;
  const double s = m.Omega_c() / m.Omega_h();
  Mat5 expect = Mat5::Identity();
  for (int i = 0; i < 4; ++i) expect(i, i) = s;
  CHECK(max_abs(U, expect) < 1e-14);
}

TEST_CASE("isochore truncations") {
  SUBCASE("zero time is the identity") {
    for (auto o : {IsochoreOrder::FrozenRotation, IsochoreOrder::FirstOrder,
                   IsochoreOrder::SecondOrder}) {
      CHECK(max_abs(approx_isochore_matrix(o, 2.0, {14.0, 0.328, 0.0, 0.0}), Mat5::Identity()) ==
            0.0);
    }
  }
  SUBCASE("first order at fig1 hot bath") {
    const auto p = test::preset("fig1");
    const double Omega = p.medium.Omega_h();
    const double G = p.hot.relaxation_rate(Omega) * p.hot.tau;
    const double wt = Omega * p.hot.tau;
    const double err = max_abs(isochore_matrix(Omega, p.hot),
                               approx_isochore_matrix(IsochoreOrder::FirstOrder, Omega, p.hot));
    CHECK(err < 2.0 * std::max(G, wt) * std::max(G, wt) * std::max(1.0, Omega));
  }
  SUBCASE("second order beats first order at fig2") {
    const auto p = test::preset("fig2");
    for (const auto& [Omega, bath] : {std::pair{p.medium.Omega_c(), p.cold},
                                      std::pair{p.medium.Omega_h(), p.hot}}) {
      BathSegment b = bath;
      b.tau *= 0.1;  // keep Omega tau well inside the expansion radius
      const Mat5 exact = isochore_matrix(Omega, b);
      const double e1 = max_abs(exact, approx_isochore_matrix(IsochoreOrder::FirstOrder, Omega, b));
      const double e2 = max_abs(exact, approx_isochore_matrix(IsochoreOrder::SecondOrder, Omega, b));
      CHECK(e2 < e1);
    }
  }
}

TEST_CASE("case-1 cooling") {
  auto p = test::preset("fig1");
  const double exact = cycle_report(p).Q_c;
  const double a = qc_appr1b(p);
  CHECK(a * exact > 0.0);
  CHECK(std::abs(std::log(std::abs(a / exact))) < std::log(10.0));
  CHECK(std::isfinite(qc_appr1(p)));
  p.hot.tau = 0.0;
  CHECK(qc_appr1b(p) == 0.0);
  CHECK(work_first_order(p) == 0.0);
  CHECK(work_appr(p) == doctest::Approx(0.0));
}

TEST_CASE("case-1 work and COP") {
  const auto p = test::preset("fig1");
  const auto r = cycle_report(p);
  CHECK(work_first_order(p) == doctest::Approx(r.W_on).epsilon(0.25));
  REQUIRE(r.COP);
  const double ratio = cop_appr(p) / *r.COP;
  CHECK(ratio > 0.1);
  CHECK(ratio < 10.0);
  // Linear in tau_h as tau_h -> 0.
  auto q = p;
  q.hot.tau = p.hot.tau * 1e-3;
  auto q2 = p;
  q2.hot.tau = p.hot.tau * 2e-3;
  CHECK(cop_appr(q2) / cop_appr(q) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(std::abs(work_appr(q) - work_first_order(q)) <
        std::abs(work_appr(p) - work_first_order(p)) * 1e-4);
  CHECK(std::isfinite(su_appr(p)));
}

TEST_CASE("sign_switch_roots") {
  SUBCASE("no damping: roots at multiples of the period") {
    const double Omega = 2.0;
    const auto roots = sign_switch_roots(Omega, 0.0, 0.5, 10.0);
    REQUIRE(roots.size() == 3);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      CHECK(roots[k] == doctest::Approx(pi * (k + 1)).epsilon(1e-9));
    }
  }
  SUBCASE("quarter period with damping: at most one root") {
    const double Omega = 2.0;
    for (double G : {0.1, 1.0, 3.0}) {
      const auto roots = sign_switch_roots(Omega, G, 1e-3, 0.99 * pi / 2.0 / Omega);
      CHECK(roots.size() <= 1);
      int changes = 0;
      const int n = 200000;
      auto f = [&](double t) { return std::exp(-G * t) - std::cos(Omega * t); };
      for (int i = 1; i < n; ++i) {
        const double t0 = 1e-3 + (0.99 * pi / 4.0 - 1e-3) * (i - 1) / (n - 1);
        const double t1 = 1e-3 + (0.99 * pi / 4.0 - 1e-3) * i / (n - 1);
        changes += (f(t0) < 0.0) != (f(t1) < 0.0);
      }
      CHECK(static_cast<int>(roots.size()) == changes);
    }
  }
  SUBCASE("empty range") {
    CHECK(sign_switch_roots(2.0, 0.0, 0.1, 0.2).empty());
    CHECK_THROWS_AS(sign_switch_roots(2.0, 0.0, 0.2, 0.1), InvalidParameter);
  }
}

TEST_CASE("case-2 cooling") {
  auto p = test::preset("fig7");
  const double exact = cycle_report(p).Q_c;
  CHECK(std::abs(qc_appr2(p) - exact) < 0.3 * std::abs(exact));
  // Reversible boundary: E_c / E_h = Omega_c / Omega_h.
  auto q = p;
  // For E = -Omega tanh(Omega / 2T) the ratio condition holds at T_c / T_h = Omega_c / Omega_h.
  q.cold.T = q.hot.T * q.medium.Omega_c() / q.medium.Omega_h();
  CHECK(std::abs(qc_appr2(q)) < 1e-14);
  // Linear vanishing with total dissipation at fixed ratio.
  auto s1 = p, s2 = p;
  s1.cold.tau *= 1e-4;
  s1.hot.tau *= 1e-4;
  s2.cold.tau *= 2e-4;
  s2.hot.tau *= 2e-4;
  CHECK(qc_appr2(s2) / qc_appr2(s1) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("case-3 cooling") {
  auto p = test::preset("fig6");
  auto q = p;
  q.cold.T = q.hot.T * q.medium.Omega_c() / q.medium.Omega_h();
  CHECK(std::abs(qc_appr3a(q)) < 1e-14);
  // Above the reversible boundary, and with small total dissipation, 3a is non-negative.
  for (double scale : {0.01, 0.1, 0.5}) {
    auto r = p;
    r.cold.tau *= scale;
    r.hot.tau *= scale;
    CHECK(qc_appr3a(r) >= 0.0);
  }
  auto big = p;
  big.cold.tau = 1e3;
  CHECK_THROWS_AS(qc_appr3a(big), RegimeViolation);
  CHECK(std::isfinite(qc_appr3b(p)));
}

TEST_CASE("maximum cooling point") {
  CHECK(max_cooling_point(1.0, 1.0, 1.0) == doctest::Approx(std::log(2.0) / 4.0));
  CHECK(max_cooling_point(2.0, 0.328, 0.9) > 0.0);
  CHECK(max_cooling_point(1.0, 0.5, 1.0 + 1e-9) > 4.0);
  CHECK_THROWS_AS(max_cooling_point(1.0, 0.5, 1.0), NoMaximum);
  CHECK_THROWS_AS(max_cooling_point(1.0, 0.1, 1.0), NoMaximum);
  for (double tau : {0.9, 2.0, 10.0}) {
    const double x = max_cooling_point(2.0, 0.328, tau);
    CHECK(std::abs(max_cooling_residual(x, 2.0, 0.328, tau)) < 1e-10);
  }
}

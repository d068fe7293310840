#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "otto/errors.hpp"
#include "otto/propagators.hpp"

using namespace otto;
using test::max_abs;

namespace {

double norm_ratio(const Vec5& x, double Omega) {
  return (x(0) * x(0) + x(1) * x(1) + x(2) * x(2)) / (Omega * Omega);
}

}  // namespace

TEST_CASE("isochore at zero time is the identity") {
  BathSegment b{14.0, 0.328, 0.1, 0.0};
  CHECK(max_abs(isochore_matrix(2.0, b), Mat5::Identity()) == 0.0);
}

TEST_CASE("isochore keeps the Gibbs vector") {
  for (double tau : {0.01, 0.9, 10.0}) {
    BathSegment b{2.175, 0.328, 0.05, tau};
    const double Omega = big_omega(2.5, 2.5);
    const Vec5 g = equilibrium_vector(Omega, b.T).affine();
    CHECK((isochore_matrix(Omega, b) * g - g).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("isochore last row is affine") {
  const Mat5 M = isochore_matrix(3.0, BathSegment{1.0, 0.5, 0.2, 0.7});
  CHECK(M.row(4) == (Eigen::Matrix<double, 1, 5>() << 0, 0, 0, 0, 1).finished());
}

TEST_CASE("constant-mu adiabat") {
  const double J = 2.0;
  SUBCASE("degenerate fields") {
    CHECK_THROWS_AS(constant_mu_matrix(J, 1.0, 1.0, 0.1), DegenerateAdiabat);
  }
  SUBCASE("norm conserved up to the Omega scaling") {
    for (double tau : {0.00035, 0.01, 0.3, 2.0}) {
      const Mat5 U = constant_mu_matrix(J, 0.1, 6.0, tau);
      const Vec5 x(-0.1, 0.05, -0.02, 0.01, 1.0);
      CHECK(std::abs(norm_ratio(U * x, big_omega(6.0, J)) - norm_ratio(x, big_omega(0.1, J))) <
            1e-12);
    }
  }
  SUBCASE("full rotation is a pure scaling") {
    // q Theta = 2 pi  <=>  tau = 2 pi K / (q Phi), solved by fixed point on q.
    double tau = 1.0;
    for (int it = 0; it < 200; ++it) {
      const auto a = adiabat_angles(J, 0.1, 6.0, tau);
      tau = 2.0 * std::numbers::pi * std::abs(a.K) / (a.q * std::abs(a.Phi));
    }
    const auto a = adiabat_angles(J, 0.1, 6.0, tau);
    CHECK(std::abs(a.q * a.Theta) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
    const Mat5 U = constant_mu_matrix(J, 0.1, 6.0, tau);
    const double s = big_omega(6.0, J) / big_omega(0.1, J);
    Mat5 expect = Mat5::Identity();
    for (int i = 0; i < 4; ++i) expect(i, i) = s;
    CHECK(max_abs(U, expect) < 1e-9);
  }
  SUBCASE("angles") {
    const Mat5 up = constant_mu_matrix(J, 0.5, 3.0, 0.2);
    const auto a = adiabat_angles(J, 0.5, 3.0, 0.2);
    CHECK(a.mu != 0.0);
    CHECK(a.q == doctest::Approx(std::sqrt(1.0 + a.mu * a.mu)));
    CHECK(up.row(4) == (Eigen::Matrix<double, 1, 5>() << 0, 0, 0, 0, 1).finished());
  }
}

TEST_CASE("linear ramp") {
  const auto p = test::preset("fig4");
  const auto& m = p.medium;
  const double tau = p.compression.tau;
  CHECK(max_abs(linear_ramp_matrix(m.J, m.omega_c, m.omega_h, tau, 1),
                constant_mu_matrix(m.J, m.omega_c, m.omega_h, tau)) == 0.0);
  // Endpoint-matched slicing converges at second order.
  const Mat5 a = linear_ramp_matrix(m.J, m.omega_c, m.omega_h, tau, 512);
  const Mat5 b = linear_ramp_matrix(m.J, m.omega_c, m.omega_h, tau, 1024);
  const Mat5 c = linear_ramp_matrix(m.J, m.omega_c, m.omega_h, tau, 2048);
  const double ratio = max_abs(a, b) / max_abs(b, c);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  const int n = linear_ramp_slices(m.J, m.omega_c, m.omega_h, tau);
  CHECK(n >= 64);
  CHECK(max_abs(linear_ramp_matrix(m.J, m.omega_c, m.omega_h, tau),
                linear_ramp_matrix(m.J, m.omega_c, m.omega_h, tau, 2 * n)) < 1e-9);
}

TEST_CASE("global propagator order") {
  std::array<SegmentPropagator, 4> segs;
  const SegmentKind kinds[4] = {SegmentKind::ColdIsochore, SegmentKind::CompressionAdiabat,
                                SegmentKind::HotIsochore, SegmentKind::ExpansionAdiabat};
  for (int k = 0; k < 4; ++k) segs[k].kind = kinds[k];
  CHECK(global_propagator(segs) == Mat5::Identity());
  std::swap(segs[0].kind, segs[2].kind);
  CHECK_THROWS_AS(global_propagator(segs), SegmentOrderMismatch);
}

TEST_CASE("commutator norm") {
  const Mat5 Uc = isochore_matrix(2.0, BathSegment{14.0, 0.328, 0.0, 0.9});
  CHECK(commutator_norm(Mat5::Identity(), Uc) == 0.0);
  const auto p = test::preset("fig1");
  const auto& m = p.medium;
  const Mat5 Uab = adiabat_propagator(m, Direction::HotToCold, p.expansion).matrix *
                   isochore_propagator(m, Side::Hot, p.hot).matrix *
                   adiabat_propagator(m, Direction::ColdToHot, p.compression).matrix;
  CHECK(commutator_norm(Uab, isochore_propagator(m, Side::Cold, p.cold).matrix) > 1e-6);
}

TEST_CASE("spectral radius of a dissipative cycle is below one") {
  const auto p = test::preset("fig2");
  const auto& m = p.medium;
  std::array<SegmentPropagator, 4> segs{
      isochore_propagator(m, Side::Cold, p.cold),
      adiabat_propagator(m, Direction::ColdToHot, p.compression),
      isochore_propagator(m, Side::Hot, p.hot),
      adiabat_propagator(m, Direction::HotToCold, p.expansion)};
  const double r = spectral_radius(global_propagator(segs));
  CHECK(r < 1.0);
  CHECK(r > 0.0);
}

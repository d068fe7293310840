#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "otto/errors.hpp"
#include "otto/limit_cycle.hpp"
#include "otto/lindblad_oracle.hpp"
#include "otto/propagators.hpp"

using namespace otto;
namespace o = otto::oracle;

namespace {

double max_diff(const ObservableVector& a, const ObservableVector& b) {
  return (a.affine() - b.affine()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("hamiltonian spectrum") {
  for (double w : {0.0, 6.0}) {
    Eigen::SelfAdjointEigenSolver<CMat4> es(o::build_hamiltonian(w, 2.0));
    const double W = big_omega(w, 2.0);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-W));
    CHECK(std::abs(es.eigenvalues()(1)) < 1e-14);
    CHECK(std::abs(es.eigenvalues()(2)) < 1e-14);
    CHECK(es.eigenvalues()(3) == doctest::Approx(W));
  }
}

TEST_CASE("energy basis is orthonormal and diagonalises H") {
  const auto b = o::energy_basis(2.5, 2.5);
  const CMat4 H = o::build_hamiltonian(2.5, 2.5);
  const double W = big_omega(2.5, 2.5);
  CHECK(std::abs((b.g.adjoint() * H * b.g)(0).real() + W) < 1e-13);
  CHECK(std::abs((b.e.adjoint() * H * b.e)(0).real() - W) < 1e-13);
  CHECK((H * b.s).norm() < 1e-13);
  CHECK((H * b.a).norm() < 1e-13);
  CHECK(std::abs(b.g.dot(b.e)) < 1e-14);
  CHECK(std::abs(b.s.dot(b.a)) < 1e-14);
}

TEST_CASE("observable round trip through the dense state") {
  const ObservableVector x{-0.4, 0.05, -0.03, 0.12};
  const auto rho = o::dense_from_observables(x, 0.1, 2.0);
  CHECK(max_diff(o::expectations(rho, 0.1, 2.0), x) < 1e-14);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
}

TEST_CASE("stationary state of the dissipator is Gibbs") {
  const double omega = 0.1, J = 2.0;
  const BathSegment bath{14.0, 0.328, 0.0, 60.0};
  const auto seg = o::isochore_segment(omega, J, bath);
  const auto out = o::propagate({}, seg);
  const double W = big_omega(omega, J);
  const double t = std::tanh(W / (2.0 * bath.T));
  CHECK(std::abs(out.E + W * t) < 1e-8);
  CHECK(std::abs(out.D - W * t * t) < 1e-8);
  CHECK(std::abs(out.L) < 1e-8);
  CHECK(std::abs(out.C) < 1e-8);
}

TEST_CASE("equal up and down rates drive to the maximally mixed state") {
  const auto jumps = o::build_jump_operators(0.5, 1.0, 0.7, 0.7);
  o::OracleSegment seg;
  seg.J = 1.0;
  seg.tau = 40.0;
  seg.omega = [](double) { return 0.5; };
  seg.bath = o::Dissipation{0.7, 0.7, 0.0};
  const auto rho0 = o::dense_from_observables({-0.8, 0.0, 0.0, 0.6}, 0.5, 1.0);
  const auto tr = o::evolve(rho0, seg);
  CHECK((tr.final_state - 0.25 * CMat4::Identity()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(jumps.size() == 8);
}

TEST_CASE("unitary evolution keeps the spectrum") {
  const auto seg = o::linear_segment(2.0, 0.1, 6.0, 0.3);
  const auto rho0 = o::dense_from_observables({-0.3, 0.05, 0.02, 0.2}, 0.1, 2.0);
  const auto tr = o::evolve(rho0, seg);
  Eigen::SelfAdjointEigenSolver<CMat4> a(rho0), b(tr.final_state);
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(o::von_neumann_entropy(rho0) - o::von_neumann_entropy(tr.final_state)) < 1e-12);
  CHECK(tr.max_trace_error < 1e-12);
  CHECK(tr.max_hermiticity_error < 1e-12);
}

TEST_CASE("fig1 cold isochore along the way") {
  const auto p = test::preset("fig1");
  const auto r = cycle_report(p);
  const double omega = p.medium.omega_c, J = p.medium.J;
  const auto x0 = r.corner_vectors[0];
  o::EvolveOptions opt;
  opt.samples = 9;
  const auto tr = o::evolve(o::dense_from_observables(x0, omega, J),
                            o::isochore_segment(omega, J, p.cold), opt);
  REQUIRE(tr.states.size() == 10);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    BathSegment part = p.cold;
    part.tau = tr.times[k];
    const auto expect = ObservableVector::from_affine(
        isochore_matrix(p.medium.Omega_c(), part) * x0.affine());
    CHECK(max_diff(o::expectations(tr.states[k], omega, J), expect) < 1e-6);
  }
}

TEST_CASE("fig4 linear adiabat endpoint") {
  const auto p = test::preset("fig4");
  const auto r = cycle_report(p);
  const auto& m = p.medium;
  const auto got = o::propagate(r.corner_vectors[1],
                                o::linear_segment(m.J, m.omega_c, m.omega_h, p.compression.tau));
  CHECK(max_diff(got, r.corner_vectors[2]) < 1e-6);
}

TEST_CASE("step floor raises") {
  const auto seg = o::isochore_segment(6.0, 2.0, BathSegment{15.0, 0.36, 0.0, 50.0});
  o::EvolveOptions opt;
  opt.initial_steps = 4;
  opt.max_steps = 8;
  CHECK_THROWS_AS(o::evolve(o::dense_from_observables({}, 6.0, 2.0), seg, opt), StepTooLarge);
}

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "otto/errors.hpp"
#include "otto/sweep.hpp"

using namespace otto;

namespace {

SweepSpec one_point(const CycleParams& p) {
  SweepSpec s;
  s.base = p;
  s.axes.push_back(Axis{Param::tau_c, p.cold.tau, p.cold.tau, 1, false, {}});
  return s;
}

}  // namespace

TEST_CASE("axes") {
  Axis a{Param::tau_c, 1.0, 3.0, 3, false, {}};
  CHECK(a.values() == std::vector<double>{1.0, 2.0, 3.0});
  Axis l{Param::omega_h, 1.0, 100.0, 3, true, {}};
  const auto v = l.values();
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v.back() == 100.0);
  Axis bad{Param::tau_c, 1.0, 3.0, 0, false, {}};
  CHECK_THROWS(bad.validate());
  CHECK(parse_param("J_over_Tc") == Param::J_over_Tc);
  CHECK_FALSE(parse_param("nope"));
}

TEST_CASE("parameter setters and ties") {
  const auto base = test::preset("fig1");
  CycleParams p = base;
  set_param(p, base, Param::time_scale, 0.5);
  CHECK(p.cold.tau == base.cold.tau * 0.5);
  CHECK(p.compression.tau == base.compression.tau * 0.5);
  set_param(p, base, Param::J_over_Tc, 0.25);
  CHECK(p.cold.T == doctest::Approx(8.0));

  SweepSpec s;
  s.base = base;
  s.axes.push_back(Axis{Param::J_over_Tc, 0.1, 0.2, 2, false, {}});
  s.constraints.push_back(Constraint{Constraint::Kind::TemperatureRatio, 0.5, {}, {}});
  const auto q = point_params(s, 1, 0);
  CHECK(q.cold.T == doctest::Approx(10.0));
  CHECK(q.hot.T == doctest::Approx(20.0));

  SweepSpec t;
  t.base = test::preset("fig7");
  t.axes.push_back(Axis{Param::omega_h, 0, 0, 1, false, {78.15}});
  t.constraints.push_back(Constraint{Constraint::Kind::Product, 6.252, Param::omega_h, Param::tau_h});
  CHECK(point_params(t, 0, 0).hot.tau == doctest::Approx(0.08));
}

TEST_CASE("single point sweep matches the direct report") {
  const auto p = test::preset("fig1");
  const auto r = run_sweep(one_point(p));
  REQUIRE(r.points.size() == 1);
  REQUIRE(r.points[0].report);
  CHECK(r.points[0].report->P_c == cycle_report(p).P_c);
  CHECK(r.points[0].report->P_c == doctest::Approx(1.2e-6).epsilon(0.1));
}

TEST_CASE("failures are recorded, not thrown") {
  SweepSpec s;
  s.base = test::preset("fig1");
  // Zero-time isochores leave a purely unitary, marginal cycle.
  s.axes.push_back(Axis{Param::tau_c, 0, 0, 1, false, {0.0}});
  s.axes.push_back(Axis{Param::tau_h, 0, 0, 1, false, {0.0, 0.00025}});
  const auto r = run_sweep(s);
  REQUIRE(r.points.size() == 2);
  CAPTURE(r.at(0, 0).reason);
  CAPTURE(r.at(0, 1).reason);
  CHECK(r.at(0, 0).failure == ErrorKind::MarginalCycle);
  CHECK_FALSE(r.at(0, 0).report);
  CHECK(r.at(0, 1).report);
}

TEST_CASE("below the minimum cold temperature nothing cools") {
  SweepSpec s;
  s.base = test::preset("fig8");
  s.base.cold.T = 0.9 * s.base.medium.compression_ratio() * s.base.hot.T;
  s.axes.push_back(Axis{Param::tau_c, 0.05, 3.0, 6, false, {}});
  s.axes.push_back(Axis{Param::tau_h, 0.0001, 3.0, 6, false, {}});
  for (const auto& pt : run_sweep(s, 2).points) {
    REQUIRE(pt.report);
    CHECK(pt.report->Q_c < 0.0);
  }
}

TEST_CASE("quasi-static corner refrigerates above the reversible bound") {
  SweepSpec s;
  s.base = test::preset("fig2");
  s.axes.push_back(Axis{Param::time_scale, 0, 0, 1, false, {20.0, 40.0}});
  s.axes.push_back(Axis{Param::tau_adi, 0, 0, 1, false, {20.0, 40.0}});
  const auto& m = s.base.medium;
  REQUIRE(s.base.cold.T > m.Omega_c() / m.Omega_h() * s.base.hot.T);
  for (const auto& pt : run_sweep(s).points) CHECK(pt.refrigerating());
}

TEST_CASE("thread count does not change results") {
  SweepSpec s;
  s.base = test::preset("fig8");
  s.axes.push_back(Axis{Param::tau_c, 0.05, 3.0, 7, false, {}});
  s.axes.push_back(Axis{Param::tau_h, 0.0001, 3.0, 5, false, {}});
  const auto a = run_sweep(s, 1);
  const auto b = run_sweep(s, 4);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    REQUIRE(a.points[k].report.has_value() == b.points[k].report.has_value());
    if (a.points[k].report) CHECK(a.points[k].report->Q_c == b.points[k].report->Q_c);
  }
}

TEST_CASE("island labelling") {
  using C = CellState;
  const C R = C::Refrigerating, N = C::NonRefrigerating;
  // Diagonal neighbours are not connected.
  const std::vector<C> cells{R, N, R,
                             N, R, N,
                             R, R, N};
  const auto m = island_map(cells, 3, 3);
  CHECK(m.islands() == 3);
  CHECK(m.labels[0] != m.labels[4]);
  CHECK(m.labels[4] == m.labels[7]);
  CHECK(m.labels[1] == -1);
  const auto none = island_map(std::vector<C>(4, N), 2, 2);
  CHECK(none.islands() == 0);
}

TEST_CASE("cop curve of one point inverts the report") {
  const auto p = test::preset("fig7");
  const auto r = run_sweep(one_point(p));
  const auto c = cop_vs_power(r);
  REQUIRE(c.inv_pc.size() == 1);
  const auto rep = cycle_report(p);
  CHECK(c.inv_pc[0] == doctest::Approx(1.0 / rep.P_c));
  CHECK(c.inv_cop[0] == doctest::Approx(1.0 / *rep.COP));
}

TEST_CASE("trajectory") {
  SUBCASE("fig2 closes and keeps S_VN across adiabats") {
    const auto p = test::preset("fig2");
    const auto tr = trajectory(p, 50);
    REQUIRE(tr.size() == 4 * 51);
    CHECK((tr.front().x.affine() - tr.back().x.affine()).cwiseAbs().maxCoeff() < 1e-9);
    for (const auto& s : tr) {
      CHECK(s.s.energy >= s.s.von_neumann - 1e-12);
      CHECK(s.Omega >= p.medium.Omega_c() - 1e-12);
      CHECK(s.Omega <= p.medium.Omega_h() + 1e-12);
    }
    for (int seg : {1, 3}) {
      const double s0 = tr[seg * 51].s.von_neumann;
      for (int k = 0; k <= 50; ++k) CHECK(std::abs(tr[seg * 51 + k].s.von_neumann - s0) < 1e-9);
    }
  }
  SUBCASE("fig4 linear schedule closes") {
    const auto tr = trajectory(test::preset("fig4"), 40);
    CHECK((tr.front().x.affine() - tr.back().x.affine()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("coherence vs adiabat time") {
  auto base = test::preset("fig1");
  const auto traces = coherence_vs_adiabat_time(base, {0.00035, 0.00105, 0.0035, 0.0105}, 50);
  REQUIRE(traces.size() == 4);
  for (std::size_t k = 1; k < traces.size(); ++k) {
    CHECK(traces[k].max_coherence < traces[k - 1].max_coherence);
  }
  // Strong dephasing wipes out the coherence at the isochore exits.
  base.cold.gamma = 50.0;
  base.hot.gamma = 5e4;
  const auto r = cycle_report(base);
  CHECK(r.corner_coherence[1] < 1e-10);  // B, end of the cold isochore
  CHECK(r.corner_coherence[3] < 1e-6);   // D, end of the hot isochore
}

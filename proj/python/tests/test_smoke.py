import math

import pytest

import sudden_otto as so


def test_presets_available():
    names = so.list_presets()
    assert "fig1" in names and "fig8" in names


def test_fig1_cooling_power():
    p = so.load_preset("fig1")
    r = so.cycle_report(p)
    assert r.refrigerating
    assert r.P_c == pytest.approx(1.2e-6, rel=0.1)
    assert abs(r.Q_c + r.Q_h + r.W_on) < 1e-10
    assert r.S_u >= -1e-10
    assert r.COP <= r.cop_carnot


def test_parameters_are_editable():
    p = so.load_preset("fig1")
    p.cold.T = 0.9 * p.medium.Omega_c / p.medium.Omega_h * p.hot.T
    assert so.cycle_report(p).Q_c < 0


def test_errors_map_to_exceptions():
    p = so.load_preset("fig1")
    p.medium.omega_c = 10.0
    with pytest.raises(so.InvalidParameter):
        so.cycle_report(p)
    with pytest.raises(so.OttoError):
        so.max_cooling_point(1.0, 0.1, 1.0)
    with pytest.raises(so.ConfigError):
        so.load_preset("no-such-preset")


def test_matrices_are_numpy():
    bath = so.BathSegment(T=2.0, kappa_down=0.5, tau=0.3)
    m = so.isochore_matrix(2.0, bath)
    assert m.shape == (5, 5)
    assert list(m[4]) == [0, 0, 0, 0, 1]
    g = so.equilibrium_vector(2.0, 2.0)
    x = m[:4, :4] @ [g.E, g.L, g.C, g.D] + m[:4, 4]
    assert x[0] == pytest.approx(g.E, abs=1e-14)


def test_trajectory_and_entropies():
    tr = so.trajectory(so.load_preset("fig2"), 20)
    assert len(tr["t"]) == 4 * 21
    assert all(e >= v - 1e-12 for e, v in zip(tr["S_E"], tr["S_VN"]))
    s = so.entropies(so.ObservableVector(), 2.0)
    assert s.energy == pytest.approx(math.log(4))


def test_sweep_and_oracle():
    rows = so.sweep_preset("fig7", threads=2)
    assert len(rows) == 3 and all(r["refrigerating"] for r in rows)
    assert max(so.oracle_deviation(so.load_preset("fig1"))) < 1e-6
    assert so.max_cooling_point(1.0, 1.0, 1.0) == pytest.approx(math.log(2) / 4)


def test_run_command(tmp_path):
    code, log = so.run_command("limit-cycle", "fig1", tmp_path)
    assert code == 0
    assert (tmp_path / "fig1.limit_cycle.csv").exists()
    assert "refrigerating" in log

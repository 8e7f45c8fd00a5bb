import math

import numpy as np
import pytest

import photonfluid as pf


def test_band_and_growth():
    assert pf.unstable_band(3.0) == pytest.approx((math.sqrt(5.0), 3.0))
    assert pf.growth_rate(0.5, 1.0) == pytest.approx(0.14907030125581463659, rel=1e-12)
    assert pf.growth_rate(1.5, 1.0) == 0.0
    Q_star, gamma_star = pf.max_growth(1.0)
    assert Q_star == pytest.approx(0.7135778915781658, abs=1e-6)
    assert gamma_star == pytest.approx(0.17383160200219369, rel=1e-9)


def test_roots_agree_with_oracle():
    roots, poles = pf.two_stream_roots(0.5, 1.0)
    oracle, _ = pf.two_stream_roots(0.5, 1.0, oracle=True)
    assert sorted(roots, key=lambda w: (w.real, w.imag)) == pytest.approx(
        sorted(oracle, key=lambda w: (w.real, w.imag)), abs=1e-12)
    assert not any(poles)


def test_stability_map_shape():
    m = pf.stability_map([1.0, 3.0], np.linspace(0, 4, 9))
    assert m.shape == (2, 9)
    assert (m[0, 1:2] > 0).all() and m[0, 2] == 0.0  # Q = 0.5 unstable, Q = 1 edge


def test_invalid_arguments_raise_value_error():
    with pytest.raises(ValueError):
        pf.growth_rate(-1.0, 1.0)
    with pytest.raises(ValueError):
        pf.Grid(4, 4, 1.0, 1.0, 0.1)


def test_simulation_round_trip(tmp_path):
    grid = pf.Grid(32, 8, 20 * math.pi, 5 * math.pi, 0.01)
    spec = pf.RunSpec()
    spec.v0 = 1.0
    spec.noise_amplitude = 1e-3
    spec.z_end = 1.0
    spec.snapshot_every = 50
    state = pf.init_two_stream(grid, spec)
    assert len(state.envelopes) == 2
    snaps = pf.propagate(state, spec)
    assert [s.z for s in snaps] == pytest.approx([0.0, 0.5, 1.0])
    assert pf.norm(snaps[-1]) == pytest.approx(pf.norm(snaps[0]), rel=1e-12)
    assert pf.checksum(snaps[-1]) == pf.checksum(pf.propagate(state, spec)[-1])

    psi = snaps[-1].envelopes[1]
    pf.write_field(tmp_path / "f.pfld", psi, grid.lx, grid.ly, 1.0)
    back, lx, ly, z = pf.read_field(tmp_path / "f.pfld")
    assert np.array_equal(back, psi) and (lx, ly, z) == (grid.lx, grid.ly, 1.0)


def test_diagnostics():
    grid = pf.Grid(32, 32, 32.0, 32.0, 0.01)
    x = np.arange(32) - 16.0
    X, Y = np.meshgrid(x - 0.5, x - 0.5)
    assert pf.detect_vortices(grid, X + 1j * Y, periodic=False) == [(16.5, 16.5, 1)]
    z = np.linspace(0, 10, 101)
    fit = pf.fit_growth_rate(z, 1e-5 * np.exp(0.3 * z) + 0j)
    assert fit["ok"] and fit["gamma"] == pytest.approx(0.3, abs=1e-12)


def test_vapor_numbers():
    r = pf.vapor_report()
    assert r["n2_cm2_per_W"] == pytest.approx(-7.5e-5, rel=0.15)
    assert r["length_scale_mm"] == pytest.approx(26.0, rel=0.15)

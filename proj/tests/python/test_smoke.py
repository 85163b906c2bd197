import math

import numpy as np
import pytest

import gffperc


def test_lattice_shape():
    lat = gffperc.Lattice(1.0, 0.25)
    assert (lat.nx, lat.ny) == (3, 3)
    assert lat.num_interior == 1
    a, b, c, d = lat.corners()
    assert lat.coords(b) == (1, 1)
    assert lat.edges().shape == (lat.num_edges, 2)
    with pytest.raises(ValueError):
        gffperc.Lattice(1.0, 0.5)


def test_green_and_sample():
    lat = gffperc.Lattice(1.0, 0.125)
    g = gffperc.green_matrix(lat)
    assert np.allclose(g, g.T)
    phi = gffperc.sample_field(lat, seed=3)
    assert phi.shape == (lat.ny, lat.nx)
    assert np.all(phi[0, :] == 0) and np.all(phi[:, -1] == 0)
    assert np.array_equal(phi, gffperc.sample_field(lat, seed=3))


def test_crossings_and_level_line():
    lat = gffperc.Lattice(1.0, 1 / 16)
    phi = gffperc.sample_field(lat, lam=gffperc.LAMBDA0, seed=5)
    flat = phi.ravel()
    crosses = gffperc.crossing(lat, flat, gffperc.CrossingMode.DISCRETE_ALT)
    path, terminal = gffperc.level_line(lat, flat, gffperc.LAMBDA0)
    assert (terminal == gffperc.Arc.RIGHT) == crosses
    assert tuple(path[0]) == (0, 1)
    w = gffperc.sample_edge_states(lat, flat, seed=6)
    if gffperc.crossing(lat, w, gffperc.CrossingMode.METRIC_ALT):
        assert crosses
    for e in gffperc.closed_pivotal_edges(lat, w):
        assert w[e] == 0


def test_limits():
    assert gffperc.crossing_limit(1.0) == pytest.approx(0.5, abs=1e-12)
    assert gffperc.elliptic_k(0.0) == pytest.approx(math.pi / 2)
    im = gffperc.conformal_images(2.0)
    assert im["a"] < im["b"] < im["c"] < im["d"]
    assert gffperc.edge_open_probability(1.0, 1.0) == pytest.approx(1 - math.exp(-0.5))
    assert gffperc.bm_line_hitting_cdf(-0.5, 1.0, 1e8) == pytest.approx(math.exp(-1.0))
    path, side = gffperc.simulate_sle_diffusion(0.2, 1e-3, seed=4)
    assert side in (-1, 1) and path[-1] == side


def test_harness():
    rows = gffperc.estimate(
        {"L": 1, "lambda": 1, "mode": "discrete_alt,metric_alt,gap", "samples": 200, "seed": 2, "workers": 1},
        1 / 12,
    )
    assert [r["event"] for r in rows] == ["discrete_alt", "metric_alt", "gap"]
    assert rows[2]["inclusion_violations"] == 0
    csv = gffperc.sweep_csv({"mode": "metric_alt", "delta": "1/8,1/10,1/12", "samples": 100, "workers": 1})
    assert csv.startswith("L,lambda,bc,event")
    with pytest.raises(ValueError):
        gffperc.estimate({"colour": "red"}, 0.1)
    lo, hi = gffperc.wilson_interval(30, 100)
    assert lo < 0.3 < hi

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robin_spectra.curve_geometry import (
    Circle, GraphCurve, Parabola, check_assumptions, constant_profile, curvature,
    curvature_stats, curve_from_curvature, curve_from_json, gaussian_graph, line_bump,
    parallel_curvature, sech_profile, straight_line, tube_map, wedge_smoothed, zero_profile)
from robin_spectra.errors import GeometryError, SingularCoordinatesError

CURVES = {
    "line": lambda: straight_line(),
    "circle": lambda: Circle(1.5),
    "parabola": lambda: Parabola(0.5, (-30.0, 30.0)),
    "line_bump": lambda: line_bump(),
    "wedge": lambda: wedge_smoothed(math.pi / 6),
    "graph": lambda: gaussian_graph(0.3),
}


def _samples(curve, n=401):
    lo, hi = curve.window
    return np.linspace(lo + 1e-3, hi - 1e-3, n)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_unit_speed(name):
    curve = CURVES[name]()
    s = _samples(curve)
    assert np.allclose(np.linalg.norm(curve.tangent(s), axis=-1), 1.0, atol=1e-10)
    h = 1e-4
    fd = (curve.point(s + h) - curve.point(s - h)) / (2 * h)
    inner = (s - h > curve.window[0]) & (s + h < curve.window[1])
    assert np.allclose(np.linalg.norm(fd[inner], axis=-1), 1.0, atol=1e-6)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_curvature_is_cross_product(name):
    curve = CURVES[name]()
    s = _samples(curve)
    t, dd = curve.tangent(s), curve.second(s)
    cross = t[:, 0] * dd[:, 1] - t[:, 1] * dd[:, 0]
    assert np.allclose(cross, curvature(curve, s), atol=1e-8)


def test_closed_loop_matches_at_period():
    c = Circle(2.0)
    L = c.perimeter
    assert np.allclose(c.point(0.0), c.point(L), atol=1e-10)
    assert np.allclose(c.tangent(0.0), c.tangent(L), atol=1e-10)


def test_circle_and_line_curvature():
    s = np.linspace(0, 2 * math.pi, 50, endpoint=False)
    assert np.allclose(Circle(1.0).curvature(s), 1.0)
    assert np.allclose(straight_line().curvature(np.linspace(-10, 10, 50)), 0.0)


def test_parabola_curvature_decays_like_three_halves():
    p = Parabola(0.5, (-120.0, 120.0))
    s = np.linspace(10.0, 100.0, 400)
    scaled = np.abs(p.curvature(s)) * (1 + s * s) ** 0.75
    assert scaled.max() < 2.0 * scaled.min()
    assert scaled.max() < 10.0


def test_circle_stats():
    st_ = curvature_stats(Circle(2.0))
    assert st_.gamma_star == pytest.approx(0.5, abs=1e-12)
    assert st_.gamma_lowstar == pytest.approx(0.5, abs=1e-12)


def test_line_bump_stats_match_dense_sampling():
    curve = line_bump()
    s = np.linspace(-20, 28, 200001)
    g = curve.curvature(s)
    st_ = curvature_stats(curve)
    assert st_.gamma_star == pytest.approx(1.0, abs=1e-3)
    assert st_.gamma_star >= g.max() - 1e-10
    assert abs(st_.s_star) < 1e-2
    assert curve.curvature(st_.s_star) >= st_.gamma_star - 1e-10
    assert st_.gamma_lowstar <= st_.gamma_star
    assert st_.gamma_plus == max(abs(st_.gamma_star), abs(st_.gamma_lowstar))


def test_line_bump_has_zero_total_turning():
    curve = line_bump(window=(-40.0, 48.0))
    turn = curve.tangent_angle(48.0) - curve.tangent_angle(-40.0)
    assert abs(turn) < 1e-8


@pytest.mark.parametrize("alpha", [math.pi / 6, math.pi / 4, -0.3])
def test_wedge_total_turning(alpha):
    curve = wedge_smoothed(alpha)
    lo, hi = curve.window
    assert curve.tangent_angle(hi) - curve.tangent_angle(lo) == pytest.approx(2 * alpha, abs=1e-10)


def test_zero_curvature_reconstructs_line():
    c = curve_from_curvature(zero_profile(), 0.0, (-5.0, 5.0), theta0=0.0)
    s = np.linspace(-5, 5, 21)
    assert np.allclose(c.point(s), np.c_[s, np.zeros_like(s)], atol=1e-10)


def test_constant_curvature_reconstructs_circle():
    R = 2.0
    L = 2 * math.pi * R
    c = curve_from_curvature(constant_profile(1 / R), 0.0, (0.0, L), theta0=0.0)
    P = c.point(np.linspace(0, L, 64))
    center = c.point(0.0) + R * c.normal(0.0)
    assert np.allclose(np.linalg.norm(P - center, axis=-1), R, atol=1e-8)
    assert np.allclose(c.point(L), c.point(0.0), atol=1e-8)


def test_sech_curvature_turns_by_pi():
    c = curve_from_curvature(sech_profile(1.0), 0.0, (-40.0, 40.0))
    assert c.tangent_angle(40.0) - c.tangent_angle(-40.0) == pytest.approx(math.pi, abs=1e-12)


def test_tube_map_examples():
    line = straight_line()
    s = np.array([-1.0, 0.0, 2.5])
    assert np.allclose(tube_map(line, s, np.full(3, 0.7)), np.c_[s, np.full(3, 0.7)], atol=1e-12)
    circle = Circle(1.0)
    for side, radius in (("exterior", 1.3), ("interior", 0.5)):
        u = radius - 1.0 if side == "exterior" else 0.5
        assert np.linalg.norm(tube_map(circle, 0.0, u, side)) == pytest.approx(radius, abs=1e-12)


def test_check_assumptions_examples():
    assert check_assumptions(Circle(1.0), 0.5).injective
    assert not check_assumptions(Circle(1.0), 1.5).injective
    assert check_assumptions(line_bump(), 0.4).injective


def test_parallel_curvature_examples():
    assert parallel_curvature(0.0, 3.0) == 0.0
    assert parallel_curvature(1.0, 0.5) == pytest.approx(2.0)
    assert parallel_curvature(-1.0, 0.5) == pytest.approx(-2.0 / 3.0)
    with pytest.raises(SingularCoordinatesError):
        parallel_curvature(2.0, 0.5)


def test_closed_convex_loop_total_curvature():
    for R in (0.5, 1.0, 3.0):
        c = Circle(R)
        s = np.linspace(0, c.perimeter, 2000, endpoint=False)
        total = c.curvature(s).mean() * c.perimeter
        assert total == pytest.approx(2 * math.pi, rel=1e-12)


def test_curve_from_json_rejects_unknown():
    with pytest.raises(GeometryError):
        curve_from_json({"family": "spiral"})
    with pytest.raises(GeometryError):
        curve_from_json({"family": "circle", "radius": 1})
    assert curve_from_json({"family": "line_bump"}).window == (-20.0, 28.0)
    assert isinstance(curve_from_json({"family": "graph_bump"}), GraphCurve)


@given(amp=st.floats(0.1, 2.0), center=st.floats(-3.0, 3.0))
def test_reconstruction_round_trip(amp, center):
    prof = sech_profile(amp, center)
    c = curve_from_curvature(prof, 0.0, (-15.0, 15.0))
    s = np.linspace(-14.9, 14.9, 97)
    assert np.allclose(curvature(c, s), prof(s), atol=1e-8)


@given(amp=st.floats(-1.5, 1.5), s=st.floats(-9.0, 9.0))
def test_orientation_flip_negates_curvature(amp, s):
    c = curve_from_curvature(sech_profile(amp), 0.0, (-10.0, 10.0))
    r = c.reversed()
    lo, hi = c.window
    assert r.curvature(lo + hi - s) == pytest.approx(-c.curvature(s), abs=1e-10)


@given(s=st.floats(-19.0, 27.0))
def test_tube_map_at_zero_is_the_curve(s):
    c = line_bump()
    assert np.array_equal(tube_map(c, s, 0.0), c.point(s))

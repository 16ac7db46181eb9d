import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robin_spectra.asymptotics import (
    WORKERS_ENV, disc_rows, fit_remainder_exponent, predict_exterior, predict_interior,
    predict_refined_lower, predict_waveguide, ratio_spread, sweep, worker_count)
from robin_spectra.curve_geometry import line_bump, parallel_curvature
from robin_spectra.exact_models import disc_exterior_asymptotic


def test_interior_prediction_examples():
    assert predict_interior(1.0, 10.0) == -110.0
    assert predict_interior(0.0, 7.0) == -49.0


def test_refined_lower_examples():
    for beta in (4.0, 10.0, 33.0):
        assert predict_refined_lower(1.0, -0.25, beta, "exterior") == disc_exterior_asymptotic(1.0, beta, 0)
    assert predict_refined_lower(0.0, 0.0, 6.0) == -36.0


def test_waveguide_prediction_examples():
    assert predict_waveguide(0.0, 0.0, 5.0) == -25.0
    g_d = parallel_curvature(-0.5, 0.5)
    assert predict_waveguide(0.5, g_d, 4.0) == pytest.approx(-16.0 - max(0.5, -g_d) * 4.0)
    # S-bend with equal and opposite wall curvatures: the larger wall curvature wins
    g_d = parallel_curvature(-0.4, 1.0)
    assert predict_waveguide(0.4, g_d, 10.0) == pytest.approx(-100.0 - 0.4 * 10.0)
    assert predict_waveguide(0.2, g_d, 10.0) == pytest.approx(-100.0 + g_d * 10.0)


@given(g=st.floats(-3, 3), beta=st.floats(0.1, 100), mu=st.floats(-2, 2))
def test_interior_exterior_symmetry(g, beta, mu):
    assert predict_exterior(-g, beta) == pytest.approx(predict_interior(g, beta), rel=1e-14, abs=1e-12)
    assert predict_refined_lower(-g, mu, beta, "exterior") == pytest.approx(
        predict_refined_lower(g, mu, beta, "interior"), rel=1e-14, abs=1e-12)


@given(p=st.floats(-2.0, 2.0), c=st.floats(0.01, 100.0))
def test_fit_exact_on_power_law(p, c):
    betas = np.array([10.0, 20.0, 40.0, 80.0, 160.0])
    fit = fit_remainder_exponent(betas, c * betas**p)
    assert fit.exponent == pytest.approx(p, abs=1e-10)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_fit_two_thirds_and_drop_smallest():
    betas = [5.0, 10.0, 20.0, 40.0, 80.0]
    res = [1e3] + [3.0 * b ** (2 / 3) for b in betas[1:]]
    assert fit_remainder_exponent(betas, res, drop_smallest=True).exponent == pytest.approx(2 / 3, abs=1e-10)
    with pytest.raises(ValueError):
        fit_remainder_exponent([1.0, 2.0], [1.0, 2.0])
    assert fit_remainder_exponent([1.0, 2.0, 3.0], [0.0, 1.0, 2.0]).degenerate


def test_disc_remainder_exponent():
    rows = disc_rows(1.0, [10, 20, 40, 80, 160], [0])
    fit = fit_remainder_exponent([r["beta"] for r in rows], [r["residual"] for r in rows])
    assert fit.exponent == pytest.approx(-1.0, abs=0.2)


def test_disc_rows_order():
    rows = disc_rows(1.0, [20, 10], [1, 0])
    assert [(r["beta"], r["m"]) for r in rows] == [(10, 1), (10, 0), (20, 1), (20, 0)]


@pytest.mark.slow
def test_line_bump_sweep_exponent():
    rep = sweep(line_bump(), [10, 20, 40, 80], 1, s_window=(-6.0, 6.0), n_s=256, n_u=128)
    assert rep.discrete_flags.all()
    assert np.all(rep.computed_lower <= rep.computed_upper)
    assert np.allclose(rep.residuals, rep.computed_upper - rep.predicted_two_term)
    assert rep.fitted_exponent[0].exponent <= 2 / 3 + 0.15
    assert np.all(rep.refined_lower <= rep.computed_lower)
    rows = list(rep.rows())
    assert [r["beta"] for r in rows] == [10, 20, 40, 80]


def test_sweep_threads_match_serial():
    kw = dict(s_window=(-6.0, 6.0), n_s=48, n_u=24, mesh_check=False)
    a = sweep(line_bump(), [8, 12, 16], 2, workers=1, **kw)
    b = sweep(line_bump(), [16, 8, 12], 2, workers=3, **kw)
    assert np.array_equal(a.computed_upper, b.computed_upper)
    assert np.array_equal(a.computed_lower, b.computed_lower)


def test_worker_count(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert worker_count() == 1
    monkeypatch.setenv(WORKERS_ENV, "4")
    assert worker_count() == 4
    monkeypatch.setenv(WORKERS_ENV, "zero")
    with pytest.raises(ValueError):
        worker_count()


def test_ratio_spread():
    assert ratio_spread([1.0, 2.0, 4.0]) == 4.0
    assert ratio_spread([-1.0, -3.0]) == 3.0
    assert ratio_spread([-1.0, 1.0]) == math.inf

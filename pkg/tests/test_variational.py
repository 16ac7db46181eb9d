import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robin_spectra.curve_geometry import curvature_stats, gaussian_graph, line_bump, straight_line, wedge_smoothed
from robin_spectra.strip2d import StripModel, bracket_eigenvalues
from robin_spectra.variational import (
    TrialFunctionSpec, chi, chi_eps_norm_sq, chi_norm_sq, deformation_functional, deformation_limit,
    plateau, resolve_trial, trial_overlap, trial_rayleigh_bound, wedge_deformation_limit)


def _bump(beta, **kw):
    return StripModel(line_bump(), float(beta), "interior", s_window=(-6.0, 6.0), **kw)


@pytest.mark.parametrize("eps", [0.1, 0.01])
def test_chi_eps_norm_scaling(eps):
    assert chi_eps_norm_sq(eps) == pytest.approx(2 * eps * chi_norm_sq(), rel=1e-8)


def test_bumps_are_smooth_and_supported():
    x = np.linspace(-0.5, 1.5, 2001)
    c = chi(x)
    assert np.all(c[(x <= 0) | (x >= 1)] == 0) and np.all(c[(x > 0.01) & (x < 0.99)] > 0)
    p = plateau(np.linspace(-3, 3, 601))
    assert p.min() >= 0 and p.max() <= 1


@given(j=st.integers(1, 6), k=st.integers(1, 6), eps=st.floats(0.05, 0.5))
def test_trial_supports_are_disjoint(j, k, eps):
    if j == k:
        return
    a = TrialFunctionSpec(j).support(eps, 0.0)
    b = TrialFunctionSpec(k).support(eps, 0.0)
    # adjacent supports share an endpoint; overlap length is zero up to rounding
    assert min(a[1], b[1]) - max(a[0], b[0]) <= 1e-12


def test_trial_functions_are_orthogonal():
    m = _bump(20.0)
    assert abs(trial_overlap(m, TrialFunctionSpec(1), TrialFunctionSpec(2))) <= 1e-12


def test_trial_bound_remainder_constant_is_stable():
    g_star = curvature_stats(line_bump()).gamma_star
    consts = []
    for beta in (20.0, 40.0, 80.0):
        val = trial_rayleigh_bound(_bump(beta)).value
        consts.append((val + (beta + 0.5 * g_star) ** 2) / beta ** (2 / 3))
    assert all(c > 0 for c in consts)
    assert max(consts) / min(consts) <= 1.25


def test_flat_trial_value_above_threshold():
    m = StripModel(straight_line(), 20.0, "interior", s_window=(-6.0, 6.0))
    assert trial_rayleigh_bound(m, TrialFunctionSpec(s_star=0.0)).value >= -400.0


def test_trial_defaults_resolve_to_curvature_maximum():
    m = _bump(27.0)
    spec = resolve_trial(m, TrialFunctionSpec())
    g_star = curvature_stats(line_bump()).gamma_star
    assert spec.eps == pytest.approx(27.0 ** (-1 / 3))
    assert spec.alpha == pytest.approx(27.0 + 0.5 * g_star, abs=1e-6)
    assert abs(spec.s_star) < 1e-2


@pytest.mark.slow
def test_trial_value_above_discrete_eigenvalue():
    m = _bump(20.0, n_s=256, n_u=128)
    enc = bracket_eigenvalues(m, 1)
    assert trial_rayleigh_bound(m).value >= enc.upper[0] - enc.upper_tol[0]


def test_flat_line_deformation_is_zero():
    assert deformation_limit(straight_line(), 1.0) == 0.0
    assert deformation_functional(straight_line(), 1.0, 16).terms["bulk"] + \
        deformation_functional(straight_line(), 1.0, 16).terms["boundary"] == pytest.approx(0.0, abs=1e-10)


def test_graph_bump_limit_negative():
    assert deformation_limit(gaussian_graph(0.3), 1.0) < 0


def test_wedge_limit_negative():
    smooth = deformation_limit(wedge_smoothed(math.pi / 6), 1.0)
    sharp = wedge_deformation_limit(math.pi / 6, 1.0)
    assert smooth < 0 and sharp < 0
    assert sharp == pytest.approx(-math.tan(math.pi / 12), rel=1e-12)


def test_functional_decreases_to_limit():
    curve = gaussian_graph(0.3)
    lim = deformation_limit(curve, 1.0)
    res = [deformation_functional(curve, 1.0, n) for n in (8, 16, 32, 64, 128, 256)]
    S = [r.S_n for r in res]
    grads = [r.terms["gradient"] for r in res]
    assert all(b < a for a, b in zip(S, S[1:]))
    assert all(s > lim for s in S)
    assert all(b == pytest.approx(a / 2, rel=1e-6) for a, b in zip(grads, grads[1:]))

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robin_spectra.eigensolve import lowest_eigenpairs
from robin_spectra.errors import RegimeError
from robin_spectra.transverse1d import (
    TransverseProblem, _fd_lowest, assemble_transverse, dirichlet_regime_ok,
    fd_transverse_eigenvalue, neumann_regime_ok, robin_neumann_threshold, strip_even_mode,
    t_dirichlet_bounds, t_dirichlet_eigenvalue, t_neumann_bounds, t_neumann_eigenvalue)


def test_dirichlet_example():
    z = t_dirichlet_eigenvalue(2.0, 10.0)
    lo, hi = t_dirichlet_bounds(2.0, 10.0)
    assert lo == -100.0 and hi == pytest.approx(-100 + 400 * math.exp(-20))
    assert lo <= z <= hi


def test_dirichlet_halfline_limit():
    assert t_dirichlet_eigenvalue(50.0, 3.0) == pytest.approx(-9.0, rel=1e-14)


def test_dirichlet_matches_fd():
    fd = fd_transverse_eigenvalue(TransverseProblem(1.0, 2.0))
    assert t_dirichlet_eigenvalue(1.0, 2.0) == pytest.approx(fd, rel=1e-6)


def test_neumann_example():
    z = t_neumann_eigenvalue(2.0, 10.0, 0.3)
    lo, hi = t_neumann_bounds(2.0, 10.0)
    assert lo == pytest.approx(-100 - 1125 * math.exp(-20)) and hi == -100.0
    assert lo <= z <= hi
    assert t_neumann_eigenvalue(2.0, 10.0) <= t_dirichlet_eigenvalue(2.0, 10.0)


def test_neumann_matches_fd():
    fd = fd_transverse_eigenvalue(TransverseProblem(1.0, 5.0, "robin", -0.2))
    assert t_neumann_eigenvalue(1.0, 5.0, -0.2) == pytest.approx(fd, rel=1e-6)


def test_regime_errors():
    with pytest.raises(RegimeError):
        t_dirichlet_eigenvalue(1.0, 1.0)
    with pytest.raises(RegimeError):
        t_neumann_eigenvalue(1.0, 0.5, 0.0)


def test_robin_neumann_threshold():
    z1 = robin_neumann_threshold(1.0, 1.0)
    assert z1 == pytest.approx(1.1997, abs=1e-4)
    assert z1 * math.tanh(z1) == pytest.approx(1.0, rel=1e-14)
    fd = fd_transverse_eigenvalue(TransverseProblem(1.0, 1.0, "neumann"), n=1000)
    assert -z1 * z1 == pytest.approx(fd, rel=1e-7)
    z2 = robin_neumann_threshold(2.0, 1.0)
    assert 1.0 < z2 < z1
    assert robin_neumann_threshold(40.0, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_strip_even_mode():
    lam = strip_even_mode(1.0, 1.0)
    k = math.sqrt(-lam)
    assert k * math.tanh(k / 2) == pytest.approx(1.0, rel=1e-14)


def test_no_robin_gives_mixed_mode():
    a = 1.5
    vals = lowest_eigenpairs(assemble_transverse(TransverseProblem(a, 0.0), 512), 1).values
    assert vals[0] == pytest.approx((math.pi / (2 * a)) ** 2, rel=1e-5)


def test_large_width_gives_halfline_value():
    beta = 6.0
    z = t_dirichlet_eigenvalue(4.0, beta)
    assert 0 <= z + beta**2 <= 4 * beta**2 * math.exp(-4.0 * beta)


def test_fd_converges_second_order():
    prob = TransverseProblem(1.0, 4.0)
    exact = t_dirichlet_eigenvalue(1.0, 4.0)
    errs = [abs(_fd_lowest(prob, n) - exact) for n in (100, 200, 400)]
    for e0, e1 in zip(errs, errs[1:]):
        assert 3.0 <= e0 / e1 <= 5.0


@given(a=st.floats(0.2, 5.0), s0=st.floats(0.5, 40.0))
def test_dirichlet_sandwich(a, s0):
    if not dirichlet_regime_ok(a, s0):
        return
    lo, hi = t_dirichlet_bounds(a, s0)
    assert lo <= t_dirichlet_eigenvalue(a, s0) <= hi


@given(a=st.floats(0.2, 5.0), s0=st.floats(0.5, 40.0), frac=st.floats(-0.99, 0.99))
def test_neumann_sandwich_and_ordering(a, s0, frac):
    sa = frac * s0
    if not neumann_regime_ok(a, s0, sa):
        return
    lo, hi = t_neumann_bounds(a, s0)
    zn = t_neumann_eigenvalue(a, s0, sa)
    assert lo <= zn <= hi
    if dirichlet_regime_ok(a, s0) and sa == 0.0:
        assert zn <= t_dirichlet_eigenvalue(a, s0)


@given(a=st.floats(0.5, 4.0), s0=st.floats(2.0, 20.0))
def test_neumann_below_dirichlet(a, s0):
    if dirichlet_regime_ok(a, s0) and neumann_regime_ok(a, s0, 0.0):
        assert t_neumann_eigenvalue(a, s0) <= t_dirichlet_eigenvalue(a, s0)

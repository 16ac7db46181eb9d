import math

import numpy as np
import pytest

from robin_spectra.comparison1d import Comparison1DProblem, mu_eigenvalues
from robin_spectra.curve_geometry import sech_profile

ZERO = lambda s: np.zeros_like(np.asarray(s, dtype=float))
ONE = lambda s: np.ones_like(np.asarray(s, dtype=float))
POSCHL_TELLER = -((math.sqrt(2.0) - 1.0) / 2.0) ** 2


def test_flat_circle_has_constant_mode():
    v = mu_eigenvalues(Comparison1DProblem(ZERO, "circle", 2 * math.pi, 1024), 1).values
    assert v[0] == pytest.approx(0.0, abs=1e-10)


def test_unit_circle_levels_and_multiplicity():
    v = mu_eigenvalues(Comparison1DProblem(ONE, "circle", 2 * math.pi, 1024), 5).values
    assert v[0] == pytest.approx(-0.25, abs=1e-10)
    assert np.allclose(v[1:], [0.75, 0.75, 3.75, 3.75], rtol=1e-4)
    assert abs(v[1] - v[2]) <= 1e-8 and abs(v[3] - v[4]) <= 1e-8


def test_flat_line_dirichlet_mode():
    S = 10.0
    spec = mu_eigenvalues(Comparison1DProblem(ZERO, "line", S, 2048), 1)
    assert spec.values[0] == pytest.approx((math.pi / (2 * S)) ** 2, rel=1e-5)
    assert not spec.discrete_flags.any()


def test_sech_bound_state():
    prob = Comparison1DProblem(sech_profile(1.0), "line", 40.0, 4096)
    assert mu_eigenvalues(prob, 1).values[0] == pytest.approx(POSCHL_TELLER, abs=1e-5)


def test_bound_state_stable_under_doubling_window():
    # the bound state decays like exp(-0.207|s|); S = 60 puts truncation far below 1e-8
    a = mu_eigenvalues(Comparison1DProblem(sech_profile(1.0), "line", 60.0, 4096), 1).values[0]
    b = mu_eigenvalues(Comparison1DProblem(sech_profile(1.0), "line", 120.0, 8192), 1).values[0]
    assert abs(a - b) <= 1e-8


def test_second_order_convergence_on_circle():
    errs = []
    for n in (256, 512, 1024):
        v = mu_eigenvalues(Comparison1DProblem(ONE, "circle", 2 * math.pi, n), 3).values
        errs.append(abs(v[1] - 0.75))
    for e0, e1 in zip(errs, errs[1:]):
        assert 2.0 <= e0 / e1 <= 8.0

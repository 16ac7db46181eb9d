import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from robin_spectra.eigensolve import Spectrum, SymPencil, classify_discrete, lowest_eigenpairs
from robin_spectra.transverse1d import TransverseProblem, assemble_transverse


def _pencil(A, B=None):
    A = sp.csr_matrix(A)
    B = sp.identity(A.shape[0], format="csr") if B is None else sp.csr_matrix(B)
    return SymPencil(A, B)


def test_tridiagonal_closed_form():
    A = np.diag([2.0] * 3) + np.diag([-1.0] * 2, 1) + np.diag([-1.0] * 2, -1)
    vals = lowest_eigenpairs(_pencil(A), 3).values
    assert np.allclose(vals, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-12)


def test_diagonal():
    assert lowest_eigenpairs(_pencil(np.diag([1.0, 2.0, 3.0])), 1).values[0] == pytest.approx(1.0)


def test_random_dense_matches_eigh():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((50, 50))
    A = M + M.T
    vals = lowest_eigenpairs(_pencil(A), 5).values
    assert np.allclose(vals, sla.eigh(A, eigvals_only=True)[:5], atol=1e-10)


def test_large_pencil_uses_iterative_path():
    n = 3000
    main = np.full(n, 2.0)
    off = np.full(n - 1, -1.0)
    A = sp.diags([off, main, off], [-1, 0, 1], format="csr")
    spec = lowest_eigenpairs(_pencil(A), 4, tol=1e-10)
    exact = 2 - 2 * np.cos(np.arange(1, 5) * np.pi / (n + 1))
    assert np.allclose(spec.values, exact, rtol=1e-8, atol=1e-12)
    assert np.all(spec.residuals <= 1e-10 * np.maximum(1.0, np.abs(spec.values)))


def test_generalized_vectors_are_b_orthonormal():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((40, 40))
    A = M + M.T
    C = rng.standard_normal((40, 40))
    B = C @ C.T + 40 * np.eye(40)
    spec = lowest_eigenpairs(_pencil(A, B), 6)
    V = spec.vectors
    assert np.allclose(V.T @ B @ V, np.eye(6), atol=1e-8)
    assert np.all(np.diff(spec.values) >= 0)
    assert np.allclose(spec.values, sla.eigh(A, B, eigvals_only=True)[:6], atol=1e-10)


def test_classify_examples():
    flags = classify_discrete(Spectrum(np.array([-110.0, -99.0, -50.0])), -100.0, 0.5).discrete_flags
    assert flags.tolist() == [True, False, False]
    neg = classify_discrete(Spectrum(np.array([-3.0, -0.5, -1e-3])), 0.0).discrete_flags
    assert neg.all()
    assert len(classify_discrete(Spectrum(np.array([])), 0.0).discrete_flags) == 0


def test_refinement_lowers_conforming_eigenvalues():
    prob = TransverseProblem(1.0, 3.0)
    vals = [lowest_eigenpairs(assemble_transverse(prob, n), 1).values[0] for n in (32, 64, 128, 256)]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


@given(seed=st.integers(0, 2**31 - 1), scale=st.floats(0.0, 5.0))
def test_adding_psd_term_never_lowers(seed, scale):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((20, 20))
    A = M + M.T
    P = rng.standard_normal((20, 3))
    base = lowest_eigenpairs(_pencil(A), 4).values
    more = lowest_eigenpairs(_pencil(A + scale * P @ P.T), 4).values
    assert np.all(more >= base - 1e-10)

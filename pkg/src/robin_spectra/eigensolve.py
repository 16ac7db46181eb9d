"""Lowest eigenpairs of symmetric-definite pencils ``A x = lambda B x``."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .errors import ConvergenceError, DefinitenessError

DENSE_LIMIT = 2000


@dataclass
class SymPencil:
    A: sp.csr_matrix
    B: sp.csr_matrix
    metadata: str = ""
    sigma_hint: float | None = None  # a value known to lie below the spectrum

    def __post_init__(self):
        self.A = sp.csr_matrix(self.A)
        self.B = sp.csr_matrix(self.B)
        if self.A.shape != self.B.shape or self.A.shape[0] != self.A.shape[1]:
            raise ValueError("A and B must be square and of equal size")

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        for M in (self.A, self.B):
            d = abs(M - M.T)
            scale = max(abs(M).max(), 1e-300)
            if d.nnz and d.max() > tol * scale:
                return False
        return True


@dataclass
class Spectrum:
    values: np.ndarray
    vectors: np.ndarray | None = None
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    threshold: float | None = None
    discrete_flags: np.ndarray | None = None

    def __len__(self):
        return len(self.values)


def _check_definite(B, seed):
    # cheap sampled Rayleigh quotients plus a diagonal test
    diag = B.diagonal()
    if np.any(diag <= 0):
        raise DefinitenessError("mass matrix has a non-positive diagonal entry")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((B.shape[0], 4))
    q = np.einsum("ij,ij->j", X, B @ X) / np.einsum("ij,ij->j", X, X)
    if np.any(q <= 0):
        raise DefinitenessError("mass matrix is not positive definite")


def _gershgorin_lower(A, B):
    # lower bound for x'Ax / x'Bx using the lumped mass as a scale
    Bd = np.asarray(abs(B).sum(axis=1)).ravel()
    Dm = sp.diags(1.0 / np.sqrt(Bd))
    C = Dm @ A @ Dm
    radius = np.asarray(abs(C).sum(axis=1)).ravel() - np.abs(C.diagonal())
    g = float(np.min(C.diagonal() - radius))
    # consistent mass of bilinear elements is >= lumped/9
    return g * 9.0 if g < 0 else g / 9.0 - 1.0


def residual_norms(A, B, values, vectors):
    out = np.empty(len(values))
    for i, lam in enumerate(values):
        v = vectors[:, i]
        Bv = B @ v
        out[i] = np.linalg.norm(A @ v - lam * Bv) / np.linalg.norm(Bv)
    return out


def lowest_eigenpairs(pencil: SymPencil, k: int, tol: float = 1e-8, *, seed: int = 0,
                      sigma: float | None = None, return_vectors: bool = True,
                      maxiter: int | None = None) -> Spectrum:
    """The k smallest eigenpairs with certified residuals.

    Residuals are ``||A v - lam B v|| / ||B v||`` and must not exceed
    ``tol * max(1, |lam|)``.  Dimensions up to ``DENSE_LIMIT`` are solved
    densely; larger pencils use shift-invert Lanczos with a shift below the
    spectrum (``sigma``, the pencil's hint, or a Gershgorin bound) followed by
    a Rayleigh-Ritz cleanup in the B inner product.
    """
    n = pencil.dim
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    A, B = pencil.A, pencil.B
    _check_definite(B, seed)
    if n <= DENSE_LIMIT:
        try:
            vals, vecs = la.eigh(A.toarray(), B.toarray(), subset_by_index=[0, k - 1])
        except la.LinAlgError as exc:
            raise DefinitenessError(str(exc)) from exc
    else:
        if sigma is None:
            sigma = pencil.sigma_hint
        if sigma is None:
            sigma = _gershgorin_lower(A, B)
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(n)
        ncv = min(n, max(2 * k + 1, 20))
        try:
            vals, vecs = sla.eigsh(A.tocsc(), k=k, M=B.tocsc(), sigma=sigma, which="LM",
                                   v0=v0, ncv=ncv, tol=0.0 if tol < 1e-10 else tol * 1e-3,
                                   maxiter=maxiter or 50 * n)
        except sla.ArpackNoConvergence as exc:
            raise ConvergenceError(f"ARPACK did not converge: {exc}") from exc
        # Rayleigh-Ritz in the computed subspace: B-orthonormal, sorted
        Ar = vecs.T @ (A @ vecs)
        Br = vecs.T @ (B @ vecs)
        Ar = 0.5 * (Ar + Ar.T)
        Br = 0.5 * (Br + Br.T)
        vals, C = la.eigh(Ar, Br)
        vecs = vecs @ C
    order = np.argsort(vals)
    vals, vecs = np.asarray(vals)[order], vecs[:, order]
    res = residual_norms(A, B, vals, vecs)
    bound = tol * np.maximum(1.0, np.abs(vals))
    if np.any(res > bound):
        raise ConvergenceError(
            f"residuals {res.max():.3e} exceed the requested tolerance", residuals=res)
    return Spectrum(values=vals, vectors=vecs if return_vectors else None, residuals=res)


def classify_discrete(spectrum: Spectrum, threshold: float, margin: float = 0.0) -> Spectrum:
    """Flag values strictly below ``threshold - margin`` as discrete eigenvalues."""
    if margin < 0:
        raise ValueError("margin must be non-negative")
    vals = np.asarray(spectrum.values, dtype=float)
    flags = vals < threshold - margin
    return replace(spectrum, threshold=float(threshold), discrete_flags=flags)

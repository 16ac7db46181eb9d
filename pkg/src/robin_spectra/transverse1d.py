"""One-dimensional Robin problems on an interval (0, a).

The form is

    t[f] = int_0^a |f'|^2 - sigma0 |f(0)|^2 (+ sigma_a |f(a)|^2)

with either a Dirichlet far end (f(a) = 0) or a natural far end carrying the
optional ``sigma_a`` term.  For large ``a * sigma0`` there is a single
negative eigenvalue close to ``-sigma0**2``; it is found from the
separated-variables transcendental equations below, solved by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import bisect

from .eigensolve import SymPencil
from .errors import RegimeError
from .fem import assemble_1d, graded_nodes

# bisection runs to the relative floor of double precision; the closed-form
# intervals can be narrower than 1e-14 relative when a*sigma0 is large
_XTOL = np.finfo(float).tiny
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class TransverseProblem:
    a: float
    sigma0: float
    far_bc: str = "dirichlet"  # "dirichlet", "neumann" or "robin"
    sigma_a: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("interval width must be positive")
        if self.far_bc not in ("dirichlet", "neumann", "robin"):
            raise ValueError(f"unknown far boundary condition {self.far_bc!r}")

    @property
    def far_coefficient(self) -> float:
        return self.sigma_a if self.far_bc == "robin" else 0.0


def _bisect(f, lo, hi):
    return bisect(f, lo, hi, xtol=_XTOL, rtol=_RTOL, maxiter=2000)


def dirichlet_regime_ok(a: float, sigma0: float) -> bool:
    return a * sigma0 > 4.0 / 3.0


def neumann_regime_ok(a: float, sigma0: float, sigma_a: float) -> bool:
    return sigma0 > max(abs(sigma_a), 2.0 * math.log(5.0) / (3.0 * a))


def _tail(x: float) -> float:
    """``1 - tanh(x)`` without cancellation."""
    e = math.exp(-2.0 * x)
    return 2.0 * e / (1.0 + e)


def _grow_bracket(f, hi):
    # smallest doubling of hi with f(hi) > 0, returning the last non-positive point
    lo = 0.0
    while f(hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
    return lo, hi


def t_dirichlet_eigenvalue(a: float, sigma0: float) -> float:
    """Negative eigenvalue with Robin ``sigma0`` at 0 and Dirichlet at ``a``.

    The eigenfunction is ``sinh(k (a - u))``, giving ``k coth(k a) = sigma0``.
    The root is found through ``delta = sigma0 - k``, which solves
    ``delta = sigma0 (1 - tanh(k a))`` without cancellation when ``delta`` is tiny.
    """
    if not (a > 0 and sigma0 > 0 and dirichlet_regime_ok(a, sigma0)):
        raise RegimeError(f"need a*sigma0 > 4/3, got a={a}, sigma0={sigma0}")

    def f(delta):
        return delta - sigma0 * _tail((sigma0 - delta) * a)

    if f(0.0) >= 0.0:
        return -sigma0 * sigma0
    k_lo = sigma0 * 1e-3
    while k_lo - sigma0 * math.tanh(k_lo * a) >= 0.0:
        k_lo *= 0.5
    delta = _bisect(f, 0.0, sigma0 - k_lo)
    return -sigma0 * sigma0 + delta * (2.0 * sigma0 - delta)


def t_neumann_eigenvalue(a: float, sigma0: float, sigma_a: float = 0.0) -> float:
    """Negative eigenvalue with Robin ``-sigma0`` at 0 and ``+sigma_a`` at ``a``.

    With ``f = cosh(k u) - (sigma0/k) sinh(k u)`` the far condition reads
    ``(k^2 - sigma0 sigma_a) tanh(k a) = k (sigma0 - sigma_a)``.  Writing
    ``k = sigma0 + delta`` turns it into
    ``delta (k + sigma_a) = (1 - tanh(k a)) (k^2 - sigma0 sigma_a)`` with ``delta >= 0``.
    """
    if not (a > 0 and neumann_regime_ok(a, sigma0, sigma_a)):
        raise RegimeError(
            f"need sigma0 > max(|sigma_a|, 2 log5/(3a)), got a={a}, sigma0={sigma0}, sigma_a={sigma_a}")

    def f(delta):
        k = sigma0 + delta
        return delta * (k + sigma_a) - _tail(k * a) * (k * k - sigma0 * sigma_a)

    if f(0.0) >= 0.0:
        return -sigma0 * sigma0
    lo, hi = _grow_bracket(f, sigma0)
    delta = _bisect(f, lo, hi)
    return -sigma0 * sigma0 - delta * (2.0 * sigma0 + delta)


def t_dirichlet_bounds(a: float, sigma0: float) -> tuple[float, float]:
    s2 = sigma0 * sigma0
    return -s2, -s2 + 4.0 * s2 * math.exp(-a * sigma0)


def t_neumann_bounds(a: float, sigma0: float) -> tuple[float, float]:
    s2 = sigma0 * sigma0
    return -s2 - 11.25 * s2 * math.exp(-a * sigma0), -s2


def transverse_eigenvalue(problem: TransverseProblem) -> float:
    if problem.far_bc == "dirichlet":
        return t_dirichlet_eigenvalue(problem.a, problem.sigma0)
    return t_neumann_eigenvalue(problem.a, problem.sigma0, problem.far_coefficient)


def robin_neumann_threshold(b: float, beta: float) -> float:
    """Root ``z >= beta`` of ``z tanh(z b) = beta``.

    ``-z**2`` is the bottom of the Robin(0)-Neumann(b) interval spectrum; the
    equation is equivalent to ``(z - beta)/(z + beta) = exp(-2 z b)``.
    """
    if not (b > 0 and beta > 0):
        raise ValueError("b and beta must be positive")

    def f(delta):
        # z tanh(z b) - beta with z = beta + delta
        z = beta + delta
        return delta - z * _tail(z * b)

    if f(0.0) >= 0.0:
        return beta
    lo, hi = _grow_bracket(f, beta)
    return beta + _bisect(f, lo, hi)


def strip_even_mode(d: float, beta: float) -> float:
    """Lowest eigenvalue ``-k^2`` of the Robin-Robin interval (0, d), ``k tanh(k d/2) = beta``."""
    if not (d > 0 and beta > 0):
        raise ValueError("d and beta must be positive")
    return -robin_neumann_threshold(0.5 * d, beta) ** 2


def assemble_transverse(problem: TransverseProblem, n: int, grading: float = 0.0) -> SymPencil:
    """P1 pencil for the interval form on ``n`` elements (optionally graded towards 0)."""
    if n < 16:
        raise ValueError("n must be at least 16")
    nodes = graded_nodes(problem.a, n, grading)
    pencil, _ = assemble_1d(
        nodes,
        dirichlet=(False, problem.far_bc == "dirichlet"),
        point_terms=(-problem.sigma0, problem.far_coefficient),
        metadata=f"transverse a={problem.a} sigma0={problem.sigma0} far={problem.far_bc}",
    )
    return pencil


def _fd_lowest(problem: TransverseProblem, n: int) -> float:
    # lumped-mass P1, i.e. the standard finite-difference scheme with half cells
    h = problem.a / n
    nn = n if problem.far_bc == "dirichlet" else n + 1
    diag = np.full(nn, 2.0 / h)
    diag[0] = 1.0 / h - problem.sigma0
    mass = np.full(nn, h)
    mass[0] = 0.5 * h
    if problem.far_bc != "dirichlet":
        diag[-1] = 1.0 / h + problem.far_coefficient
        mass[-1] = 0.5 * h
    off = np.full(nn - 1, -1.0 / h)
    r = 1.0 / np.sqrt(mass)
    d = diag * r * r
    e = off * r[:-1] * r[1:]
    return float(eigh_tridiagonal(d, e, select="i", select_range=(0, 0), eigvals_only=True)[0])


def fd_transverse_eigenvalue(problem: TransverseProblem, n: int = 500, richardson: bool = True) -> float:
    """Finite-difference estimate of the lowest eigenvalue.

    The scheme is second order; with ``richardson`` the results on ``n`` and
    ``2n`` cells are combined to cancel the leading error term.
    """
    coarse = _fd_lowest(problem, n)
    if not richardson:
        return coarse
    fine = _fd_lowest(problem, 2 * n)
    return (4.0 * fine - coarse) / 3.0

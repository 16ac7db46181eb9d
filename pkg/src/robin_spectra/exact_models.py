"""Exactly solvable reference problems.

* halfplane: essential spectrum starting at ``-beta^2``;
* quadrant: one bound state ``-2 beta^2`` (tensor square of the halfline);
* exterior of a disc of radius R: bound states ``-k^2`` where ``u = kR`` solves
  ``-u K_m'(u)/K_m(u) = beta R`` for each angular momentum ``m < beta R``.

Modified Bessel functions of the second kind are implemented here from
scratch (series and continued fraction for ``K_0, K_1``, upward recurrence
for higher orders); :func:`bessel_K_quadrature` evaluates the integral
representation independently and serves as a check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect

from .errors import DomainError, NoBoundStateError, RangeError
from .transverse1d import t_dirichlet_eigenvalue

_EULER = 0.57721566490153286061
_EPS = 1e-16


def _k01_series(x: float) -> tuple[float, float]:
    # power series around 0, accurate for x <= 2
    y = 0.25 * x * x
    lnh = math.log(0.5 * x)
    term = 1.0   # y^k / (k!)^2
    harm = 0.0   # H_k
    i0 = k0s = 0.0
    i1 = k1s = 0.0
    for k in range(200):
        if k > 0:
            term *= y / (k * k)
            harm += 1.0 / k
        i0 += term
        k0s += term * harm
        # y^k / (k! (k+1)!) = term / (k+1)
        t1 = term / (k + 1)
        i1 += t1
        # psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        k1s += t1 * (-2.0 * _EULER + 2.0 * harm + 1.0 / (k + 1))
        if term < _EPS * 1e-3 * max(i0, 1.0) and k > 2:
            break
    i1 *= 0.5 * x
    k0 = -(lnh + _EULER) * i0 + k0s
    k1 = 1.0 / x + lnh * i1 - 0.25 * x * k1s
    return k0, k1


def _k01_scaled_cf(x: float) -> tuple[float, float]:
    # Steed/Temme continued fraction for e^x K_0(x), e^x K_1(x), x >= 2
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 100000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def bessel_K_scaled_all(m: int, x: float) -> np.ndarray:
    """``e^x K_n(x)`` for ``n = 0..max(m, 1)``."""
    if not x > 0:
        raise DomainError("K_m(x) requires x > 0")
    if m < 0 or int(m) != m:
        raise DomainError("order must be a non-negative integer")
    m = int(m)
    if x <= 2.0:
        k0, k1 = _k01_series(x)
        k0 *= math.exp(x)
        k1 *= math.exp(x)
    else:
        k0, k1 = _k01_scaled_cf(x)
    out = np.empty(max(m, 1) + 1)
    out[0], out[1] = k0, k1
    with np.errstate(over="ignore"):
        for n in range(1, m):
            out[n + 1] = out[n - 1] + (2.0 * n / x) * out[n]
    if not np.all(np.isfinite(out)):
        raise RangeError(f"K_{m}({x}) overflows")
    return out


def bessel_K(m: int, x: float) -> float:
    """Modified Bessel function of the second kind ``K_m(x)``, integer ``m >= 0``."""
    ks = bessel_K_scaled_all(m, x)[m]
    if x > 700.0:
        val = ks * math.exp(-x)
        if val == 0.0:
            raise RangeError(f"K_{m}({x}) underflows")
        return val
    val = ks * math.exp(-x)
    if not math.isfinite(val):
        raise RangeError(f"K_{m}({x}) overflows")
    return val


def bessel_logderiv(m: int, x: float) -> float:
    """``-x K_m'(x) / K_m(x) = x (K_{m-1} + K_{m+1}) / (2 K_m)`` with ``K_{-1} = K_1``."""
    ks = bessel_K_scaled_all(m + 1, x)
    below = ks[1] if m == 0 else ks[m - 1]
    return x * (below + ks[m + 1]) / (2.0 * ks[m])


def bessel_K_quadrature(m: int, x: float, epsrel: float = 1e-13) -> float:
    """``int_0^inf exp(-x cosh t) cosh(m t) dt`` by adaptive quadrature.

    The integrand is rescaled by its peak value at ``t0 = asinh(m/x)`` and
    cut where it has dropped by ``e^-50``.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    t0 = math.asinh(m / x)
    e0 = -x * math.cosh(t0) + m * t0

    def expo(t):
        return -x * math.cosh(t) + m * t - e0

    def f(t):
        return math.exp(expo(t)) * 0.5 * (1.0 + math.exp(-2.0 * m * t))

    t_end = t0 + 1.0
    while expo(t_end) > -50.0:
        t_end += 1.0
    pts = [t0] if 0.0 < t0 < t_end else None
    val, _ = quad(f, 0.0, t_end, points=pts, epsabs=0.0, epsrel=epsrel, limit=500)
    return val * math.exp(e0)


@dataclass(frozen=True)
class DiscSpec:
    R: float
    beta: float
    m: int
    alpha_scaled: float
    u_root: float
    lam: float
    multiplicity: int
    residual: float


def disc_exterior_eigenvalue(R: float, beta: float, m: int) -> DiscSpec:
    """Bound state of angular momentum ``m`` outside a disc of radius ``R``."""
    if not (R > 0 and beta > 0):
        raise ValueError("R and beta must be positive")
    alpha = beta * R
    if not alpha > m:
        raise NoBoundStateError(f"no bound state for m={m}: beta*R = {alpha} <= m")
    f = lambda u: bessel_logderiv(m, u) - alpha
    hi = alpha
    lo = max(m, 1e-8) * (1.0 + 1e-12)
    lo = min(lo, 0.5 * alpha)
    while f(lo) >= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoBoundStateError("spectral condition has no root above 0")
    u = bisect(f, lo, hi, xtol=1e-14 * alpha, rtol=4 * np.finfo(float).eps, maxiter=500)
    return DiscSpec(R=R, beta=beta, m=m, alpha_scaled=alpha, u_root=u, lam=-(u / R) ** 2,
                    multiplicity=1 if m == 0 else 2, residual=f(u))


def disc_exterior_asymptotic(R: float, beta: float, m: int) -> float:
    return -(beta - 0.5 / R) ** 2 + (m * m - 0.25) / R ** 2


def disc_exterior_levels(R: float, beta: float, count: int) -> list[DiscSpec]:
    """The ``count`` lowest eigenvalues repeated by multiplicity (m=0, 1, 1, 2, 2, ...)."""
    out: list[DiscSpec] = []
    m = 0
    while len(out) < count and m < beta * R:
        d = disc_exterior_eigenvalue(R, beta, m)
        out.extend([d] * d.multiplicity)
        m += 1
    return sorted(out, key=lambda d: d.lam)[:count]


def halfplane_threshold(beta: float) -> float:
    if not beta > 0:
        raise ValueError("beta must be positive")
    return -beta * beta


def quadrant_eigenvalue(beta: float) -> float:
    """The single eigenvalue ``-2 beta^2`` of the quarter plane."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if beta == 0:
        warnings.warn("beta = 0: the Neumann quadrant has no eigenvalue below 0", stacklevel=2)
        return 0.0
    return -2.0 * beta * beta


def quadrant_separable(beta: float, L: float) -> tuple[float, float]:
    """``2 zeta^D(L, beta)`` for the square ``(0, L)^2`` and its distance bound ``8 beta^2 e^{-L beta}``."""
    return 2.0 * t_dirichlet_eigenvalue(L, beta), 8.0 * beta * beta * math.exp(-L * beta)

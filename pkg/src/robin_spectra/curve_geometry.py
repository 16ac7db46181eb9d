"""Arc-length parametrized planar boundary curves and their curvature.

Convention: the domain lies to the left of the curve when it is traversed
in the direction of increasing ``s``.  The signed curvature is
``gamma = G1' G2'' - G2' G1''``, so a counterclockwise circle has
``gamma = 1/R`` and the disc interior lies to its left.

Infinite curves live on a truncation window ``[s_min, s_max]``.  Point and
tangent evaluators extend the curve by straight tangent rays outside the
window; curvature evaluators refuse out-of-window arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import minimize_scalar

from .errors import DomainError, GeometryError, SingularCoordinatesError

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _fd_derivative(f: ArrayFn, s, h: float = 1e-3) -> np.ndarray:
    # 5-point central difference, O(h^4)
    s = np.asarray(s, dtype=float)
    return (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h)


# ---------------------------------------------------------------------------
# curvature profiles


@dataclass(frozen=True)
class CurvatureProfile:
    """A curvature function of arc length together with its derivatives.

    ``antiderivative`` (optional) returns the integral of gamma from -inf to s;
    it fixes the tangent angle so that the curve heads along +x at s -> -inf.
    """

    name: str
    gamma: ArrayFn
    dgamma: ArrayFn | None = None
    d2gamma: ArrayFn | None = None
    antiderivative: ArrayFn | None = None
    params: dict = field(default_factory=dict)

    def __call__(self, s):
        return self.gamma(np.asarray(s, dtype=float))

    def d1(self, s):
        s = np.asarray(s, dtype=float)
        if self.dgamma is not None:
            return self.dgamma(s)
        return _fd_derivative(self.gamma, s)

    def d2(self, s):
        s = np.asarray(s, dtype=float)
        if self.d2gamma is not None:
            return self.d2gamma(s)
        return _fd_derivative(self.d1, s)


def _sech(x):
    return 1.0 / np.cosh(x)


def _gd(x):
    return 2.0 * np.arctan(np.tanh(0.5 * x))


def zero_profile() -> CurvatureProfile:
    z = lambda s: np.zeros_like(np.asarray(s, dtype=float))
    return CurvatureProfile("zero", z, z, z, z)


def constant_profile(c: float) -> CurvatureProfile:
    return CurvatureProfile(
        "constant",
        lambda s: np.full_like(np.asarray(s, dtype=float), c),
        lambda s: np.zeros_like(np.asarray(s, dtype=float)),
        lambda s: np.zeros_like(np.asarray(s, dtype=float)),
        params={"value": c},
    )


def sech_profile(amplitude: float = 1.0, center: float = 0.0) -> CurvatureProfile:
    A, c = amplitude, center

    def g(s):
        return A * _sech(s - c)

    def dg(s):
        x = s - c
        return -A * _sech(x) * np.tanh(x)

    def d2g(s):
        x = s - c
        sh = _sech(x)
        return A * sh * (1.0 - 2.0 * sh**2)

    def prim(s):
        return A * (_gd(s - c) + 0.5 * np.pi)

    return CurvatureProfile("sech", g, dg, d2g, prim, {"amplitude": A, "center": c})


def line_bump_profile(amplitude: float = 1.0, separation: float = 8.0) -> CurvatureProfile:
    """``A*(sech(s) - sech(s - separation))``: zero net turning, sign changing."""
    p = sech_profile(amplitude, 0.0)
    q = sech_profile(amplitude, separation)
    return CurvatureProfile(
        "line_bump",
        lambda s: p.gamma(s) - q.gamma(s),
        lambda s: p.dgamma(s) - q.dgamma(s),
        lambda s: p.d2gamma(s) - q.d2gamma(s),
        lambda s: p.antiderivative(s) - q.antiderivative(s),
        {"amplitude": amplitude, "separation": separation},
    )


def lorentzian_profile(amplitude: float = -1.0) -> CurvatureProfile:
    """``A/(1+s^2)``; with A < 0 this bounds a concave domain."""
    A = amplitude

    def g(s):
        return A / (1.0 + s**2)

    def dg(s):
        return -2.0 * A * s / (1.0 + s**2) ** 2

    def d2g(s):
        return A * (6.0 * s**2 - 2.0) / (1.0 + s**2) ** 3

    def prim(s):
        return A * (np.arctan(s) + 0.5 * np.pi)

    return CurvatureProfile("lorentzian", g, dg, d2g, prim, {"amplitude": A})


_BUMP_NORM = quad(lambda x: math.exp(-1.0 / (1.0 - x * x)), -1.0, 1.0, epsabs=1e-14, epsrel=1e-13)[0]


def _unit_bump(x):
    # C-infinity bump supported on (-1, 1) with unit integral
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    out[m] = np.exp(-1.0 / (1.0 - x[m] ** 2)) / _BUMP_NORM
    return out


def _unit_bump_d1(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    xm = x[m]
    out[m] = _unit_bump(xm) * (-2.0 * xm / (1.0 - xm**2) ** 2)
    return out


def _unit_bump_d2(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    xm = x[m]
    f1 = -2.0 * xm / (1.0 - xm**2) ** 2
    f2 = -(2.0 + 6.0 * xm**2) / (1.0 - xm**2) ** 3
    out[m] = _unit_bump(xm) * (f1**2 + f2)
    return out


def _unit_bump_cdf(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for i, xi in enumerate(x.flat):
        if xi <= -1.0:
            out.flat[i] = 0.0
        elif xi >= 1.0:
            out.flat[i] = 1.0
        else:
            out.flat[i] = quad(lambda t: float(_unit_bump(t)), -1.0, xi, epsabs=1e-15)[0]
    return out


def wedge_profile(alpha: float, fillet_radius: float = 1.0) -> CurvatureProfile:
    """Compactly supported curvature turning the tangent from -alpha to +alpha.

    The turning is spread over an arc of half-length ``alpha*fillet_radius``,
    so the mean curvature on the fillet is ``1/fillet_radius``.
    """
    w = max(alpha * fillet_radius, 1e-12) if alpha != 0 else max(fillet_radius, 1e-12)
    A = 2.0 * alpha
    return CurvatureProfile(
        "wedge",
        lambda s: A / w * _unit_bump(s / w),
        lambda s: A / w**2 * _unit_bump_d1(s / w),
        lambda s: A / w**3 * _unit_bump_d2(s / w),
        lambda s: A * _unit_bump_cdf(s / w) - alpha,
        {"alpha": alpha, "fillet_radius": fillet_radius, "half_width": w},
    )


PROFILES = {
    "zero": lambda **kw: zero_profile(),
    "constant": lambda value=0.0: constant_profile(value),
    "sech": sech_profile,
    "line_bump": line_bump_profile,
    "lorentzian": lorentzian_profile,
}


# ---------------------------------------------------------------------------
# curves


class BoundaryCurve:
    """Base class.  Subclasses implement ``_tangent_angle`` and friends."""

    family: str = "abstract"
    topology: str = "line"  # "line" or "closed"

    def __init__(self, window, params=None):
        self.window = (float(window[0]), float(window[1]))
        self.params = dict(params or {})
        if self.window[1] <= self.window[0]:
            raise GeometryError("empty parameter window")

    # -- to be provided by subclasses on the window
    def _point_in(self, s):
        raise NotImplementedError

    def _theta_in(self, s):
        raise NotImplementedError

    def _gamma_in(self, s):
        raise NotImplementedError

    def _dgamma_in(self, s):
        return _fd_derivative(self._gamma_in, s)

    def _d2gamma_in(self, s):
        return _fd_derivative(self._dgamma_in, s)

    # -- public evaluators
    @property
    def perimeter(self) -> float:
        if self.topology != "closed":
            raise GeometryError("perimeter is only defined for closed loops")
        return self.window[1] - self.window[0]

    def _wrap(self, s):
        s = np.asarray(s, dtype=float)
        if self.topology == "closed":
            s0, s1 = self.window
            return s0 + np.mod(s - s0, s1 - s0)
        return s

    def _check(self, s):
        s = self._wrap(s)
        if self.topology == "line":
            lo, hi = self.window
            tol = 1e-12 * max(1.0, abs(lo), abs(hi))
            if np.any(s < lo - tol) or np.any(s > hi + tol):
                raise DomainError(f"s outside the parameter window [{lo}, {hi}]")
            s = np.clip(s, lo, hi)
        return s

    def tangent_angle(self, s):
        s = self._wrap(s)
        if self.topology == "line":
            s = np.clip(s, *self.window)
        return self._theta_in(s)

    def point(self, s):
        s = self._wrap(s)
        if self.topology == "closed":
            return self._point_in(s)
        lo, hi = self.window
        sc = np.clip(s, lo, hi)
        p = np.asarray(self._point_in(sc), dtype=float)
        t = self.tangent(sc)
        return p + (s - sc)[..., None] * t

    def tangent(self, s):
        th = self.tangent_angle(s)
        return np.stack([np.cos(th), np.sin(th)], axis=-1)

    def normal(self, s):
        """Unit normal pointing to the left (into the domain)."""
        t = self.tangent(s)
        return np.stack([-t[..., 1], t[..., 0]], axis=-1)

    def second(self, s):
        s = np.asarray(s, dtype=float)
        if self.topology == "line":
            inside = (s >= self.window[0]) & (s <= self.window[1])
            g = np.where(inside, self._gamma_in(np.clip(s, *self.window)), 0.0)
        else:
            g = self._gamma_in(self._wrap(s))
        return g[..., None] * self.normal(s)

    def curvature(self, s):
        return self._gamma_in(self._check(s))

    def dcurvature(self, s):
        return self._dgamma_in(self._check(s))

    def d2curvature(self, s):
        return self._d2gamma_in(self._check(s))

    def reversed(self) -> "BoundaryCurve":
        return ReversedCurve(self)

    def __repr__(self):
        return f"{type(self).__name__}(family={self.family!r}, params={self.params!r}, window={self.window})"


class ProfileCurve(BoundaryCurve):
    """Curve reconstructed from a curvature profile.

    ``theta(s) = theta0 + int_{s0}^s gamma`` and ``G(s) = G(s0) + int (cos, sin)``,
    integrated with a high-order dense-output ODE solver.
    """

    family = "from_curvature"

    def __init__(self, profile: CurvatureProfile, window, s0=None, theta0=None,
                 origin=(0.0, 0.0), topology="line", family=None, params=None):
        super().__init__(window, params)
        self.profile = profile
        self.topology = topology
        if family is not None:
            self.family = family
        lo, hi = self.window
        self.s0 = float(0.5 * (lo + hi) if s0 is None else s0)
        if not lo <= self.s0 <= hi:
            raise GeometryError("anchor s0 outside the window")
        if theta0 is None:
            theta0 = (float(profile.antiderivative(np.array(self.s0)))
                      if profile.antiderivative is not None and topology == "line" else 0.0)
        self.theta0 = float(theta0)
        self.origin = np.asarray(origin, dtype=float)
        g0 = profile(np.array([lo, self.s0, hi]))
        if not np.all(np.isfinite(g0)):
            raise GeometryError("non-finite curvature profile")
        self._solve()

    def _solve(self):
        lo, hi = self.window
        y0 = [self.theta0, self.origin[0], self.origin[1]]

        def rhs(s, y):
            return [float(self.profile(s)), math.cos(y[0]), math.sin(y[0])]

        opts = dict(method="DOP853", rtol=1e-12, atol=1e-13, dense_output=True)
        self._fwd = solve_ivp(rhs, (self.s0, hi), y0, **opts) if hi > self.s0 else None
        self._bwd = solve_ivp(rhs, (self.s0, lo), y0, **opts) if lo < self.s0 else None
        for sol in (self._fwd, self._bwd):
            if sol is not None and not sol.success:
                raise GeometryError(f"curve reconstruction failed: {sol.message}")

    def _state(self, s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.empty((3, flat.size))
        if flat.size:
            ge = flat >= self.s0
            if self._fwd is not None and ge.any():
                out[:, ge] = self._fwd.sol(flat[ge])
            elif ge.any():
                out[:, ge] = np.array([[self.theta0], [self.origin[0]], [self.origin[1]]])
            lt = ~ge
            if lt.any():
                out[:, lt] = self._bwd.sol(flat[lt])
        return out.reshape((3,) + s.shape)

    def _theta_in(self, s):
        return self._state(s)[0]

    def _point_in(self, s):
        st = self._state(s)
        return np.stack([st[1], st[2]], axis=-1)

    def _gamma_in(self, s):
        return self.profile(s)

    def _dgamma_in(self, s):
        return self.profile.d1(s)

    def _d2gamma_in(self, s):
        return self.profile.d2(s)


class Circle(BoundaryCurve):
    """Counterclockwise circle of radius R centered at the origin, Gamma(0) = (R, 0)."""

    family = "circle"
    topology = "closed"

    def __init__(self, R: float = 1.0):
        if R <= 0:
            raise GeometryError("radius must be positive")
        super().__init__((0.0, 2.0 * np.pi * R), {"R": R})
        self.R = float(R)

    def _point_in(self, s):
        th = np.asarray(s, dtype=float) / self.R
        return self.R * np.stack([np.cos(th), np.sin(th)], axis=-1)

    def _theta_in(self, s):
        return np.asarray(s, dtype=float) / self.R + 0.5 * np.pi

    def _gamma_in(self, s):
        return np.full_like(np.asarray(s, dtype=float), 1.0 / self.R)

    def _dgamma_in(self, s):
        return np.zeros_like(np.asarray(s, dtype=float))

    _d2gamma_in = _dgamma_in


class Parabola(BoundaryCurve):
    """``y = c x^2`` traversed towards +x; the convex region above lies to the left."""

    family = "parabola"

    def __init__(self, c: float = 0.5, window=(-100.0, 100.0)):
        if c <= 0:
            raise GeometryError("parabola coefficient must be positive")
        super().__init__(window, {"c": c})
        self.c = float(c)

    def _arc(self, x):
        c = self.c
        q = 2 * c * x
        return (q * np.sqrt(1 + q * q) + np.arcsinh(q)) / (4 * c)

    def _x_of_s(self, s):
        s = np.asarray(s, dtype=float)
        x = np.sign(s) * np.minimum(np.abs(s), np.sqrt(np.abs(s) / self.c))
        for _ in range(100):
            dx = (self._arc(x) - s) / np.sqrt(1 + 4 * self.c**2 * x**2)
            x = x - dx
            if np.all(np.abs(dx) <= 1e-15 * np.maximum(1.0, np.abs(x))):
                break
        return x

    def _point_in(self, s):
        x = self._x_of_s(s)
        return np.stack([x, self.c * x**2], axis=-1)

    def _theta_in(self, s):
        return np.arctan(2 * self.c * self._x_of_s(s))

    def _gamma_in(self, s):
        x = self._x_of_s(s)
        return 2 * self.c * (1 + 4 * self.c**2 * x**2) ** -1.5

    def _dgamma_in(self, s):
        c, x = self.c, self._x_of_s(s)
        return -24 * c**3 * x * (1 + 4 * c**2 * x**2) ** -3

    def _d2gamma_in(self, s):
        c, x = self.c, self._x_of_s(s)
        return -24 * c**3 * (1 - 20 * c**2 * x**2) * (1 + 4 * c**2 * x**2) ** -4.5


class GraphCurve(BoundaryCurve):
    """Graph ``y = h(x)`` traversed towards +x, domain above, arc-length parametrized."""

    family = "graph"

    def __init__(self, h, dh, d2h, window=(-20.0, 20.0), params=None):
        super().__init__(window, params)
        self.h, self.dh, self.d2h = h, dh, d2h
        lo, hi = self.window

        def rhs(s, y):
            return [1.0 / math.sqrt(1.0 + float(dh(y[0])) ** 2)]

        opts = dict(method="DOP853", rtol=1e-12, atol=1e-13, dense_output=True)
        self._fwd = solve_ivp(rhs, (0.0, hi), [0.0], **opts) if hi > 0 else None
        self._bwd = solve_ivp(rhs, (0.0, lo), [0.0], **opts) if lo < 0 else None

    def x_of_s(self, s):
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.empty(flat.size)
        ge = flat >= 0
        if ge.any():
            out[ge] = self._fwd.sol(flat[ge])[0] if self._fwd is not None else 0.0
        if (~ge).any():
            out[~ge] = self._bwd.sol(flat[~ge])[0]
        return out.reshape(s.shape)

    def _point_in(self, s):
        x = self.x_of_s(s)
        return np.stack([x, self.h(x)], axis=-1)

    def _theta_in(self, s):
        return np.arctan(self.dh(self.x_of_s(s)))

    def _gamma_in(self, s):
        x = self.x_of_s(s)
        return self.d2h(x) / (1 + self.dh(x) ** 2) ** 1.5


def gaussian_graph(height: float = 0.3, window=(-20.0, 20.0)) -> GraphCurve:
    """Graph bump ``y = height * exp(-x^2)``."""
    h = lambda x: height * np.exp(-np.asarray(x, dtype=float) ** 2)
    dh = lambda x: -2 * np.asarray(x, dtype=float) * h(x)
    d2h = lambda x: (4 * np.asarray(x, dtype=float) ** 2 - 2) * h(x)
    c = GraphCurve(h, dh, d2h, window, {"height": height})
    c.family = "graph_bump"
    return c


class ParallelCurve(BoundaryCurve):
    """Curve at normal distance d (to the left) from a base curve.

    Re-parametrized by its own arc length sigma, with sigma = 0 at base s = 0
    (or at the base window start if 0 lies outside).  Its curvature is
    gamma/(1 - d*gamma) evaluated at the corresponding base point.
    """

    family = "parallel"

    def __init__(self, base: BoundaryCurve, d: float):
        self.base, self.d = base, float(d)
        blo, bhi = base.window
        sgrid = np.linspace(blo, bhi, 4097)
        if np.any(self.d * base.curvature(sgrid) >= 1.0):
            raise SingularCoordinatesError("offset d*gamma >= 1 somewhere on the base curve")
        self.topology = base.topology
        anchor = 0.0 if blo <= 0.0 <= bhi else blo
        self._anchor = anchor

        def rhs(sig, y):
            return [1.0 / (1.0 - self.d * float(base.curvature(np.clip(y[0], blo, bhi))))]

        jac = lambda s: 1.0 - self.d * float(base.curvature(s))
        length_hi = quad(jac, anchor, bhi, limit=400)[0]
        length_lo = -quad(jac, blo, anchor, limit=400)[0]
        opts = dict(method="DOP853", rtol=1e-12, atol=1e-13, dense_output=True)
        self._fwd = solve_ivp(rhs, (0.0, length_hi), [anchor], **opts) if length_hi > 0 else None
        self._bwd = solve_ivp(rhs, (0.0, length_lo), [anchor], **opts) if length_lo < 0 else None
        super().__init__((length_lo, length_hi), {"d": d, "base": base.family})

    def base_parameter(self, sig):
        sig = np.asarray(sig, dtype=float)
        flat = sig.ravel()
        out = np.empty(flat.size)
        ge = flat >= 0
        if ge.any():
            out[ge] = self._fwd.sol(flat[ge])[0] if self._fwd is not None else self._anchor
        if (~ge).any():
            out[~ge] = self._bwd.sol(flat[~ge])[0]
        return np.clip(out.reshape(sig.shape), *self.base.window)

    def _point_in(self, sig):
        s = self.base_parameter(sig)
        return self.base.point(s) + self.d * self.base.normal(s)

    def _theta_in(self, sig):
        return self.base.tangent_angle(self.base_parameter(sig))

    def _gamma_in(self, sig):
        g = self.base.curvature(self.base_parameter(sig))
        return g / (1.0 - self.d * g)


class ReversedCurve(BoundaryCurve):
    """Same point set traversed backwards; curvature changes sign."""

    def __init__(self, inner: BoundaryCurve):
        self.inner = inner
        self.family = inner.family
        self.topology = inner.topology
        lo, hi = inner.window
        super().__init__((-hi, -lo), dict(inner.params, reversed=True))

    def _point_in(self, s):
        return self.inner._point_in(-np.asarray(s, dtype=float))

    def _theta_in(self, s):
        return self.inner._theta_in(-np.asarray(s, dtype=float)) + np.pi

    def _gamma_in(self, s):
        return -self.inner._gamma_in(-np.asarray(s, dtype=float))

    def _dgamma_in(self, s):
        return self.inner._dgamma_in(-np.asarray(s, dtype=float))

    def _d2gamma_in(self, s):
        return -self.inner._d2gamma_in(-np.asarray(s, dtype=float))

    def reversed(self):
        return self.inner


# ---------------------------------------------------------------------------
# constructors


def straight_line(window=(-20.0, 20.0)) -> ProfileCurve:
    return ProfileCurve(zero_profile(), window, s0=0.0, theta0=0.0, family="line")


def curve_from_curvature(profile, s0: float = 0.0, window=(-20.0, 20.0), theta0=None,
                         topology: str = "line") -> ProfileCurve:
    """Reconstruct the curve with the given curvature, anchored at ``s0``.

    ``profile`` is a :class:`CurvatureProfile` or a plain vectorized callable.
    """
    if not isinstance(profile, CurvatureProfile):
        profile = CurvatureProfile("custom", profile)
    return ProfileCurve(profile, window, s0=s0, theta0=theta0, topology=topology)


def line_bump(amplitude: float = 1.0, separation: float = 8.0, window=(-20.0, 28.0)) -> ProfileCurve:
    prof = line_bump_profile(amplitude, separation)
    return ProfileCurve(prof, window, s0=0.0, family="line_bump",
                        params={"amplitude": amplitude, "separation": separation})


def wedge_smoothed(alpha: float, fillet_radius: float = 1.0, window=(-20.0, 20.0)) -> ProfileCurve:
    """Smoothed wedge with asymptote directions (cos a, -sin a) and (cos a, sin a).

    The domain above the V is convex-like for alpha in (0, pi/2); its opening
    angle is ``pi - 2*alpha`` and the total turning equals ``2*alpha``.
    """
    if not -0.5 * np.pi <= alpha < 0.5 * np.pi:
        raise GeometryError("alpha must lie in [-pi/2, pi/2)")
    prof = wedge_profile(alpha, fillet_radius)
    return ProfileCurve(prof, window, s0=0.0, theta0=0.0, family="wedge_smoothed",
                        params={"alpha": alpha, "fillet_radius": fillet_radius})


def curve_from_json(obj: dict) -> BoundaryCurve:
    """Build a curve from ``{"family": ..., parameters...}``."""
    obj = dict(obj)
    fam = obj.pop("family", None)
    explicit_window = "window" in obj
    window = tuple(obj.pop("window", (-20.0, 20.0)))
    allowed = {
        "line": set(),
        "line_bump": {"amplitude", "separation"},
        "wedge_smoothed": {"alpha", "fillet_radius"},
        "parabola": {"c"},
        "circle": {"R"},
        "graph_bump": {"height"},
        "from_curvature": {"profile", "params", "s0"},
        "parallel": {"base", "d"},
    }
    if fam not in allowed:
        raise GeometryError(f"unknown curve family {fam!r}")
    unknown = set(obj) - allowed[fam]
    if unknown:
        raise GeometryError(f"unknown keys for {fam}: {sorted(unknown)}")
    if fam == "line":
        return straight_line(window)
    if fam == "line_bump":
        if not explicit_window:
            window = (-20.0, 28.0)
        return line_bump(obj.get("amplitude", 1.0), obj.get("separation", 8.0), window)
    if fam == "wedge_smoothed":
        return wedge_smoothed(obj["alpha"], obj.get("fillet_radius", 1.0), window)
    if fam == "parabola":
        return Parabola(obj.get("c", 0.5), window)
    if fam == "circle":
        return Circle(obj.get("R", 1.0))
    if fam == "graph_bump":
        return gaussian_graph(obj.get("height", 0.3), window)
    if fam == "from_curvature":
        pid = obj["profile"]
        if pid not in PROFILES:
            raise GeometryError(f"unknown curvature profile {pid!r}")
        prof = PROFILES[pid](**obj.get("params", {}))
        return curve_from_curvature(prof, obj.get("s0", 0.0), window)
    base = curve_from_json(obj["base"])
    return ParallelCurve(base, obj["d"])


# ---------------------------------------------------------------------------
# geometric operations


def curvature(curve: BoundaryCurve, s):
    """Signed curvature from the tangent and second-derivative evaluators."""
    s = curve._check(s)
    t = curve.tangent(s)
    dd = curve.second(s)
    return t[..., 0] * dd[..., 1] - t[..., 1] * dd[..., 0]


def tube_map(curve: BoundaryCurve, s, u, side: str = "interior"):
    """Point at normal distance ``u`` from ``Gamma(s)`` on the requested side."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("u must be non-negative")
    sign = {"interior": 1.0, "exterior": -1.0}[side]
    return curve.point(s) + sign * u[..., None] * curve.normal(s)


def parallel_curvature(gamma, d):
    """Curvature ``gamma/(1 - d*gamma)`` of the curve offset by d into the domain."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(d * gamma >= 1.0):
        raise SingularCoordinatesError("d*gamma >= 1: offset curve is singular")
    out = gamma / (1.0 - d * gamma)
    return float(out) if out.ndim == 0 else out


@dataclass
class CurvatureStats:
    gamma_star: float
    gamma_lowstar: float
    gamma_plus: float
    gamma1_plus: float
    gamma2_plus: float
    s_star: float
    s_lowstar: float
    decay_exponent_fit: float
    flat: bool = False


def _refine_extremum(f, s, vals, i, sign, closed, period):
    # golden-section search around the best sample, maximizing sign*f
    n = len(s)
    if closed:
        left, right = s[i] - (s[1] - s[0]), s[i] + (s[1] - s[0])
    else:
        if i == 0 or i == n - 1:
            return s[i], vals[i]
        left, right = s[i - 1], s[i + 1]
    g = lambda x: -sign * float(f(np.array(x)))
    try:
        res = minimize_scalar(g, bracket=(left, s[i], right), method="golden",
                              options={"xtol": 1e-10})
    except ValueError:
        return s[i], vals[i]
    x = float(res.x)
    if not left <= x <= right or -res.fun < sign * vals[i]:
        return s[i], vals[i]
    if closed:
        x = s[0] + (x - s[0]) % period
    return x, -sign * res.fun


def curvature_stats(curve: BoundaryCurve, window=None, n_samples: int = 4096) -> CurvatureStats:
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")
    lo, hi = curve.window if window is None else window
    closed = curve.topology == "closed"
    if closed:
        s = np.linspace(lo, hi, n_samples, endpoint=False)
    else:
        curve._check(np.array([lo, hi]))
        s = np.linspace(lo, hi, n_samples)
    g = curve.curvature(s)
    g1 = np.abs(curve.dcurvature(s))
    g2 = np.abs(curve.d2curvature(s))
    if np.all(np.abs(g) < 1e-300):
        return CurvatureStats(0.0, 0.0, 0.0, float(g1.max()), float(g2.max()), 0.0, 0.0,
                              float("nan"), flat=True)
    period = hi - lo
    if np.ptp(g) < 1e-14 * max(1.0, np.abs(g).max()):
        s_star, g_star = s[0], float(g.max())
        s_low, g_low = s[0], float(g.min())
    else:
        s_star, g_star = _refine_extremum(curve.curvature, s, g, int(np.argmax(g)), 1.0, closed, period)
        s_low, g_low = _refine_extremum(curve.curvature, s, g, int(np.argmin(g)), -1.0, closed, period)
    fit = float("nan")
    if not closed:
        c = 0.5 * (lo + hi)
        outer = np.abs(s - c) >= 0.25 * (hi - lo)
        ok = outer & (np.abs(g) > 1e-300)
        if ok.sum() >= 3:
            x = np.log(np.sqrt(1 + s[ok] ** 2))
            y = np.log(np.abs(g[ok]))
            if np.ptp(x) > 0:
                fit = float(np.polyfit(x, y, 1)[0])
    return CurvatureStats(
        gamma_star=float(g_star),
        gamma_lowstar=float(g_low),
        gamma_plus=float(max(abs(g_star), abs(g_low))),
        gamma1_plus=float(g1.max()),
        gamma2_plus=float(g2.max()),
        s_star=float(s_star),
        s_lowstar=float(s_low),
        decay_exponent_fit=fit,
    )


@dataclass
class AssumptionReport:
    injective: bool
    local_ok: bool
    separation_ok: bool
    crossing_free: bool
    a1_estimate: float
    decay_ok: bool
    stats: CurvatureStats
    messages: list = field(default_factory=list)


def _arc_gap(s, closed, period):
    d = np.abs(s[:, None] - s[None, :])
    if closed:
        d = np.minimum(d, period - d)
    return d


def _segments_cross(P):
    # proper crossings between non-adjacent polyline segments
    A, B = P[:-1], P[1:]
    d = B - A

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    Ai, Bi = A[:, None], B[:, None]
    Aj, Bj = A[None, :], B[None, :]
    o1 = orient(Ai, Bi, Aj)
    o2 = orient(Ai, Bi, Bj)
    o3 = orient(Aj, Bj, Ai)
    o4 = orient(Aj, Bj, Bi)
    cross = (o1 * o2 < 0) & (o3 * o4 < 0)
    n = len(A)
    idx = np.arange(n)
    near = np.abs(idx[:, None] - idx[None, :]) <= 1
    cross &= ~near
    return bool(cross.any()), d


def check_assumptions(curve: BoundaryCurve, a: float, n_samples: int = 800,
                      side: str = "interior") -> AssumptionReport:
    """Sampled check of the tubular-neighborhood and decay hypotheses.

    Injectivity requires (1) ``a*gamma_plus < 1``, (2) boundary points more
    than ``3a`` apart in arc length to be at least ``2a`` apart in the plane
    (disjoint a-neighbourhoods), and (3) no self-crossing of the curve at
    normal distance ``a``.  This is a sampling test, not a proof.
    """
    if a <= 0:
        raise DomainError("a must be positive")
    stats = curvature_stats(curve, n_samples=max(4 * n_samples, 1024))
    closed = curve.topology == "closed"
    lo, hi = curve.window
    s = np.linspace(lo, hi, n_samples, endpoint=not closed)
    period = hi - lo
    msgs = []
    local_ok = a * stats.gamma_plus < 1.0
    if not local_ok:
        msgs.append(f"a*gamma_plus = {a * stats.gamma_plus:.6g} >= 1")
    P = curve.point(s)
    dist = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    gap = _arc_gap(s, closed, period)

    def sep_ok(aa):
        far = gap > 3 * aa
        return (not far.any()) or dist[far].min() >= 2 * aa

    separation_ok = sep_ok(a)
    if not separation_ok:
        msgs.append("points farther than 3a in arc length are closer than 2a")
    sign = 1.0 if side == "interior" else -1.0
    Q = P + sign * a * curve.normal(s)
    if closed:
        Q = np.vstack([Q, Q[:1]])
    crossing, _ = _segments_cross(Q)
    if closed:
        # first and last segments are adjacent on a loop
        pass
    crossing_free = not crossing
    if crossing:
        msgs.append("tube boundary at distance a crosses itself")
    # largest a passing the sampled criteria (monotone in a up to sampling)
    hi_a = 1.0 / stats.gamma_plus if stats.gamma_plus > 0 else (hi - lo)
    lo_a = 0.0
    for _ in range(60):
        mid = 0.5 * (lo_a + hi_a)
        if sep_ok(mid):
            lo_a = mid
        else:
            hi_a = mid
    a1 = lo_a
    if closed:
        decay_ok = True
    elif stats.flat:
        decay_ok = True
    else:
        tail = np.abs(s - 0.5 * (lo + hi)) >= 0.25 * (hi - lo)
        tail_vals = np.abs(curve.curvature(s[tail]))
        fit = stats.decay_exponent_fit
        decay_ok = bool(np.all(tail_vals < 1e-12) or (np.isfinite(fit) and fit < -1.0))
        if not decay_ok:
            msgs.append(f"curvature decay exponent {fit:.3g} is not below -1")
    injective = bool(local_ok and separation_ok and crossing_free)
    return AssumptionReport(injective, bool(local_ok), bool(separation_ok), crossing_free,
                            float(a1), bool(decay_ok), stats, msgs)

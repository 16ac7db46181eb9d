"""Explicit trial functions and the quadratic-form values they produce.

``trial_rayleigh_bound`` evaluates the strip form on a separated trial
function ``chi_j(s) T(u)`` concentrated near the curvature maximum; by
min-max the quotient bounds the ``j``-th eigenvalue from above.

``deformation_functional`` evaluates ``q[f] + beta^2 ||f||^2`` on the
family ``f_n(x, y) = psi(x/n) exp(-delta y)`` above a graph-like boundary;
a negative value proves a bound state below ``-beta^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .curve_geometry import BoundaryCurve
from .errors import GeometryError
from .fem import gauss_unit
from .strip2d import StripModel, _potential, check_model

# ---------------------------------------------------------------------------
# smooth building blocks


def chi(x):
    """Bump ``exp(-1/(x(1-x)))`` on (0, 1), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    xm = x[m]
    out[m] = np.exp(-1.0 / (xm * (1.0 - xm)))
    return out


def chi_prime(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = (x > 0) & (x < 1)
    xm = x[m]
    p = xm * (1.0 - xm)
    out[m] = np.exp(-1.0 / p) * (1.0 - 2.0 * xm) / (p * p)
    return out


def _step(t):
    # C-infinity step: 0 for t <= 0, 1 for t >= 1
    t = np.asarray(t, dtype=float)
    f = lambda z: np.where(z > 0, np.exp(-1.0 / np.where(z > 0, z, 1.0)), 0.0)
    a, b = f(t), f(1.0 - t)
    return a / (a + b)


def _step_prime(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = (t > 0) & (t < 1)
    tm = t[m]
    a, b = np.exp(-1.0 / tm), np.exp(-1.0 / (1.0 - tm))
    da, db = a / tm ** 2, -b / (1.0 - tm) ** 2
    out[m] = (da * (a + b) - a * (da + db)) / (a + b) ** 2
    return out


def plateau(x):
    """Smooth plateau: 1 for ``|x| <= 1``, 0 for ``|x| >= 2``."""
    return _step(2.0 - np.abs(np.asarray(x, dtype=float)))


def plateau_prime(x):
    x = np.asarray(x, dtype=float)
    return -np.sign(x) * _step_prime(2.0 - np.abs(x))


def _composite_gl(lo, hi, panels, order=10):
    gx, gw = gauss_unit(order)
    edges = np.linspace(lo, hi, panels + 1)
    h = np.diff(edges)
    x = (edges[:-1, None] + h[:, None] * gx[None, :]).ravel()
    w = (h[:, None] * gw[None, :]).ravel()
    return x, w


# ---------------------------------------------------------------------------
# Rayleigh quotient of separated trial functions


@dataclass(frozen=True)
class TrialFunctionSpec:
    j: int = 1
    eps: float | None = None      # default beta^(-1/3)
    alpha: float | None = None    # default beta + g^*/2
    s_star: float | None = None   # default: location of the maximum of g

    def __post_init__(self):
        if self.j < 1:
            raise ValueError("j must be >= 1")

    def support(self, eps, s_star):
        lo = s_star - (2 * self.j - 1) * eps
        return lo, lo + 2.0 * eps

    def chi_j(self, s, eps, s_star):
        return chi((np.asarray(s) - s_star + (2 * self.j - 1) * eps) / (2.0 * eps))

    def chi_j_prime(self, s, eps, s_star):
        return chi_prime((np.asarray(s) - s_star + (2 * self.j - 1) * eps) / (2.0 * eps)) / (2.0 * eps)


@dataclass
class TrialResult:
    value: float
    terms: dict
    spec: TrialFunctionSpec
    panels: tuple[int, int]


def resolve_trial(model: StripModel, spec: TrialFunctionSpec) -> TrialFunctionSpec:
    s = model.samples()
    g = model.g(s)
    i = int(np.argmax(g))
    s_star = spec.s_star if spec.s_star is not None else float(s[i])
    eps = spec.eps if spec.eps is not None else model.beta ** (-1.0 / 3.0)
    alpha = spec.alpha if spec.alpha is not None else model.beta + 0.5 * float(g[i])
    return replace(spec, eps=eps, alpha=alpha, s_star=s_star)


def _trial_terms(model, spec, ps, pu):
    a = model.width
    eps, s_star, alpha = spec.eps, spec.s_star, spec.alpha
    slo, shi = spec.support(eps, s_star)
    s, ws = _composite_gl(slo, shi, ps)
    u, wu = _composite_gl(0.0, a, pu)
    c = spec.chi_j(s, eps, s_star)
    dc = spec.chi_j_prime(s, eps, s_star)
    T = np.exp(-alpha * u) - np.exp(alpha * (u - 2.0 * a))
    dT = -alpha * np.exp(-alpha * u) - alpha * np.exp(alpha * (u - 2.0 * a))
    g, dg, d2g = (f(s)[:, None] for f in (model.g, model.dg, model.d2g))
    J = 1.0 - u[None, :] * g
    V = _potential(g, dg, d2g, u[None, :])
    W = ws[:, None] * wu[None, :]
    T0 = 1.0 - math.exp(-2.0 * alpha * a)
    return {
        "kinetic_s": float(np.sum(W * (dc[:, None] * T[None, :]) ** 2 / J ** 2)),
        "kinetic_u": float(np.sum(W * (c[:, None] * dT[None, :]) ** 2)),
        "potential": float(np.sum(W * V * (c[:, None] * T[None, :]) ** 2)),
        "boundary": float(-np.sum(ws * (0.5 * g[:, 0] + model.beta) * c ** 2) * T0 ** 2),
        "norm": float(np.sum(W * (c[:, None] * T[None, :]) ** 2)),
    }


def trial_rayleigh_bound(model: StripModel, spec: TrialFunctionSpec | None = None,
                         rtol: float = 1e-10, max_panels: int = 1024) -> TrialResult:
    """Form-to-norm ratio of ``chi_j(s) (e^{-alpha u} - e^{alpha (u - 2a)})``.

    The transverse factor vanishes at ``u = a``, so the far boundary term does
    not enter.  Quadrature panels are doubled until the ratio settles.
    """
    check_model(model)
    spec = resolve_trial(model, spec or TrialFunctionSpec())
    lo, hi = spec.support(spec.eps, spec.s_star)
    if not model.closed:
        wlo, whi = model.window
        if lo < wlo or hi > whi:
            raise GeometryError("trial support leaves the truncation window")
    ps, pu = 8, 8
    prev = None
    while True:
        terms = _trial_terms(model, spec, ps, pu)
        val = (terms["kinetic_s"] + terms["kinetic_u"] + terms["potential"] + terms["boundary"]) / terms["norm"]
        if prev is not None and abs(val - prev) <= rtol * max(1.0, abs(val)):
            return TrialResult(val, terms, spec, (ps, pu))
        if ps >= max_panels:
            return TrialResult(val, terms, spec, (ps, pu))
        prev = val
        ps, pu = 2 * ps, 2 * pu


def trial_overlap(model: StripModel, spec_i: TrialFunctionSpec, spec_j: TrialFunctionSpec,
                  panels: int = 256) -> float:
    """``<phi_i, phi_j>`` over the union of both supports."""
    si, sj = resolve_trial(model, spec_i), resolve_trial(model, spec_j)
    lo = min(si.support(si.eps, si.s_star)[0], sj.support(sj.eps, sj.s_star)[0])
    hi = max(si.support(si.eps, si.s_star)[1], sj.support(sj.eps, sj.s_star)[1])
    s, ws = _composite_gl(lo, hi, panels)
    u, wu = _composite_gl(0.0, model.width, 64)
    a = model.width
    Ti = np.exp(-si.alpha * u) - np.exp(si.alpha * (u - 2 * a))
    Tj = np.exp(-sj.alpha * u) - np.exp(sj.alpha * (u - 2 * a))
    cs = np.sum(ws * si.chi_j(s, si.eps, si.s_star) * sj.chi_j(s, sj.eps, sj.s_star))
    return float(cs * np.sum(wu * Ti * Tj))


def chi_eps_norm_sq(eps: float, panels: int = 64) -> float:
    """``int chi(x/(2 eps))^2 dx`` over its support, by quadrature."""
    x, w = _composite_gl(0.0, 2.0 * eps, panels)
    return float(np.sum(w * chi(x / (2.0 * eps)) ** 2))


def chi_norm_sq(panels: int = 64) -> float:
    x, w = _composite_gl(0.0, 1.0, panels)
    return float(np.sum(w * chi(x) ** 2))


# ---------------------------------------------------------------------------
# existence functional above graph-like boundaries


@dataclass
class DeformationResult:
    S_n: float | None
    limit: float
    terms: dict = field(default_factory=dict)


def _x_to_s(curve: BoundaryCurve, x):
    # arc length at which the (extended) curve reaches abscissa x
    lo, hi = curve.window
    p_lo, p_hi = curve.point(np.array([lo, hi]))
    t_lo, t_hi = curve.tangent(np.array([lo, hi]))
    if x <= p_lo[0]:
        return lo - (p_lo[0] - x) / t_lo[0]
    if x >= p_hi[0]:
        return hi + (x - p_hi[0]) / t_hi[0]
    return brentq(lambda s: curve.point(np.array(s))[0] - x, lo, hi, xtol=1e-14)


def _is_graph(curve: BoundaryCurve, n_samples=4001) -> bool:
    lo, hi = curve.window
    s = np.linspace(lo, hi, n_samples)
    return bool(np.min(curve.tangent(s)[:, 0]) > 0.0)


def deformation_limit(curve: BoundaryCurve, beta: float, decay_rate: float | None = None,
                      panels_per_unit: int = 4, rtol: float = 1e-12) -> float:
    """``int ((beta^2 + delta^2)/(2 delta) G1' - beta) exp(-2 delta G2) ds``.

    The window is integrated by quadrature; the straight rays beyond it are
    integrated in closed form.
    """
    delta = beta if decay_rate is None else decay_rate
    if not (beta > 0 and delta > 0):
        raise ValueError("beta and the decay rate must be positive")
    coef = (beta * beta + delta * delta) / (2.0 * delta)
    lo, hi = curve.window

    def integrand(s):
        p = curve.point(s)
        t = curve.tangent(s)
        return (coef * t[:, 0] - beta) * np.exp(-2.0 * delta * p[:, 1])

    panels = max(8, int(panels_per_unit * (hi - lo)))
    prev = None
    while True:
        s, w = _composite_gl(lo, hi, panels)
        body = float(np.sum(w * integrand(s)))
        if prev is not None and abs(body - prev) <= rtol * max(1.0, abs(body)):
            break
        if panels > 1 << 16:
            break
        prev, panels = body, 2 * panels
    tails = 0.0
    ends = curve.point(np.array([lo, hi]))
    tans = curve.tangent(np.array([lo, hi]))
    for (p, t, direction) in ((ends[0], tans[0], -1.0), (ends[1], tans[1], 1.0)):
        k = coef * t[0] - beta
        if abs(k) <= 1e-15 * max(coef, beta):
            continue
        rate = 2.0 * delta * direction * t[1]  # y grows like direction * t_y * tau
        if rate <= 0:
            return -math.inf if k < 0 else math.inf
        tails += k * math.exp(-2.0 * delta * p[1]) / rate
    return body + tails


def deformation_functional(curve: BoundaryCurve, beta: float, n: float,
                           decay_rate: float | None = None, rtol: float = 1e-12) -> DeformationResult:
    """``q[f_n] + beta^2 ||f_n||^2`` for ``f_n = psi(x/n) exp(-delta y)`` above the curve.

    The ``y``-integration is done in closed form, leaving three boundary
    integrals in arc length: gradient of ``psi``, bulk mass and Robin term.
    Requires the boundary to be a graph over the ``x``-axis.
    """
    delta = beta if decay_rate is None else decay_rate
    if n <= 0:
        raise ValueError("n must be positive")
    limit = deformation_limit(curve, beta, delta)
    if not _is_graph(curve):
        raise GeometryError("the boundary is not a graph over the x-axis")
    s_lo, s_hi = _x_to_s(curve, -2.0 * n), _x_to_s(curve, 2.0 * n)

    def terms_on(panels):
        s, w = _composite_gl(s_lo, s_hi, panels)
        p = curve.point(s)
        x1 = curve.tangent(s)[:, 0]
        e = np.exp(-2.0 * delta * p[:, 1])
        psi = plateau(p[:, 0] / n)
        dpsi = plateau_prime(p[:, 0] / n) / n
        return {
            "gradient": float(np.sum(w * dpsi ** 2 * e * x1)) / (2.0 * delta),
            "bulk": (delta * delta + beta * beta) / (2.0 * delta) * float(np.sum(w * psi ** 2 * e * x1)),
            "boundary": -beta * float(np.sum(w * psi ** 2 * e)),
        }

    panels = max(16, int(4 * (s_hi - s_lo)))
    prev = None
    while True:
        t = terms_on(panels)
        val = t["gradient"] + t["bulk"] + t["boundary"]
        if prev is not None and abs(val - prev) <= rtol * max(1.0, abs(t["bulk"])):
            break
        if panels > 1 << 16:
            break
        prev, panels = val, 2 * panels
    return DeformationResult(S_n=val, limit=limit, terms=t)


def wedge_deformation_limit(alpha: float, beta: float, decay_rate: float | None = None) -> float:
    """Closed form of the limit integral for the sharp wedge ``y = |x| tan(alpha)``."""
    if not 0.0 < alpha < 0.5 * math.pi:
        raise ValueError("alpha must lie in (0, pi/2)")
    delta = beta if decay_rate is None else decay_rate
    coef = (beta * beta + delta * delta) / (2.0 * delta)
    return (coef * math.cos(alpha) - beta) / (delta * math.sin(alpha))

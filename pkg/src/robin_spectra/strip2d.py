"""Robin Laplacians in straightened boundary coordinates.

Near the boundary a domain is parametrized by ``(s, u)`` with ``s`` the arc
length and ``u`` the normal distance.  After the unitary substitution
``phi = (1 - u g)^{1/2} f`` the Robin form becomes, on ``0 < u < a``,

    int (1 - u g)^{-2} |phi_s|^2 + |phi_u|^2 + V |phi|^2
        - int (g/2 + beta) |phi(s, 0)|^2  [+ int g/(2(1 - a g)) |phi(s, a)|^2]

with plain L^2 mass.  Here ``g = gamma`` for the domain on the left of the
curve and ``g = -gamma`` for the exterior of an obstacle.  Imposing a
Dirichlet condition at ``u = a`` raises the spectrum, leaving the far end
free (with the bracketed term) lowers it, which brackets the eigenvalues
below the essential threshold.

The waveguide variant covers the whole strip ``0 < u < d`` between the
reference wall and its parallel curve, with Robin terms on both walls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .comparison1d import Comparison1DProblem, mu_eigenvalues
from .curve_geometry import BoundaryCurve
from .eigensolve import Spectrum, SymPencil, lowest_eigenpairs
from .errors import GeometryError, SingularCoordinatesError
from .fem import assemble_1d, assemble_tensor, decay_graded_nodes
from .transverse1d import strip_even_mode, t_dirichlet_eigenvalue, t_neumann_eigenvalue

SIDES = ("interior", "exterior", "waveguide")


def default_width(beta: float) -> float:
    """Strip width ``3 log(beta) / beta``."""
    if beta <= 1.0:
        raise ValueError("the default width needs beta > 1; pass a explicitly")
    return 3.0 * math.log(beta) / beta


@dataclass(frozen=True)
class StripModel:
    curve: BoundaryCurve
    beta: float
    side: str = "interior"
    a: float | None = None  # strip width; the waveguide width d for side="waveguide"
    far_bc: str = "dirichlet"
    s_window: tuple[float, float] | None = None
    n_s: int = 512
    n_u: int = 128
    n_samples: int = 4096

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        if self.far_bc not in ("dirichlet", "neumann"):
            raise ValueError("far_bc must be 'dirichlet' or 'neumann'")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.side == "waveguide" and self.a is None:
            raise ValueError("the waveguide width must be given as a")
        if self.n_s < 8 or self.n_u < 8:
            raise ValueError("mesh too coarse: need n_s, n_u >= 8")

    @property
    def width(self) -> float:
        return float(self.a) if self.a is not None else default_width(self.beta)

    @property
    def closed(self) -> bool:
        return self.curve.topology == "closed"

    @property
    def window(self) -> tuple[float, float]:
        if self.closed:
            return self.curve.window
        return self.s_window if self.s_window is not None else self.curve.window

    @property
    def sign(self) -> float:
        return -1.0 if self.side == "exterior" else 1.0

    def g(self, s):
        return self.sign * self.curve.curvature(s)

    def dg(self, s):
        return self.sign * self.curve.dcurvature(s)

    def d2g(self, s):
        return self.sign * self.curve.d2curvature(s)

    def samples(self):
        lo, hi = self.window
        return np.linspace(lo, hi, self.n_samples, endpoint=not self.closed)

    def g_range(self):
        g = self.g(self.samples())
        return float(g.min()), float(g.max())

    def threshold(self) -> float:
        """Bottom of the essential spectrum of the full problem."""
        if self.side == "exterior":
            return 0.0
        if self.side == "waveguide":
            return strip_even_mode(self.width, self.beta)
        return -self.beta ** 2

    def with_mesh(self, n_s, n_u):
        return replace(self, n_s=int(n_s), n_u=int(n_u))


def _jacobian_guard(J):
    if np.any(J <= 0.0):
        raise SingularCoordinatesError("1 - u*gamma vanishes inside the strip")


def _potential(g, dg, d2g, u):
    J = 1.0 - u * g
    _jacobian_guard(J)
    return -g * g / (4.0 * J ** 2) - u * d2g / (2.0 * J ** 3) - 1.25 * u * u * dg * dg / J ** 4


def effective_potential(curve: BoundaryCurve, s, u, side: str = "interior"):
    """Potential created by straightening the strip along ``curve``."""
    sign = -1.0 if side == "exterior" else 1.0
    g = sign * curve.curvature(s)
    dg = sign * curve.dcurvature(s)
    d2g = sign * curve.d2curvature(s)
    return _potential(g, dg, d2g, np.asarray(u, dtype=float))


def check_model(model: StripModel) -> None:
    """Raise unless the straightening map is regular on the whole strip."""
    a = model.width
    gmin, gmax = model.g_range()
    if model.side == "waveguide":
        # both walls: d*gamma^* < 1 and d*gamma^*/(1 - d*gamma^*) < 1
        if a * gmax >= 1.0 or a * gmax / (1.0 - a * gmax) >= 1.0:
            raise SingularCoordinatesError(
                f"waveguide too wide for its curvature: d*gamma^* = {a * gmax:.6g}")
        return
    if a * max(abs(gmin), abs(gmax)) >= 1.0:
        raise SingularCoordinatesError(f"a*gamma_plus = {a * max(abs(gmin), abs(gmax)):.6g} >= 1")


def _u_nodes(model: StripModel, n_u: int):
    gmin, gmax = model.g_range()
    kappa = model.beta + 0.5 * max(abs(gmin), abs(gmax))
    return decay_graded_nodes(model.width, n_u, 2.0 * kappa / 3.0,
                              two_sided=model.side == "waveguide")


def _s_nodes(model: StripModel, n_s: int):
    lo, hi = model.window
    return np.linspace(lo, hi, n_s + 1)


def _fiber_floor(model: StripModel, u_nodes, coefficients, edge0, edge1, dirichlet_far,
                 n_fibers: int = 48) -> float:
    """Shift below the discrete spectrum for shift-invert.

    Dropping the non-negative ``s``-derivative term leaves a family of 1D
    problems in ``u``; the smallest of their ground states over sampled
    ``s`` (minus a safety margin) bounds the strip spectrum from below.
    """
    lo, hi = model.window
    s = np.linspace(lo, hi, n_fibers)
    s = np.append(s, model.samples()[np.argmax(np.abs(model.g(model.samples())))])
    floor = np.inf
    for si in s:
        def coef(attr):
            def f(u):
                c = coefficients(np.full((1, 1, 1, 1), si), np.ravel(u).reshape(1, 1, 1, -1))
                return np.broadcast_to(c.get(attr, 1.0 if attr in ("cu", "w") else 0.0),
                                       (1, 1, 1, np.size(u))).reshape(np.shape(u))
            return f
        pencil, _ = assemble_1d(
            u_nodes, kinetic=coef("cu"), potential=coef("V"), weight=coef("w"),
            dirichlet=(False, dirichlet_far),
            point_terms=(float(edge0(si)), 0.0 if edge1 is None else float(edge1(si))))
        floor = min(floor, float(lowest_eigenpairs(pencil, 1, 1e-6, return_vectors=False).values[0]))
    return floor - 0.05 * abs(floor) - 1.0


def assemble_B(model: StripModel, n_s: int | None = None, n_u: int | None = None) -> SymPencil:
    """Bilinear finite elements for the straightened strip form of ``model``."""
    check_model(model)
    n_s = n_s or model.n_s
    n_u = n_u or model.n_u
    a, beta = model.width, model.beta
    s_nodes = _s_nodes(model, n_s)
    u_nodes = _u_nodes(model, n_u)

    def coefficients(S, U):
        Sc = S[:, :1, :, :1]
        g, dg, d2g = model.g(Sc), model.dg(Sc), model.d2g(Sc)
        J = 1.0 - U * g
        _jacobian_guard(J)
        return {"cs": J ** -2, "V": _potential(g, dg, d2g, U)}

    edge0 = lambda s: -(0.5 * model.g(s) + beta)
    edge1 = None
    dirichlet_far = False
    if model.side == "waveguide":
        edge1 = lambda s: 0.5 * model.g(s) / (1.0 - a * model.g(s)) - beta
    elif model.far_bc == "neumann":
        edge1 = lambda s: 0.5 * model.g(s) / (1.0 - a * model.g(s))
    else:
        dirichlet_far = True
    pencil, _ = assemble_tensor(
        s_nodes, u_nodes, coefficients,
        periodic_s=model.closed,
        dirichlet_s=(True, True),
        dirichlet_u=(False, dirichlet_far),
        edge_u0=edge0, edge_u1=edge1,
        metadata=f"strip side={model.side} far={model.far_bc} beta={beta} a={a} mesh={n_s}x{n_u}",
    )
    pencil.sigma_hint = _fiber_floor(model, u_nodes, coefficients, edge0, edge1, dirichlet_far)
    return pencil


def assemble_weighted(model: StripModel, n_s: int | None = None, n_u: int | None = None) -> SymPencil:
    """Unsubstituted form with weight ``1 - u gamma`` and a free far end.

    ``int (1-ug)^{-1}|f_s|^2 + (1-ug)|f_u|^2 - beta int |f(s,0)|^2`` over the
    mass ``int |f|^2 (1-ug)``: the Robin form restricted to the tube with a
    Neumann cut, hence a lower bound.
    """
    check_model(model)
    n_s = n_s or model.n_s
    n_u = n_u or model.n_u

    def coefficients(S, U):
        J = 1.0 - U * model.g(S[:, :1, :, :1])
        _jacobian_guard(J)
        return {"cs": 1.0 / J, "cu": J, "w": J}

    u_nodes = _u_nodes(model, n_u)
    edge0 = lambda s: -model.beta + 0.0 * s
    pencil, _ = assemble_tensor(
        _s_nodes(model, n_s), u_nodes, coefficients,
        periodic_s=model.closed, dirichlet_s=(True, True), edge_u0=edge0,
        metadata=f"weighted strip beta={model.beta} a={model.width} mesh={n_s}x{n_u}",
    )
    pencil.sigma_hint = _fiber_floor(model, u_nodes, coefficients, edge0, None, False)
    return pencil


def strip_eigenvalues(model: StripModel, k: int = 1, tol: float = 1e-8, *, seed: int = 0,
                      **mesh) -> Spectrum:
    return lowest_eigenpairs(assemble_B(model, **mesh), k, tol, seed=seed, return_vectors=False)


@dataclass
class Enclosure:
    lower: np.ndarray
    upper: np.ndarray
    lower_tol: np.ndarray
    upper_tol: np.ndarray
    threshold: float
    discrete_flags: np.ndarray
    a: float
    mesh: tuple[int, int]
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def contains(self, value, j: int = 0) -> bool:
        return self.lower[j] - self.lower_tol[j] <= value <= self.upper[j] + self.upper_tol[j]


def _with_mesh_tol(model, k, tol, mesh_check, seed):
    fine = strip_eigenvalues(model, k, tol, seed=seed)
    if not mesh_check:
        return fine, np.zeros(k)
    coarse = strip_eigenvalues(model, k, tol, seed=seed,
                               n_s=max(8, model.n_s // 2), n_u=max(8, model.n_u // 2))
    # second-order scheme: the remaining error is about a third of the last change
    return fine, np.abs(fine.values - coarse.values) / 3.0


def bracket_eigenvalues(model: StripModel, k: int = 1, tol: float = 1e-8, *,
                        mesh_check: bool = True, margin: float = 0.0, seed: int = 0) -> Enclosure:
    """Neumann-cut (lower) and Dirichlet-cut (upper) eigenvalues of the strip.

    ``*_tol`` are Richardson estimates of the discretization error from a
    mesh with half the resolution.  ``discrete_flags[j]`` is set when the
    upper value lies below ``threshold - margin``.
    """
    if model.side == "waveguide":
        raise GeometryError("a waveguide strip has no artificial cut to bracket")
    up, up_tol = _with_mesh_tol(replace(model, far_bc="dirichlet"), k, tol, mesh_check, seed)
    lo, lo_tol = _with_mesh_tol(replace(model, far_bc="neumann"), k, tol, mesh_check, seed)
    thr = model.threshold()
    return Enclosure(
        lower=lo.values, upper=up.values, lower_tol=lo_tol, upper_tol=up_tol,
        threshold=thr, discrete_flags=up.values < thr - margin,
        a=model.width, mesh=(model.n_s, model.n_u),
        residuals=np.maximum(lo.residuals, up.residuals),
    )


@dataclass
class SeparatedBounds:
    lower: np.ndarray
    upper: np.ndarray
    mu_dirichlet: np.ndarray
    mu_neumann: np.ndarray
    zeta_dirichlet: float
    zeta_neumann: float


def separated_bounds(model: StripModel, k: int = 1, n: int | None = None,
                     tol: float = 1e-9) -> SeparatedBounds:
    """Bounds from operators with separated variables.

    Freezing the ``u``-dependence of the coefficients at their extreme values
    gives ``U^D (x) 1 + 1 (x) T^D`` above and ``U^N (x) 1 + 1 (x) T^N`` below
    the strip operators, so eigenvalues split into a longitudinal part
    ``mu^{D/N}_j`` and the transverse ground state ``zeta^{D/N}``.
    """
    if model.side == "waveguide":
        raise GeometryError("separated bounds are defined for single-boundary strips")
    a, beta = model.width, model.beta
    s = model.samples()
    g = model.g(s)
    gp = float(np.abs(g).max())
    g1p = float(np.abs(model.dg(s)).max())
    g2p = float(np.abs(model.d2g(s)).max())
    if not a * gp < 0.5:
        raise SingularCoordinatesError(f"need a < 1/(2 gamma_plus); a*gamma_plus = {a * gp:.6g}")
    glow, ghigh = float(g.min()), float(g.max())
    geometry = "circle" if model.closed else "line"
    lo, hi = model.window
    length = (hi - lo) if model.closed else 0.5 * (hi - lo)
    center = lo if model.closed else 0.5 * (lo + hi)
    n = n or max(model.n_s, 16)

    def shifted(f):
        # circle problems live on [0, L)
        return (lambda x: f(x + center)) if model.closed else f

    def v_plus(x):
        gg = model.g(x)
        return -gg * gg / (4.0 * (1.0 + a * gp) ** 2) + a * g2p / (2.0 * (1.0 - a * gp) ** 3)

    def v_minus(x):
        gg = model.g(x)
        return (-gg * gg / (4.0 * (1.0 - a * gp) ** 2) - a * g2p / (2.0 * (1.0 - a * gp) ** 3)
                - 1.25 * a * a * g1p * g1p / (1.0 - a * gp) ** 4)

    common = dict(gamma=shifted(model.g), geometry=geometry, length=length, n=n,
                  center=0.0 if model.closed else center)
    muD = mu_eigenvalues(Comparison1DProblem(kinetic=(1.0 - a * gp) ** -2, potential=shifted(v_plus), **common), k, tol)
    muN = mu_eigenvalues(Comparison1DProblem(kinetic=(1.0 + a * gp) ** -2, potential=shifted(v_minus), **common), k, tol)
    zD = t_dirichlet_eigenvalue(a, beta + 0.5 * glow)
    zN = t_neumann_eigenvalue(a, beta + 0.5 * ghigh, 0.5 * glow / (1.0 - a * glow))
    return SeparatedBounds(lower=muN.values + zN, upper=muD.values + zD,
                           mu_dirichlet=muD.values, mu_neumann=muN.values,
                           zeta_dirichlet=zD, zeta_neumann=zN)


def weighted_form_eigenvalues(model: StripModel, k: int = 1, tol: float = 1e-8) -> Spectrum:
    return lowest_eigenpairs(assemble_weighted(model), k, tol, return_vectors=False)


def concavity_check(model: StripModel, k: int = 1, tol: float = 1e-2, *,
                    allow_convex: bool = False) -> bool:
    """True when the weighted-form eigenvalues stay above ``-beta^2 (1 + tol)``.

    Requires ``gamma <= 0`` on the window unless ``allow_convex`` is set, in
    which case the same test is run as a diagnostic.
    """
    if model.side != "interior":
        raise GeometryError("the concavity test applies to the interior problem")
    if not allow_convex and model.g_range()[1] > 1e-12:
        raise GeometryError("curve has positive curvature; pass allow_convex=True to test anyway")
    spec = weighted_form_eigenvalues(model, k)
    return bool(spec.values[0] >= -model.beta ** 2 * (1.0 + tol))

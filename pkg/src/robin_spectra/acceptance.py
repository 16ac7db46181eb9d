"""Numbered end-to-end checks of the toolkit against exact and asymptotic results.

Each ``criterion_N`` returns a :class:`CriterionResult`; thresholds are fixed
here and must not be relaxed to make a check pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import comparison_mu, fit_remainder_exponent, disc_rows, ratio_spread
from .comparison1d import Comparison1DProblem, mu_eigenvalues
from .curve_geometry import (Circle, curvature_stats, curve_from_curvature, gaussian_graph,
                             line_bump, lorentzian_profile, straight_line)
from .exact_models import (bessel_K, bessel_K_quadrature, bessel_logderiv,
                           disc_exterior_levels, quadrant_eigenvalue, quadrant_separable)
from .strip2d import (StripModel, bracket_eigenvalues, default_width, strip_eigenvalues,
                      weighted_form_eigenvalues)
from .transverse1d import (TransverseProblem, dirichlet_regime_ok, fd_transverse_eigenvalue,
                           neumann_regime_ok, strip_even_mode, t_dirichlet_bounds,
                           t_dirichlet_eigenvalue, t_neumann_bounds, t_neumann_eigenvalue)
from .variational import deformation_functional, deformation_limit


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f} s)"


def _timed(number, title):
    def wrap(fn):
        def run(**kw):
            t0 = time.perf_counter()
            passed, details = fn(**kw)
            return CriterionResult(number, title, bool(passed), details, time.perf_counter() - t0)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


# disc index j <-> angular momentum m, counting the double degeneracy
_DISC_INDEX = {0: [0], 1: [1, 2], 2: [3, 4]}


@_timed(1, "disc exterior: strip eigenvalues vs Bessel roots within 0.5%")
def criterion_1(betas=(8, 16, 32), n_s=512, n_u=128):
    circle = Circle(1.0)
    worst, worst_time = 0.0, 0.0
    rows = []
    for beta in betas:
        t0 = time.perf_counter()
        model = StripModel(circle, float(beta), "exterior", a=default_width(beta), n_s=n_s, n_u=n_u)
        vals = strip_eigenvalues(model, 5).values
        per_m = (time.perf_counter() - t0) / 3.0
        worst_time = max(worst_time, per_m)
        exact = [d.lam for d in disc_exterior_levels(1.0, beta, 5)]
        for m, idx in _DISC_INDEX.items():
            for j in idx:
                rel = abs(vals[j] - exact[j]) / abs(exact[j])
                worst = max(worst, rel)
                rows.append((beta, m, j + 1, vals[j], exact[j], rel))
    return worst <= 5e-3 and worst_time <= 60.0, {"max_rel": worst, "max_seconds_per_pair": worst_time, "rows": rows}


@_timed(2, "disc exterior: two-term remainder decays like 1/beta")
def criterion_2(betas=(10, 20, 40, 80, 160)):
    slopes = {}
    for m in (0, 1, 2):
        res = [r["residual"] for r in disc_rows(1.0, betas, [m])]
        slopes[m] = fit_remainder_exponent(betas, res).exponent
    ok = all(abs(p + 1.0) <= 0.2 for p in slopes.values())
    return ok, {"slopes": slopes}


@_timed(3, "unit circle comparison operator: mu_1 = -1/4 and paired multiplicities")
def criterion_3(n=2048):
    mu = mu_eigenvalues(Comparison1DProblem(lambda s: 1.0 + 0.0 * s, "circle", 2.0 * math.pi, n), 5).values
    ok = abs(mu[0] + 0.25) <= 1e-4 and abs(mu[1] - mu[2]) <= 1e-6 and abs(mu[3] - mu[4]) <= 1e-6
    return ok, {"mu": mu.tolist()}


@_timed(4, "sech curvature: comparison ground state matches the Poschl-Teller value")
def criterion_4(S=40.0, n=4096):
    mu1 = mu_eigenvalues(Comparison1DProblem(lambda s: 1.0 / np.cosh(s), "line", S, n), 1).values[0]
    exact = -((math.sqrt(2.0) - 1.0) / 2.0) ** 2
    return abs(mu1 - exact) <= 1e-4, {"mu1": mu1, "exact": exact}


def random_transverse_cases(count=100, seed=0):
    """Random ``(a, sigma0, sigma_a)`` satisfying both uniqueness regimes."""
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < count:
        a = rng.uniform(0.3, 4.0)
        sa = rng.uniform(-5.0, 5.0)
        floor = max(4.0 / (3.0 * a), abs(sa), 2.0 * math.log(5.0) / (3.0 * a))
        s0 = floor * (1.0 + rng.uniform(0.05, 4.0))
        if dirichlet_regime_ok(a, s0) and neumann_regime_ok(a, s0, sa):
            cases.append((a, s0, sa))
    return cases


@_timed(5, "transverse problems: closed-form bounds and finite-difference agreement")
def criterion_5(count=100, seed=0):
    worst_fd, inside = 0.0, True
    for a, s0, sa in random_transverse_cases(count, seed):
        zd = t_dirichlet_eigenvalue(a, s0)
        zn = t_neumann_eigenvalue(a, s0, sa)
        lo, hi = t_dirichlet_bounds(a, s0)
        inside &= lo <= zd <= hi
        lo, hi = t_neumann_bounds(a, s0)
        inside &= lo <= zn <= hi
        n = max(500, int(math.ceil(50 * s0 * a)))
        fd_d = fd_transverse_eigenvalue(TransverseProblem(a, s0, "dirichlet"), n)
        fd_n = fd_transverse_eigenvalue(TransverseProblem(a, s0, "robin", sa), n)
        worst_fd = max(worst_fd, abs(fd_d / zd - 1.0), abs(fd_n / zn - 1.0))
    return inside and worst_fd <= 1e-6, {"all_inside": inside, "max_fd_rel": worst_fd}


def _bump_model(beta, **kw):
    return StripModel(line_bump(), float(beta), "interior", s_window=(-6.0, 6.0), **kw)


@_timed(6, "line bump, beta=20: bracketing order, bound state, refined lower bound")
def criterion_6(beta=20.0, n_s=256, n_u=128):
    model = _bump_model(beta, n_s=n_s, n_u=n_u)
    enc = bracket_eigenvalues(model, 3)
    g_star = curvature_stats(model.curve).gamma_star
    mu1 = comparison_mu(StripModel(line_bump(), beta, "interior"), 1)[0]
    refined = -(beta + 0.5 * g_star) ** 2 + mu1
    order = bool(np.all(enc.lower <= enc.upper))
    bound = enc.upper[0] < -beta * beta
    contains = refined - enc.lower_tol[0] <= enc.lower[0] <= enc.upper[0]
    return order and bound and contains, {
        "lower": enc.lower.tolist(), "upper": enc.upper.tolist(),
        "lower_tol": enc.lower_tol.tolist(), "upper_tol": enc.upper_tol.tolist(),
        "refined_lower": refined, "order": order, "below_threshold": bound, "contains_refined": contains}


@_timed(7, "line bump: (lambda_1 + beta^2 + gamma* beta)/beta^(2/3) stays bounded")
def criterion_7(betas=(10, 20, 40, 80), n_s=256, n_u=256):
    g_star = curvature_stats(line_bump()).gamma_star
    ratios = []
    for b in betas:
        lam = strip_eigenvalues(_bump_model(b, n_s=n_s, n_u=n_u), 1).values[0]
        ratios.append((lam + b * b + g_star * b) / b ** (2.0 / 3.0))
    spread = ratio_spread(ratios)
    return spread <= 3.0, {"ratios": ratios, "spread": spread}


@_timed(8, "quadrant: separable square approximates -2 beta^2 within 8 beta^2 exp(-L beta)")
def criterion_8(beta=3.0, lengths=(2.0, 4.0)):
    target = quadrant_eigenvalue(beta)
    out = {}
    ok = True
    for L in lengths:
        val, bound = quadrant_separable(beta, L)
        out[L] = (val, bound)
        ok &= abs(val - target) <= bound
    return ok, {"values": out}


@_timed(9, "existence functional: negative limit, S_64 within 1%, flat line gives 0")
def criterion_9(beta=1.0, n=64):
    res = deformation_functional(gaussian_graph(0.3), beta, n)
    flat = deformation_limit(straight_line(), beta)
    neg = res.limit < -1e-3
    close = abs(res.S_n - res.limit) <= 0.01 * abs(res.limit)
    return neg and close and abs(flat) <= 1e-10, {
        "limit": res.limit, "S_n": res.S_n, "gradient_term": res.terms["gradient"],
        "limit_negative": neg, "S_n_within_1pct": close, "flat_limit": flat}


@_timed(10, "concave boundary: weighted-form ground state stays above -beta^2 (1 + 1e-2)")
def criterion_10(betas=(5.0, 10.0), n_s=512, n_u=128):
    curve = curve_from_curvature(lorentzian_profile(-1.0), 0.0, (-30.0, 30.0))
    vals = {}
    ok = True
    for b in betas:
        m = StripModel(curve, b, "interior", far_bc="neumann", n_s=n_s, n_u=n_u)
        v = weighted_form_eigenvalues(m, 1).values[0]
        vals[b] = v
        ok &= v >= -b * b * (1.0 + 1e-2)
    return ok, {"lowest": vals}


@_timed(11, "waveguide: straight-strip oracle, bumped bound state and remainder ratio")
def criterion_11(d=1.0, betas=(10, 20, 40, 80), n_s=256, n_u=256):
    S = 10.0
    straight_err = 0.0
    for b in (1.0, 10.0):
        m = StripModel(straight_line((-S, S)), b, "waveguide", a=d, n_s=n_s, n_u=n_u)
        v = strip_eigenvalues(m, 1).values[0]
        exact = strip_even_mode(d, b) + (math.pi / (2.0 * S)) ** 2
        straight_err = max(straight_err, abs(v / exact - 1.0))
    curve = line_bump(0.5)
    st = curvature_stats(curve)
    g_d_low = st.gamma_lowstar / (1.0 - d * st.gamma_lowstar)
    ratios, lam10 = [], None
    for b in betas:
        m = StripModel(curve, float(b), "waveguide", a=d, s_window=(-6.0, 6.0), n_s=n_s, n_u=n_u)
        lam = strip_eigenvalues(m, 1).values[0]
        if b == 10:
            lam10 = (lam, m.threshold())
        pred = -b * b - max(st.gamma_star, -g_d_low) * b
        ratios.append((lam - pred) / b ** (2.0 / 3.0))
    spread = ratio_spread(ratios)
    bound = lam10 is not None and lam10[0] < -10.0 ** 2 and lam10[0] < lam10[1]
    return straight_err <= 1e-4 and bound and spread <= 3.0, {
        "straight_rel_err": straight_err, "lambda_beta10": lam10, "ratios": ratios, "spread": spread}


@_timed(12, "Bessel K: recurrence vs integral representation, log-derivative properties")
def criterion_12(m_max=10, n_x=80):
    xs = np.geomspace(0.1, 50.0, n_x)
    worst = 0.0
    mono, above = True, True
    for m in range(m_max + 1):
        prev = -math.inf
        for x in xs:
            k = bessel_K(m, x)
            q = bessel_K_quadrature(m, x)
            worst = max(worst, abs(k / q - 1.0))
            ld = bessel_logderiv(m, x)
            mono &= ld > prev
            above &= ld > x
            prev = ld
    return worst <= 1e-10 and mono and above, {"max_rel": worst, "increasing": mono, "exceeds_x": above}


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def run_all(selected=None):
    chosen = CRITERIA if not selected else [CRITERIA[i - 1] for i in selected]
    return [c() for c in chosen]

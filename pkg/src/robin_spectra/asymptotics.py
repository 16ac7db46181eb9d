"""Two-term strong-coupling predictions, beta sweeps and remainder fits."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .comparison1d import Comparison1DProblem, mu_eigenvalues
from .curve_geometry import BoundaryCurve
from .exact_models import disc_exterior_asymptotic, disc_exterior_eigenvalue
from .strip2d import StripModel, bracket_eigenvalues, default_width, strip_eigenvalues

WORKERS_ENV = "ROBIN_SPECTRA_WORKERS"


def predict_interior(gamma_star: float, beta: float) -> float:
    """``-beta^2 - gamma^* beta``."""
    return -beta * beta - gamma_star * beta


def predict_exterior(gamma_lowstar_ext: float, beta: float) -> float:
    """``-beta^2 + gamma_{*,ext} beta`` (exterior curvature, positive on convex obstacles)."""
    return -beta * beta + gamma_lowstar_ext * beta


def predict_refined_lower(gamma: float, mu: float, beta: float, side: str = "interior") -> float:
    """``-(beta + gamma^*/2)^2 + mu`` inside, ``-(beta - gamma_{*,ext}/2)^2 + mu`` outside."""
    if side == "interior":
        return -(beta + 0.5 * gamma) ** 2 + mu
    if side == "exterior":
        return -(beta - 0.5 * gamma) ** 2 + mu
    raise ValueError("side must be 'interior' or 'exterior'")


def predict_waveguide(gamma_star: float, gamma_d_lowstar: float, beta: float) -> float:
    """``-beta^2 - max(gamma^*, -gamma_{d,*}) beta``."""
    return -beta * beta - max(gamma_star, -gamma_d_lowstar) * beta


@dataclass
class ExponentFit:
    exponent: float
    log_prefactor: float
    r2: float
    degenerate: bool = False


def fit_remainder_exponent(betas, residuals, drop_smallest: bool = False) -> ExponentFit:
    """Least-squares slope ``p`` of ``log|residual|`` against ``log beta``."""
    b = np.asarray(betas, dtype=float)
    r = np.asarray(residuals, dtype=float)
    order = np.argsort(b)
    b, r = b[order], r[order]
    if drop_smallest:
        b, r = b[1:], r[1:]
    if len(b) < 3:
        raise ValueError("need at least three beta values for a fit")
    if np.any(r == 0) or not np.all(np.isfinite(r)):
        return ExponentFit(float("nan"), float("nan"), float("nan"), degenerate=True)
    x, y = np.log(b), np.log(np.abs(r))
    p, c = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (p * x + c)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    # an exactly fitted sequence (including a constant one) has r2 = 1
    scale = len(y) * max(1.0, float(np.max(np.abs(y)))) ** 2
    r2 = 1.0 if ss_res <= 1e-24 * scale else 1.0 - ss_res / ss_tot
    return ExponentFit(float(p), float(c), r2)


def worker_count(default: int = 1) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be >= 1")
    return n


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class PredictionReport:
    betas: np.ndarray
    computed_lower: np.ndarray   # (n_beta, k)
    computed_upper: np.ndarray
    predicted_two_term: np.ndarray
    refined_lower: np.ndarray
    residuals: np.ndarray        # computed_upper - predicted_two_term
    discrete_flags: np.ndarray
    widths: np.ndarray
    mesh: tuple[int, int]
    fitted_exponent: list = field(default_factory=list)
    descriptor: str = ""

    @property
    def computed(self):
        return self.computed_upper

    def rows(self):
        """Rows ordered by beta, then j (1-based)."""
        for i, b in enumerate(self.betas):
            for j in range(self.computed_upper.shape[1]):
                yield {
                    "beta": float(b), "j": j + 1,
                    "lambda_computed_lower": float(self.computed_lower[i, j]),
                    "lambda_computed_upper": float(self.computed_upper[i, j]),
                    "predicted_two_term": float(self.predicted_two_term[i, j]),
                    "refined_lower": float(self.refined_lower[i, j]),
                    "residual": float(self.residuals[i, j]),
                    "discrete_flag": bool(self.discrete_flags[i, j]),
                    "mesh_ns": self.mesh[0], "mesh_nu": self.mesh[1],
                    "a": float(self.widths[i]),
                }


def comparison_mu(model: StripModel, k: int, n: int = 4096) -> np.ndarray:
    """Eigenvalues of ``-d^2/ds^2 - g^2/4`` on the model's window."""
    lo, hi = model.window
    if model.closed:
        prob = Comparison1DProblem(lambda s: model.g(s + lo), "circle", hi - lo, n)
    else:
        prob = Comparison1DProblem(model.g, "line", 0.5 * (hi - lo), n, center=0.5 * (lo + hi))
    return mu_eigenvalues(prob, k).values


def sweep(curve: BoundaryCurve, betas, k: int = 1, side: str = "interior", *,
          n_s: int = 256, n_u: int = 128, s_window=None, a_rule="paper",
          mesh_check: bool = True, workers: int | None = None, seed: int = 0) -> PredictionReport:
    """Bracket the ``k`` lowest eigenvalues for every ``beta`` and compare with predictions."""
    if side not in ("interior", "exterior"):
        raise ValueError("sweeps support the interior and exterior problems")
    betas = np.asarray(sorted(float(b) for b in betas))
    if np.any(np.diff(betas) <= 0):
        raise ValueError("betas must be distinct")
    base = StripModel(curve, float(betas[0]), side, s_window=s_window, n_s=n_s, n_u=n_u)
    g = base.g(base.samples())
    g_top = float(g.max())   # maximum of the side-adjusted curvature
    mu = comparison_mu(base, k)

    def one(beta):
        a = default_width(beta) if a_rule == "paper" else float(a_rule)
        m = replace(base, beta=beta, a=a)
        return bracket_eigenvalues(m, k, mesh_check=mesh_check, seed=seed)

    encl = _map(one, list(betas), workers if workers is not None else worker_count())
    lower = np.array([e.lower for e in encl])
    upper = np.array([e.upper for e in encl])
    two = np.array([[-b * b - g_top * b] * k for b in betas])
    refined = np.array([[-(b + 0.5 * g_top) ** 2 + mu[j] for j in range(k)] for b in betas])
    resid = upper - two
    fits = []
    if len(betas) >= 4:
        fits = [fit_remainder_exponent(betas, resid[:, j], drop_smallest=True) for j in range(k)]
    return PredictionReport(
        betas=betas, computed_lower=lower, computed_upper=upper,
        predicted_two_term=two, refined_lower=refined, residuals=resid,
        discrete_flags=np.array([e.discrete_flags for e in encl]),
        widths=np.array([e.a for e in encl]), mesh=(n_s, n_u), fitted_exponent=fits,
        descriptor=f"{side} {curve!r}",
    )


def waveguide_sweep(curve: BoundaryCurve, d: float, betas, k: int = 1, *, n_s: int = 256,
                    n_u: int = 256, s_window=None, workers: int | None = None, seed: int = 0):
    """Lowest waveguide eigenvalues against the two-wall prediction."""
    betas = np.asarray(sorted(float(b) for b in betas))
    base = StripModel(curve, float(betas[0]), "waveguide", a=d, s_window=s_window, n_s=n_s, n_u=n_u)
    g = base.g(base.samples())
    g_star, g_low = float(g.max()), float(g.min())
    g_d_low = g_low / (1.0 - d * g_low)

    def one(beta):
        m = replace(base, beta=beta)
        return strip_eigenvalues(m, k, seed=seed).values, m.threshold()

    out = _map(one, list(betas), workers if workers is not None else worker_count())
    vals = np.array([v for v, _ in out])
    thr = np.array([t for _, t in out])
    pred = np.array([predict_waveguide(g_star, g_d_low, b) for b in betas])
    return {"betas": betas, "values": vals, "threshold": thr, "predicted": pred,
            "gamma_star": g_star, "gamma_d_lowstar": g_d_low}


def disc_rows(R: float, betas, ms):
    """Exact and asymptotic disc-exterior eigenvalues, ordered by beta then m."""
    rows = []
    for b in sorted(betas):
        for m in ms:
            d = disc_exterior_eigenvalue(R, b, m)
            asym = disc_exterior_asymptotic(R, b, m)
            rows.append({"R": R, "beta": b, "m": m, "u_root": d.u_root,
                         "lambda_exact": d.lam, "lambda_asymptotic": asym,
                         "residual": d.lam - asym})
    return rows


def ratio_spread(values) -> float:
    """max/min of a positive sequence (``inf`` if the signs differ)."""
    v = np.asarray(values, dtype=float)
    if np.all(v > 0) or np.all(v < 0):
        v = np.abs(v)
        return float(v.max() / v.min())
    return math.inf

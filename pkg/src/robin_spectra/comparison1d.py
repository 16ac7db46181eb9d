"""The longitudinal comparison operator ``-d^2/ds^2 - gamma^2/4``.

On an infinite curve the operator is truncated to ``[center - L, center + L]``
with Dirichlet ends (this can only raise eigenvalues).  On a closed curve of
perimeter ``L`` it is periodic.  The same machinery handles the scaled
variants ``-c d^2/ds^2 + V(s)`` used by the separated strip bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .eigensolve import Spectrum, SymPencil, classify_discrete, lowest_eigenpairs
from .fem import assemble_1d


@dataclass(frozen=True)
class Comparison1DProblem:
    gamma: Callable
    geometry: str = "line"  # "line" (Dirichlet-truncated) or "circle" (periodic)
    length: float = 40.0    # half-width S_trunc for lines, perimeter for circles
    n: int = 2048
    center: float = 0.0
    kinetic: float = 1.0
    potential: Callable | None = None  # replaces -gamma^2/4 when given

    def __post_init__(self):
        if self.geometry not in ("line", "circle"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.n < 16:
            raise ValueError("n must be at least 16")
        if not self.length > 0:
            raise ValueError("length must be positive")
        if not self.kinetic > 0:
            raise ValueError("kinetic coefficient must be positive")

    def potential_values(self, s):
        if self.potential is not None:
            return self.potential(s)
        g = self.gamma(s)
        return -0.25 * g * g

    def nodes(self):
        if self.geometry == "circle":
            return np.linspace(0.0, self.length, self.n + 1)
        return np.linspace(self.center - self.length, self.center + self.length, self.n + 1)


def assemble_comparison(problem: Comparison1DProblem) -> SymPencil:
    nodes = problem.nodes()
    periodic = problem.geometry == "circle"
    vmin = float(np.min(problem.potential_values(nodes)))
    pencil, _ = assemble_1d(
        nodes,
        kinetic=lambda x: problem.kinetic + 0.0 * x,
        potential=problem.potential_values,
        periodic=periodic,
        dirichlet=(not periodic, not periodic),
        metadata=f"comparison {problem.geometry} length={problem.length} n={problem.n}",
        sigma_hint=min(vmin, 0.0) - 1.0,
    )
    return pencil


def mu_eigenvalues(problem: Comparison1DProblem, k: int, tol: float = 1e-9) -> Spectrum:
    """Lowest ``k`` eigenvalues; on lines, values >= 0 are flagged as non-discrete."""
    spec = lowest_eigenpairs(assemble_comparison(problem), k, tol)
    if problem.geometry == "line":
        spec = classify_discrete(spec, 0.0)
    return spec

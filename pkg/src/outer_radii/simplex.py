"""
Closed forms for outer radii of regular simplices.

The canonical scale is edge length sqrt(2), which is what the standard
embedding (unit vectors of R^(n+1)) produces.  Public functions that take an
``edge`` rescale by ``edge / sqrt(2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidJ, NegativeRadicand
from .geometry import Polytope

SQRT2 = math.sqrt(2.0)


class Formula(enum.Enum):
    SQRT_J_OVER_N1 = "SqrtJOverN1"
    ODD_N_MINUS_ONE = "OddTheorem2"
    EVEN_N_MINUS_ONE = "EvenTheorem2"
    NO_CLOSED_FORM = "NoClosedForm"


@dataclass(frozen=True)
class RadiiQuery:
    n: int
    j: int
    edge: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 1 <= self.j <= self.n:
            raise InvalidJ(f"j={self.j} outside 1..{self.n}")
        if not self.edge > 0:
            raise ValueError("edge must be positive")


@dataclass(frozen=True)
class RadiiAnswer:
    value: float
    formula: Formula
    exact_expr: str
    # the formula instantiated at (n, j), edge factor kept symbolic
    instance_expr: str = ""


def standard_embedding(n: int) -> Polytope:
    """The n+1 coordinate unit vectors of R^(n+1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Polytope(np.eye(n + 1), label=f"T^{n} (standard embedding)")


def regular_simplex(n: int, edge: float = 1.0) -> Polytope:
    """Full-dimensional regular simplex in R^n, centered at the origin."""
    emb = np.eye(n + 1) - 1.0 / (n + 1)
    _, _, vt = np.linalg.svd(emb)
    coords = emb @ vt[:n].T
    return Polytope(coords * (edge / SQRT2), label=f"regular {n}-simplex, edge {edge:g}")


def _edge_prefix(edge: float) -> str:
    return "" if edge == 1.0 else f"{edge!r}*"


def closed_form(q: RadiiQuery) -> RadiiAnswer:
    """Outer j-radius of the regular n-simplex with the given edge length."""
    n, j, edge = q.n, q.j, q.edge
    pre = _edge_prefix(edge)
    if n >= 2 and j == n - 1:
        if n % 2:
            value = edge * math.sqrt((n - 1) / (2 * (n + 1)))
            return RadiiAnswer(
                value,
                Formula.ODD_N_MINUS_ONE,
                pre + "sqrt((n-1)/(2(n+1)))",
                pre + f"sqrt({n - 1}/{2 * (n + 1)})",
            )
        value = edge * (2 * n - 1) / (2 * math.sqrt(2 * n * (n + 1)))
        return RadiiAnswer(
            value,
            Formula.EVEN_N_MINUS_ONE,
            pre + "(2n-1)/(2*sqrt(2n(n+1)))",
            pre + f"{2 * n - 1}/(2*sqrt({2 * n * (n + 1)}))",
        )
    if n % 2 == 0 and j == 1:
        return RadiiAnswer(math.nan, Formula.NO_CLOSED_FORM, "", "")
    value = edge * math.sqrt(j / (2 * (n + 1)))
    return RadiiAnswer(
        value,
        Formula.SQRT_J_OVER_N1,
        pre + "sqrt(j/(2(n+1)))",
        pre + f"sqrt({j}/{2 * (n + 1)})",
    )


def pn_star(n: int, j: int) -> float:
    """
    Optimal axis offset for a cylinder parallel to a facet of T^n, n even.

    Equals (n-j+2) / (2 sqrt(n(n+1))); see ``pn_star_from`` for the general
    expression in terms of the apex height and the facet radius.
    """
    if n % 2 or not 2 <= j <= n - 1:
        raise InvalidJ(f"closed form needs even n and 2 <= j <= n-1, got n={n}, j={j}")
    return (n - j + 2) / (2 * math.sqrt(n * (n + 1)))


def pn_star_from(height: float, facet_radius: float) -> float:
    """(height^2 - facet_radius^2) / (2 height)."""
    if height <= 0:
        raise ValueError("height must be positive")
    return (height ** 2 - facet_radius ** 2) / (2 * height)


def rho_from_objective(n: int, j: int, objective: float) -> float:
    """
    Cylinder radius of T^n (edge sqrt(2)) from the value of the quartic
    objective sum_i (sum_k s_ik^2)^2 over an optimal frame.
    """
    if objective < 0:
        raise ValueError("objective must be nonnegative")
    if not 1 <= j <= n:
        raise InvalidJ(f"j={j} outside 1..{n}")
    d = n - j
    rho2 = (2 + d) * (2 - d) / (4 * (n + 1)) + objective / 4 + (j - 1) / (n + 1)
    if rho2 < 0:
        raise NegativeRadicand(f"rho^2 = {rho2} < 0")
    return math.sqrt(rho2)


def upper_bound_facet_parallel(n: int) -> float:
    """(2n-1) / (2 sqrt(n(n+1))): best (n-1)-cylinder of T^n parallel to a facet."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return (2 * n - 1) / (2 * math.sqrt(n * (n + 1)))


def random_simplex(n: int, seed: int) -> Polytope:
    """Full-dimensional simplex in R^n with standard normal vertices."""
    rng = np.random.default_rng(seed)
    for _ in range(16):
        v = rng.standard_normal((n + 1, n))
        p = Polytope(v, label=f"random {n}-simplex (seed {seed})")
        if p.dim == n:
            return p
    raise RuntimeError("could not draw a nondegenerate simplex")

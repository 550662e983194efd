"""
Enclosing j-cylinders for a fixed axis frame, touching sets and the
structural checks for minimal cylinders.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidJ, NotAHyperplane, NotASimplex, NotEnclosing
from .geometry import (
    Frame,
    Polytope,
    affine_basis,
    affine_rank,
    min_enclosing_ball,
    project_onto_complement,
)


@dataclass(frozen=True)
class Cylinder:
    """``base_point + span(axis) + radius * unit ball``."""

    base_point: np.ndarray
    axis: Frame
    radius: float

    def distances(self, points) -> np.ndarray:
        """Euclidean distance of each point to the cylinder's axis flat."""
        proj = project_onto_complement(np.asarray(points, dtype=float) - self.base_point, self.axis)
        return np.linalg.norm(proj, axis=1)

    def encloses(self, points, tol: float = 1e-9) -> bool:
        return bool(np.all(self.distances(points) <= self.radius + tol))


class TouchCase(enum.Enum):
    CASE_A = "A"
    CASE_B = "B"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class TouchReport:
    touching: tuple
    nu: int
    case: TouchCase
    hyperplane: Optional[tuple] = None
    # both signals are surfaced when the classification is not clear-cut
    parallel_to_hyperplane: Optional[bool] = None


def default_touch_tol(radius: float) -> float:
    return 1e-7 * (1.0 + radius)


def cylinder_radius(polytope: Polytope, axis: Frame) -> Cylinder:
    """
    Smallest enclosing cylinder whose axis flat is parallel to ``axis``.

    For a fixed direction space the optimal base point is the center of the
    minimal ball around the projected vertices.
    """
    if axis.dim != polytope.ambient_dim:
        raise DimensionMismatch(
            f"frame dimension {axis.dim} does not match ambient dimension {polytope.ambient_dim}"
        )
    if axis.count > polytope.ambient_dim - 1:
        raise DimensionMismatch("axis frame must leave at least one projected direction")
    projected = project_onto_complement(polytope.vertices, axis)
    ball = min_enclosing_ball(projected)
    p = ball.center
    if axis.count:
        p = p - (axis.vectors @ p) @ axis.vectors
    return Cylinder(p, axis, ball.radius)


def touching_set(polytope: Polytope, cyl: Cylinder, tol: Optional[float] = None) -> TouchReport:
    """Classify the vertices on the cylinder boundary."""
    if tol is None:
        tol = default_touch_tol(cyl.radius)
    d = cyl.distances(polytope.vertices)
    if np.any(d > cyl.radius + tol):
        worst = int(np.argmax(d))
        raise NotEnclosing(f"vertex {worst} lies {d[worst] - cyl.radius:.3e} outside the cylinder")
    touching = tuple(int(i) for i in np.flatnonzero(np.abs(d - cyl.radius) <= tol))
    if not touching:
        return TouchReport((), 0, TouchCase.INDETERMINATE)
    nu = affine_rank(polytope.vertices[list(touching)])
    n = polytope.dim
    if nu >= n + 1:
        return TouchReport(touching, nu, TouchCase.CASE_A)
    if nu == n:
        hyper = _vertices_on_flat(polytope, touching)
        parallel = _axis_parallel_to(polytope, hyper, cyl.axis)
        return TouchReport(touching, nu, TouchCase.CASE_B, hyper, parallel)
    return TouchReport(touching, nu, TouchCase.INDETERMINATE)


def _vertices_on_flat(polytope: Polytope, indices: Sequence[int], tol: float = 1e-9) -> tuple:
    """Indices of all vertices lying in the affine hull of the given ones."""
    sub = polytope.vertices[list(indices)]
    origin, basis = affine_basis(sub)
    rel = polytope.vertices - origin
    resid = rel - (rel @ basis.T) @ basis
    scale = 1.0 + float(np.max(np.abs(polytope.vertices)))
    return tuple(int(i) for i in np.flatnonzero(np.linalg.norm(resid, axis=1) <= tol * scale))


def _hyperplane_normal(polytope: Polytope, indices: Sequence[int]) -> np.ndarray:
    """
    Unit normal of the hyperplane spanned by ``indices``, taken inside the
    affine hull of the whole polytope.
    """
    _, full = affine_basis(polytope.vertices)
    sub = polytope.vertices[list(indices)]
    diffs = (sub[1:] - sub[0]) @ full.T
    if diffs.shape[0] == 0:
        diffs = np.zeros((1, full.shape[0]))
    _, sv, vt = np.linalg.svd(diffs, full_matrices=True)
    normal_local = vt[-1]
    normal = normal_local @ full
    return normal / np.linalg.norm(normal)


def _axis_parallel_to(polytope: Polytope, indices: Sequence[int], axis: Frame, tol: float = 1e-6) -> bool:
    if axis.count == 0:
        return False
    h = _hyperplane_normal(polytope, indices)
    return bool(np.all(np.abs(axis.vectors @ h) <= tol))


def facet_parallelism_check(
    simplex: Polytope, cyl: Cylinder, tol: float = 1e-6, touch_tol: Optional[float] = None
) -> list:
    """
    For each vertex off the cylinder boundary, whether the axis flat is
    parallel to the opposite facet.  Touching vertices report ``True``.
    """
    m = simplex.num_vertices
    if affine_rank(simplex.vertices) != m:
        raise NotASimplex("vertices are not affinely independent")
    if m < 2:
        raise NotASimplex("a simplex needs at least two vertices")
    if touch_tol is None:
        touch_tol = default_touch_tol(cyl.radius)
    d = cyl.distances(simplex.vertices)
    touching = np.abs(d - cyl.radius) <= touch_tol
    out = []
    for i in range(m):
        if touching[i]:
            out.append(True)
            continue
        facet = [k for k in range(m) if k != i]
        h = _hyperplane_normal(simplex, facet)
        out.append(bool(cyl.axis.count == 0 or np.all(np.abs(cyl.axis.vectors @ h) <= tol)))
    return out


def case_b_recursion(polytope: Polytope, indices: Sequence[int], j: int, cfg=None) -> float:
    """
    ``R_{j-1}`` of the sub-polytope on the hyperplane through ``indices``,
    measured relative to its own affine hull.
    """
    from .grassmann import minimize_rj

    n = polytope.dim
    if j < 2:
        raise InvalidJ("the hyperplane reduction needs j >= 2")
    if j > n:
        raise InvalidJ(f"j={j} exceeds the polytope dimension {n}")
    sub = polytope.vertices[sorted(set(indices))]
    if affine_rank(sub) != n:
        raise NotAHyperplane(f"vertices {tuple(indices)} do not span an {n - 1}-flat")
    return minimize_rj(Polytope(sub), j - 1, cfg).best.radius

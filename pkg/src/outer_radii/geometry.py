"""
Dense linear algebra helpers, frames, projections and minimal enclosing balls.

Everything here works in double precision on small point sets (a few dozen
points at most).  Points are stored as rows of a 2-d ``numpy`` array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, RankDeficient

RANK_TOL = 1e-10
TOUCH_TOL = 1e-9


def as_points(points) -> np.ndarray:
    """Coerce a sequence of vectors to a finite float array of shape (m, d)."""
    arr = np.array(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points contain non-finite entries")
    return arr


@dataclass(frozen=True)
class Frame:
    """Ordered orthonormal vectors, stored as the rows of ``vectors``."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2:
            raise DimensionMismatch("frame vectors must be a (count, dim) array")
        object.__setattr__(self, "vectors", v)

    @classmethod
    def empty(cls, dim: int) -> "Frame":
        return cls(np.zeros((0, dim)))

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def gram_error(self) -> float:
        if self.count == 0:
            return 0.0
        g = self.vectors @ self.vectors.T
        return float(np.max(np.abs(g - np.eye(self.count))))

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the complement of the frame's span."""
        return np.eye(self.dim) - self.vectors.T @ self.vectors


@dataclass(frozen=True)
class Polytope:
    vertices: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        v = as_points(self.vertices)
        if v.shape[0] < 1:
            raise ValueError("a polytope needs at least one vertex")
        object.__setattr__(self, "vertices", v)

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def dim(self) -> int:
        """Affine dimension of the vertex set."""
        return affine_rank(self.vertices) - 1

    def scaled(self, factor: float) -> "Polytope":
        return Polytope(self.vertices * factor, self.label)


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float
    support: tuple = field(default=())


def orthonormalize(vectors, tol: float = RANK_TOL) -> Frame:
    """
    Gram-Schmidt orthonormalization preserving order and orientation.

    The first output vector is a positive multiple of the first input, the
    second is built from the first two, and so on.  Two passes of modified
    Gram-Schmidt keep the Gram matrix at identity to ~1e-15.
    """
    vecs = np.array(vectors, dtype=float)
    if vecs.size == 0:
        dim = vecs.shape[1] if vecs.ndim == 2 else 0
        return Frame.empty(dim)
    if vecs.ndim == 1:
        vecs = vecs[None, :]
    count, dim = vecs.shape
    if count > dim:
        raise RankDeficient(f"{count} vectors in dimension {dim} cannot be independent")
    sv = np.linalg.svd(vecs, compute_uv=False)
    if sv[0] == 0.0 or np.sum(sv > tol * sv[0]) < count:
        raise RankDeficient("vectors are linearly dependent")

    out = np.zeros_like(vecs)
    for k in range(count):
        w = vecs[k].copy()
        for _ in range(2):
            for l in range(k):
                w -= (out[l] @ w) * out[l]
        norm = np.linalg.norm(w)
        if norm <= tol * np.linalg.norm(vecs[k]):
            raise RankDeficient("vectors are linearly dependent")
        out[k] = w / norm
    return Frame(out)


def affine_rank(points, tol: float = RANK_TOL) -> int:
    """One plus the rank of the differences from the first point."""
    pts = as_points(points)
    if pts.shape[0] == 1:
        return 1
    diffs = pts[1:] - pts[0]
    sv = np.linalg.svd(diffs, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 1
    return 1 + int(np.sum(sv > tol * sv[0]))


def affine_basis(points, tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """
    Centroid and orthonormal basis (rows) of the affine hull directions.

    Returns ``(origin, basis)`` with ``basis`` of shape (rank, d).
    """
    pts = as_points(points)
    origin = pts.mean(axis=0)
    centered = pts - origin
    if pts.shape[0] == 1:
        return origin, np.zeros((0, pts.shape[1]))
    _, sv, vt = np.linalg.svd(centered, full_matrices=False)
    if sv[0] == 0.0:
        return origin, np.zeros((0, pts.shape[1]))
    rank = int(np.sum(sv > tol * sv[0]))
    return origin, vt[:rank]


def complement_basis(frame: Frame, within: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Orthonormal basis (rows) of the orthogonal complement of ``frame``.

    With ``within`` (orthonormal rows spanning a subspace that contains the
    frame) the complement is taken relative to that subspace.
    """
    dim = frame.dim
    space = np.eye(dim) if within is None else np.asarray(within, dtype=float)
    if frame.count == 0:
        return space.copy()
    coords = frame.vectors @ space.T
    _, sv, vt = np.linalg.svd(coords, full_matrices=True)
    rest = vt[frame.count:]
    return rest @ space


def project_onto_complement(points, axis: Frame) -> np.ndarray:
    """Apply ``I - sum_k s_k s_k^T`` to every point."""
    pts = as_points(points)
    if pts.shape[1] != axis.dim:
        raise DimensionMismatch(f"points live in dimension {pts.shape[1]}, frame in {axis.dim}")
    if axis.count == 0:
        return pts.copy()
    s = axis.vectors
    return pts - (pts @ s.T) @ s


# ---------------------------------------------------------------------------
# Minimal enclosing ball
# ---------------------------------------------------------------------------

def _circumcenter(q: np.ndarray) -> np.ndarray:
    """Center of the smallest sphere through the rows of ``q`` inside their affine hull."""
    if q.shape[0] == 1:
        return q[0].copy()
    a = q[1:] - q[0]
    gram = a @ a.T
    rhs = 0.5 * np.einsum("ij,ij->i", a, a)
    try:
        lam = np.linalg.solve(gram, rhs)
        if not np.all(np.isfinite(lam)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        # affinely dependent support candidates
        lam = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    return q[0] + lam @ a


def _mtf_ball(pts: np.ndarray, order: list, end: int, boundary: list, eps: float, cache: dict):
    """Move-to-front Welzl recursion; returns (center, radius, boundary indices)."""
    if boundary:
        key = tuple(sorted(boundary))
        hit = cache.get(key)
        if hit is None:
            center = _circumcenter(pts[boundary])
            diff = pts[boundary] - center
            hit = cache[key] = (center, float(np.sqrt(np.max(np.einsum("ij,ij->i", diff, diff)))))
        center, radius = hit
    else:
        center, radius = None, -1.0
    best = list(boundary)
    if len(boundary) == pts.shape[1] + 1:
        return center, radius, best
    for i in range(end):
        idx = order[i]
        if center is not None:
            d = pts[idx] - center
            if math.sqrt(d @ d) <= radius + eps:
                continue
        center, radius, best = _mtf_ball(pts, order, i, boundary + [idx], eps, cache)
        order.insert(0, order.pop(i))
    return center, radius, best


def enclosing_radius(points: np.ndarray, tol: float = 1e-12) -> float:
    """
    Radius of the minimal ball of full-rank points, without canonicalization.

    Inner-loop helper for optimizers; ``min_enclosing_ball`` is the
    reference path.
    """
    m = points.shape[0]
    if m == 1:
        return 0.0
    centered = points - points.mean(axis=0)
    sq = np.einsum("ij,ij->i", centered, centered)
    order = [int(i) for i in np.argsort(-sq, kind="stable")]
    center, _, _ = _mtf_ball(points, order, m, [], tol * math.sqrt(float(sq.max())), {})
    diff = points - center
    return float(math.sqrt(np.max(np.einsum("ij,ij->i", diff, diff))))


def min_enclosing_ball(points, tol: float = 1e-12) -> Ball:
    """
    Smallest ball containing all ``points``.

    Welzl's move-to-front recursion runs in intrinsic coordinates of the
    points' affine hull.  The final ball is recomputed from the support set
    in canonical (lexicographic) order, so the result does not depend on the
    input order whenever the same support is found.
    """
    pts = as_points(points)
    m = pts.shape[0]
    origin, basis = affine_basis(pts)
    if basis.shape[0] == 0:
        return Ball(pts[0].copy(), 0.0, (0,))
    local = (pts - origin) @ basis.T
    scale = float(np.max(np.linalg.norm(local, axis=1)))
    # deterministic initial order: farthest from the centroid first
    order = sorted(range(m), key=lambda i: (-float(local[i] @ local[i]), tuple(pts[i])))
    _, _, support = _mtf_ball(local, order, m, [], tol * scale, {})

    support = sorted(set(support), key=lambda i: tuple(pts[i]))
    center = _circumcenter(pts[support])
    dists = np.linalg.norm(pts - center, axis=1)
    radius = float(np.max(dists))
    return Ball(center, radius, tuple(sorted(support)))

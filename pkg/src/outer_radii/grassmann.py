"""
Multi-start search over orthonormal axis frames for the outer j-radius of
an arbitrary polytope.

The search runs in intrinsic coordinates of the polytope's affine hull, so
frames never leave the hull's direction space (for the standard simplex
embedding this keeps every axis vector orthogonal to the all-ones vector).
Each start does a derivative-free perturbation descent on the frame and then
a smooth SLSQP polish of the epigraph form

    min t  s.t.  |W x_i - c|^2 <= t,  W W^T = I,

where the rows of W span the complement of the frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .cylinder import Cylinder, cylinder_radius
from .errors import InvalidJ, RankDeficient
from .geometry import (
    Frame,
    Polytope,
    affine_basis,
    complement_basis,
    enclosing_radius,
    min_enclosing_ball,
    orthonormalize,
)


@dataclass(frozen=True)
class SearchConfig:
    starts: Optional[int] = None  # None: 16 * (n - j + 1)
    max_iters: int = 30
    step_tol: float = 1e-4
    f_tol: float = 1e-12
    seed: int = 0
    initial_step: float = 0.3
    polish: bool = True

    def __post_init__(self):
        if self.starts is not None and self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.step_tol <= 0 or self.f_tol <= 0:
            raise ValueError("tolerances must be positive")

    def num_starts(self, n: int, j: int) -> int:
        return self.starts if self.starts is not None else 16 * (n - j + 1)


@dataclass
class SearchResult:
    best: Cylinder
    # accepted objective values per start; each list is non-increasing
    objective_history: list = field(default_factory=list)
    converged_starts: int = 0
    start_radii: list = field(default_factory=list)
    best_start: int = 0


def _start_seed(seed: int, index: int) -> int:
    """Per-start seed; independent of execution order."""
    return int(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, index]).generate_state(1, np.uint64)[0])


def random_frame(dim: int, count: int, seed: int) -> Frame:
    """Orthonormalized columns of a seeded standard Gaussian matrix."""
    if count > dim or count < 0:
        raise RankDeficient(f"cannot fit {count} orthonormal vectors in dimension {dim}")
    if count == 0:
        return Frame.empty(dim)
    rng = np.random.default_rng(seed)
    for _ in range(16):
        try:
            return orthonormalize(rng.standard_normal((dim, count)).T)
        except RankDeficient:
            continue
    raise RankDeficient("could not draw an independent frame in 16 attempts")


def _qr_rows(a: np.ndarray) -> np.ndarray:
    """Orthonormalize rows via QR with a positive diagonal (same span, same orientation)."""
    q, r = np.linalg.qr(a.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return (q * signs).T


class _Workspace:
    """Polytope expressed in coordinates of its affine hull."""

    def __init__(self, polytope: Polytope):
        self.polytope = polytope
        self.origin, self.basis = affine_basis(polytope.vertices)
        self.points = (polytope.vertices - self.origin) @ self.basis.T
        self.dim = self.basis.shape[0]

    def radius(self, frame: np.ndarray) -> float:
        k = frame.shape[0]
        if k == 0:
            return min_enclosing_ball(self.points).radius
        q = np.linalg.qr(frame.T, mode="complete")[0]
        y = self.points @ q[:, k:]
        if k == self.dim - 1:
            # slab: projections are collinear
            return 0.5 * float(y.max() - y.min())
        return enclosing_radius(y)

    def to_local(self, frame: Frame) -> np.ndarray:
        if frame.count == 0:
            return np.zeros((0, self.dim))
        local = frame.vectors @ self.basis.T
        return orthonormalize(local).vectors

    def to_ambient(self, local: np.ndarray) -> Frame:
        if local.shape[0] == 0:
            return Frame.empty(self.polytope.ambient_dim)
        return orthonormalize(local @ self.basis)


def _perturbation_descent(ws: _Workspace, frame: np.ndarray, cfg: SearchConfig, rng) -> tuple:
    """Random tangent perturbations with re-orthonormalization; returns (frame, history, converged)."""
    k, r = frame.shape
    f = ws.radius(frame)
    history = [f]
    if k == 0 or k == r:
        return frame, history, True
    step = cfg.initial_step
    patience = min(k * (r - k), 6)
    fails = 0
    evals = 0
    while step >= cfg.step_tol and evals < cfg.max_iters:
        g = rng.standard_normal((k, r))
        g -= (g @ frame.T) @ frame
        norm = np.linalg.norm(g)
        if norm == 0.0:
            continue
        g /= norm
        moved = False
        for sign in (1.0, -1.0):
            cand = _qr_rows(frame + sign * step * g)
            fc = ws.radius(cand)
            evals += 1
            if fc < f - cfg.f_tol:
                frame, f = cand, fc
                history.append(f)
                moved = True
                break
        if moved:
            step = min(2.0 * step, 1.0)
            fails = 0
        else:
            fails += 1
            if fails >= patience:
                step *= 0.5
                fails = 0
    return frame, history, step < cfg.step_tol


def _slsqp_polish(ws: _Workspace, frame: np.ndarray) -> tuple:
    """Polish on the smooth epigraph form; returns (frame, success)."""
    x = ws.points
    m, r = x.shape
    k = frame.shape[0]
    j = r - k
    w0 = complement_basis(Frame(frame))
    ball = min_enclosing_ball(x @ w0.T)
    z0 = np.concatenate([w0.ravel(), ball.center, [ball.radius ** 2]])
    nw = j * r
    pairs = [(a, b) for a in range(j) for b in range(a, j)]

    def split(z):
        return z[:nw].reshape(j, r), z[nw:nw + j], z[-1]

    def ineq(z):
        w, c, t = split(z)
        d = x @ w.T - c
        return t - np.einsum("ij,ij->i", d, d)

    def ineq_jac(z):
        w, c, _ = split(z)
        d = x @ w.T - c
        jac = np.empty((m, z.size))
        jac[:, :nw] = (-2.0 * d[:, :, None] * x[:, None, :]).reshape(m, nw)
        jac[:, nw:nw + j] = 2.0 * d
        jac[:, -1] = 1.0
        return jac

    def eq(z):
        w = split(z)[0]
        g = w @ w.T
        return np.array([g[a, b] - (1.0 if a == b else 0.0) for a, b in pairs])

    def eq_jac(z):
        w = split(z)[0]
        jac = np.zeros((len(pairs), z.size))
        for row, (a, b) in enumerate(pairs):
            jac[row, a * r:(a + 1) * r] += w[b]
            jac[row, b * r:(b + 1) * r] += w[a]
        return jac

    grad = np.zeros(z0.size)
    grad[-1] = 1.0
    res = minimize(
        lambda z: z[-1],
        z0,
        jac=lambda z: grad,
        method="SLSQP",
        constraints=[
            {"type": "ineq", "fun": ineq, "jac": ineq_jac},
            {"type": "eq", "fun": eq, "jac": eq_jac},
        ],
        options={"ftol": 1e-16, "maxiter": 200},
    )
    try:
        w = orthonormalize(split(res.x)[0])
    except RankDeficient:
        return frame, False
    return complement_basis(w), bool(res.success)


def _refine_local(ws: _Workspace, frame: np.ndarray, cfg: SearchConfig, rng) -> tuple:
    f_in = ws.radius(frame)
    frame, history, converged = _perturbation_descent(ws, frame, cfg, rng)
    if cfg.polish and 0 < frame.shape[0] < ws.dim:
        polished, ok = _slsqp_polish(ws, frame)
        fp = ws.radius(polished)
        if fp < history[-1]:
            frame = polished
            history.append(fp)
        converged = converged or ok
    assert history[-1] <= f_in + cfg.f_tol
    return frame, history, converged


def local_refine(polytope: Polytope, frame: Frame, cfg: Optional[SearchConfig] = None) -> Frame:
    """Descend the enclosing radius from ``frame``; never returns a worse frame."""
    cfg = cfg or SearchConfig()
    ws = _Workspace(polytope)
    local = ws.to_local(frame)
    if local.shape[0] > ws.dim:
        raise InvalidJ("frame has more vectors than the polytope has dimensions")
    rng = np.random.default_rng(cfg.seed)
    refined, history, _ = _refine_local(ws, local, cfg, rng)
    if history[-1] >= history[0]:
        return frame
    return ws.to_ambient(refined)


def _run_start(ws: _Workspace, k: int, cfg: SearchConfig, index: int) -> tuple:
    seed = _start_seed(cfg.seed, index)
    start = random_frame(ws.dim, k, seed).vectors
    rng = np.random.default_rng([seed, 1])
    return _refine_local(ws, start, cfg, rng)


def minimize_rj(
    polytope: Polytope, j: int, cfg: Optional[SearchConfig] = None, executor=None
) -> SearchResult:
    """
    Outer j-radius of ``polytope`` relative to its affine hull.

    ``executor`` may be any object with a ``map`` method (e.g. a
    ``concurrent.futures`` executor); the result does not depend on it.
    """
    cfg = cfg or SearchConfig()
    ws = _Workspace(polytope)
    n = ws.dim
    if not 1 <= j <= max(n, 1) or (n == 0 and j != 1):
        raise InvalidJ(f"j={j} outside 1..{n}")
    k = max(n - j, 0)
    if k == 0:
        cyl = cylinder_radius(polytope, Frame.empty(polytope.ambient_dim))
        return SearchResult(cyl, [[cyl.radius]], 1, [cyl.radius], 0)

    starts = cfg.num_starts(n, j)
    mapper = executor.map if executor is not None else map
    outcomes = list(mapper(lambda i: _run_start(ws, k, cfg, i), range(starts)))

    radii = [h[-1] for _, h, _ in outcomes]
    best_index = int(np.argmin(radii))
    frame = ws.to_ambient(outcomes[best_index][0])
    cyl = cylinder_radius(polytope, frame)
    return SearchResult(
        best=cyl,
        objective_history=[h for _, h, _ in outcomes],
        converged_starts=sum(1 for _, _, c in outcomes if c),
        start_radii=radii,
        best_start=best_index,
    )

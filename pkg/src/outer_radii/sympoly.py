"""
Solver for the symmetric quartic program

    min sum s_i^4  s.t.  sum s_i^3 = 0,  sum s_i^2 = 1,  sum s_i = 0

over s in R^(n+1), through its reduction to at most three distinct values
s1 < s2 < s3 with integer multiplicities (k1, k2, k3), k1 + k2 + k3 = n + 1.

For fixed multiplicities the linear constraint eliminates s3, the cubic
constraint becomes a homogeneous cubic in (s1, s2), and the quadratic one
fixes the scale along each real root ray.  So every critical configuration
of a triple comes from the real roots of a single univariate cubic; Newton
polishing then brings residuals to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import DegenerateValues, SingularDenominator

RESIDUAL_TOL = 1e-11
DEDUP_TOL = 1e-8
MIN_GAP = 1e-6


@dataclass(frozen=True)
class SymSolution:
    k: tuple
    s: tuple
    objective: float
    residuals: tuple
    full_vector: np.ndarray = field(repr=False)
    # "generic" (three ordered values), "two-value" (k3 = 0) or "zero-value" (s3 = 0)
    branch: str = "generic"

    @property
    def n(self) -> int:
        return sum(self.k) - 1

    def distinct_values(self, tol: float = DEDUP_TOL) -> int:
        v = np.sort(self.full_vector)
        return 1 + int(np.sum(np.diff(v) > tol))


def enumerate_triples(n: int) -> list:
    """All (k1, k2, k3) with k1, k2 >= 1, k3 >= 0 and k1 + k2 + k3 = n + 1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return [
        (k1, n + 1 - k1 - k3, k3)
        for k3 in range(0, n)
        for k1 in range(1, n + 1 - k3)
    ]


def _nonzero(x) -> bool:
    return abs(x) > 1e-12


def ks_from_s(s1, s2, s3) -> tuple:
    """
    Multiplicities making (s1, s2, s3) satisfy the three moment constraints.

    Works with floats or ``fractions.Fraction`` inputs (exact results for
    the latter).
    """
    factors = (s1, s2, s3, s1 - s2, s1 - s3, s2 - s3)
    if not all(_nonzero(f) for f in factors):
        raise DegenerateValues(f"values must be distinct and nonzero: {(s1, s2, s3)}")
    k1 = (s2 + s3) / (-s1 * (s2 - s1) * (s3 - s1))
    k2 = (s1 + s3) / (s2 * (s2 - s1) * (s3 - s2))
    k3 = -(s1 + s2) / (s3 * (s3 - s1) * (s3 - s2))
    return k1, k2, k3


def s2_from(s1, s3, n: int):
    """Middle value forced by k1 + k2 + k3 = n + 1."""
    den = (n + 1) * s1 * s3 + 1
    if not _nonzero(den):
        raise SingularDenominator(f"(n+1) s1 s3 + 1 vanishes at s1={s1}, s3={s3}")
    return -(s1 + s3) / den


def _expand(k: tuple, s: tuple) -> np.ndarray:
    vals = [v for v, c in zip(s, k) for _ in range(c)]
    return np.array(sorted(vals, reverse=True))


def _make_solution(k: tuple, s: tuple, branch: str) -> SymSolution:
    vec = _expand(k, s)
    residuals = (
        math.fsum(vec ** 3),
        math.fsum(vec ** 2) - 1.0,
        math.fsum(vec),
    )
    objective = math.fsum(vec ** 4)
    return SymSolution(tuple(int(c) for c in k), tuple(float(v) + 0.0 for v in s), objective, residuals, vec, branch)


def _two_value_solutions(k: tuple) -> list:
    """Branches where only two values occur: k3 = 0, or s3 = 0 with k3 >= 1."""
    k1, k2, k3 = k
    if k1 != k2:
        return []
    a = 1.0 / math.sqrt(2 * k1)
    if k3 == 0:
        return [_make_solution(k, (-a, a, 0.0), "two-value")]
    return [_make_solution(k, (-a, a, 0.0), "zero-value")]


def _cubic_rays(k: np.ndarray) -> tuple:
    """
    Candidate directions (d1, d2) for triples with k3 >= 1.

    Returns ``(rows, dirs)``: triple row index and a 2-vector per real ray.
    """
    k1, k2, k3 = (k[:, i].astype(float) for i in range(3))
    c3 = k2 * (k3 ** 2 - k2 ** 2)
    c2 = -3.0 * k1 * k2 ** 2
    c1 = -3.0 * k1 ** 2 * k2
    c0 = k1 * (k3 ** 2 - k1 ** 2)
    rows, dirs = [], []

    cubic = c3 != 0
    idx = np.flatnonzero(cubic)
    if idx.size:
        comp = np.zeros((idx.size, 3, 3))
        comp[:, 0, 0] = -c2[idx] / c3[idx]
        comp[:, 0, 1] = -c1[idx] / c3[idx]
        comp[:, 0, 2] = -c0[idx] / c3[idx]
        comp[:, 1, 0] = 1.0
        comp[:, 2, 1] = 1.0
        roots = np.linalg.eigvals(comp)
        for a in range(3):
            t = roots[:, a]
            real = np.abs(t.imag) <= 1e-6 * np.maximum(1.0, np.abs(t.real))
            for r, tv in zip(idx[real], t.real[real]):
                rows.append(r)
                dirs.append((1.0, tv))
    for r in np.flatnonzero(~cubic):
        # k2 == k3: degree drops and the ray s1 = 0 appears
        for tv in np.roots([c2[r], c1[r], c0[r]]):
            if abs(tv.imag) <= 1e-6 * max(1.0, abs(tv.real)):
                rows.append(r)
                dirs.append((1.0, tv.real))
        rows.append(r)
        dirs.append((0.0, 1.0))
    return np.array(rows, dtype=int), np.array(dirs, dtype=float).reshape(-1, 2)


def _residuals(kf: np.ndarray, s: np.ndarray) -> np.ndarray:
    return np.stack(
        [
            np.sum(kf * s ** 3, axis=1),
            np.sum(kf * s ** 2, axis=1) - 1.0,
            np.sum(kf * s, axis=1),
        ],
        axis=1,
    )


def _newton_polish(kf: np.ndarray, s: np.ndarray, iters: int = 30) -> np.ndarray:
    """Damped Newton on the three moment equations, batched over rows."""
    s = s.copy()
    active = np.ones(s.shape[0], dtype=bool)
    for _ in range(iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        cur, kk = s[idx], kf[idx]
        f = _residuals(kk, cur)
        norm = np.max(np.abs(f), axis=1)
        done = norm <= 4e-16
        active[idx[done]] = False
        idx, cur, kk, f, norm = idx[~done], cur[~done], kk[~done], f[~done], norm[~done]
        if idx.size == 0:
            break
        jac = np.stack([3.0 * kk * cur ** 2, 2.0 * kk * cur, kk], axis=1)
        try:
            step = np.linalg.solve(jac, -f[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            step = np.stack([np.linalg.lstsq(a, -b, rcond=None)[0] for a, b in zip(jac, f)])
        lam = np.ones(idx.size)
        trial = cur + step
        improved = np.zeros(idx.size, dtype=bool)
        for _ in range(12):
            with np.errstate(all="ignore"):
                tn = np.max(np.abs(_residuals(kk, trial)), axis=1)
            improved |= tn < norm
            bad = ~improved
            if not np.any(bad):
                break
            lam[bad] *= 0.5
            trial[bad] = cur[bad] + lam[bad, None] * step[bad]
        # rows that cannot make progress are left where they are and dropped
        s[idx[improved]] = trial[improved]
        active[idx[~improved]] = False
    return s


def _generic_candidates(triples: list) -> list:
    """All ordered three-value solutions for the given triples (k3 >= 1)."""
    k = np.array([t for t in triples if t[2] >= 1], dtype=int).reshape(-1, 3)
    if k.shape[0] == 0:
        return []
    rows, dirs = _cubic_rays(k)
    if rows.size == 0:
        return []
    kf = k[rows].astype(float)
    d1, d2 = dirs[:, 0], dirs[:, 1]
    d3 = -(kf[:, 0] * d1 + kf[:, 1] * d2) / kf[:, 2]
    d = np.stack([d1, d2, d3], axis=1)
    q = np.sum(kf * d ** 2, axis=1)
    d = d / np.sqrt(q)[:, None]
    cand = np.concatenate([d, -d])
    kk = np.concatenate([kf, kf])
    krows = np.concatenate([rows, rows])
    cand = _newton_polish(kk, cand)
    res = np.max(np.abs(_residuals(kk, cand)), axis=1)
    # near-coincident values belong to the two-value branch
    ordered = (cand[:, 1] - cand[:, 0] > MIN_GAP) & (cand[:, 2] - cand[:, 1] > MIN_GAP)
    keep = np.flatnonzero((res <= RESIDUAL_TOL) & ordered)

    out = []
    seen = set()
    for i in keep:
        trip = tuple(int(c) for c in k[krows[i]])
        key = (trip,) + tuple(np.round(cand[i] / DEDUP_TOL).astype(np.int64))
        if key in seen:
            continue
        seen.add(key)
        out.append((trip, tuple(cand[i])))
    return out


def solve_triple(n: int, k: Iterable[int]) -> list:
    """All real solutions of the moment constraints for one multiplicity triple."""
    k = tuple(int(c) for c in k)
    if len(k) != 3 or sum(k) != n + 1 or k[0] < 1 or k[1] < 1 or k[2] < 0:
        raise ValueError(f"invalid multiplicity triple {k} for n={n}")
    sols = _two_value_solutions(k)
    sols += [_make_solution(t, s, "generic") for t, s in _generic_candidates([k])]
    return [s for s in sols if max(abs(r) for r in s.residuals) <= RESIDUAL_TOL]


def _branch_rank(branch: str) -> int:
    # among equal objectives prefer the simplest value pattern
    return {"two-value": 0, "zero-value": 1, "generic": 2}[branch]


def solve_all(n: int) -> list:
    """Every solution over every triple, sorted by objective."""
    sols = []
    triples = enumerate_triples(n)
    for k in triples:
        sols += _two_value_solutions(k)
    sols += [_make_solution(t, s, "generic") for t, s in _generic_candidates(triples)]
    sols = [s for s in sols if max(abs(r) for r in s.residuals) <= RESIDUAL_TOL]
    return sorted(sols, key=lambda s: (s.objective, _branch_rank(s.branch), s.k))


def _candidate_minimum(n: int) -> tuple:
    """Cheap pass: minimal objective over all candidates without building objects."""
    triples = enumerate_triples(n)
    best = []
    for k in triples:
        if k[0] == k[1]:
            best.append((1.0 / (2 * k[0]), k, "two-value" if k[2] == 0 else "zero-value"))
    for t, s in _generic_candidates(triples):
        obj = sum(c * v ** 4 for c, v in zip(t, s))
        best.append((obj, t, ("generic", s)))
    return best


def solve_full(n: int) -> SymSolution:
    """Global minimum of the quartic program in dimension n + 1."""
    return optimal_solutions(n)[0]


def optimal_solutions(n: int, tol: float = 1e-10) -> list:
    """
    All optimal branches found, one per distinct optimal vector (up to
    permutation), canonical representative first.
    """
    cands = _candidate_minimum(n)
    fmin = min(c[0] for c in cands)
    sols = []
    for obj, k, tag in cands:
        if obj > fmin + tol:
            continue
        if isinstance(tag, tuple):
            sols.append(_make_solution(k, tag[1], "generic"))
        else:
            sols.extend(_two_value_solutions(k))
    sols = [s for s in sols if max(abs(r) for r in s.residuals) <= RESIDUAL_TOL]
    sols.sort(key=lambda s: (s.objective, _branch_rank(s.branch), s.k))
    out, seen = [], []
    for s in sols:
        if any(v.shape == s.full_vector.shape and np.max(np.abs(v - s.full_vector)) <= DEDUP_TOL for v in seen):
            continue
        seen.append(s.full_vector)
        out.append(s)
    return out

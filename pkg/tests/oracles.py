"""
Independent reference computations for the test suite.

Nothing here imports the package; each oracle is the slow, obvious way to
get the same number.
"""

import itertools
import math

import numpy as np
from scipy.optimize import minimize, root


def brute_force_ball(points, tol=1e-10):
    """Smallest ball over all circumballs of subsets of size <= d+1 that enclose everything."""
    pts = np.asarray(points, dtype=float)
    m, d = pts.shape
    best = math.inf
    for size in range(1, min(m, d + 1) + 1):
        for sub in itertools.combinations(range(m), size):
            q = pts[list(sub)]
            p0 = q[0]
            b = q[1:] - p0
            if size == 1:
                c = p0
            else:
                g = b @ b.T
                if np.linalg.matrix_rank(g) < size - 1:
                    continue
                mu = np.linalg.solve(2.0 * g, np.diag(g))
                c = p0 + mu @ b
            r = np.max(np.linalg.norm(q - c, axis=1))
            if np.all(np.linalg.norm(pts - c, axis=1) <= r + tol):
                best = min(best, r)
    return best


def n_minus_one_radius(n, edge=1.0):
    """(n-1)-radius of the regular n-simplex from the two closed forms."""
    if n % 2:
        return edge * math.sqrt((n - 1) / (2 * (n + 1)))
    return edge * (2 * n - 1) / (2 * math.sqrt(2 * n * (n + 1)))


def _kkt_polish(x):
    """Newton on the KKT system of min sum s^4 s.t. sum s^3 = 0, sum s^2 = 1, sum s = 0."""
    m = x.size

    def eqs(z):
        s, lam = z[:m], z[m:]
        grad = 4 * s ** 3 - lam[0] * 3 * s ** 2 - lam[1] * 2 * s - lam[2]
        return np.concatenate([grad, [np.sum(s ** 3), np.sum(s ** 2) - 1.0, np.sum(s)]])

    a = np.stack([3 * x ** 2, 2 * x, np.ones(m)], axis=1)
    lam0 = np.linalg.lstsq(a, 4 * x ** 3, rcond=None)[0]
    sol = root(eqs, np.concatenate([x, lam0]), method="lm", options={"xtol": 1e-15, "ftol": 1e-15})
    return sol.x[:m], float(np.max(np.abs(eqs(sol.x))))


def sphere_multistart(n, starts=20, seed=0):
    """
    Local minima of the quartic program over the full (n+1)-sphere, from
    random starts; returns the converged, KKT-polished vectors.
    """
    rng = np.random.default_rng(seed)
    m = n + 1
    cons = [
        {"type": "eq", "fun": lambda s: np.sum(s ** 3), "jac": lambda s: 3 * s ** 2},
        {"type": "eq", "fun": lambda s: np.sum(s ** 2) - 1.0, "jac": lambda s: 2 * s},
        {"type": "eq", "fun": lambda s: np.sum(s), "jac": lambda s: np.ones_like(s)},
    ]
    out = []
    for _ in range(starts):
        x0 = rng.standard_normal(m)
        x0 -= x0.mean()
        x0 /= np.linalg.norm(x0)
        res = minimize(lambda s: np.sum(s ** 4), x0, jac=lambda s: 4 * s ** 3, method="SLSQP",
                       constraints=cons, options={"ftol": 1e-15, "maxiter": 500})
        if not res.success:
            continue
        x, kkt = _kkt_polish(res.x)
        feas = max(abs(np.sum(x ** 3)), abs(np.sum(x ** 2) - 1), abs(np.sum(x)))
        if kkt < 1e-10 and feas < 1e-10:
            out.append(x)
    return out


def cluster_count(values, tol):
    v = np.sort(np.asarray(values))
    return 1 + int(np.sum(np.diff(v) > tol))


def random_rotation(d, rng):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))

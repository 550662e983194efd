"""
Exact verification of the polynomial identities behind the symmetric
program, and high-precision certification of solver outputs.

Identity checks evaluate both sides at random rational points with
``fractions.Fraction``, so a pass means exact equality at every sample.
Solver outputs are inexact; they are re-polished at 50 digits with mpmath
before the residual and bound checks.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np
import sympy

from .cylinder import touching_set
from .errors import DegenerateValues, MalformedSolution, SingularDenominator
from .grassmann import SearchConfig, minimize_rj
from .simplex import random_simplex, standard_embedding
from .sympoly import SymSolution, ks_from_s, s2_from

SYMBOLIC_MAX_N = 12
HP_DIGITS = 50
HP_TOL = mpmath.mpf("1e-30")
INPUT_TOL = 1e-9
CONSTRAINT_NAMES = ("(i)", "(ii)", "(iii)", "(iv)")


class CertKind(enum.Enum):
    IDENTITY_ODD = "IdentityOdd"
    K1_FACTORIZATION = "K1Factorization"
    OBJECTIVE_IDENTITY = "ObjectiveIdentity"
    SOLUTION_RESIDUALS = "SolutionResiduals"
    VANDERMONDE_DET = "VandermondeDet"
    K_FORMULAS = "KFormulas"
    TOUCHING_RANK = "TouchingRank"


@dataclass(frozen=True)
class Certificate:
    kind: CertKind
    passed: bool
    witness: str
    checked: int = 0
    skipped: int = 0
    details: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "passed": self.passed,
            "witness": self.witness,
            "checked": self.checked,
            "skipped": self.skipped,
        }


def random_rational(rng: random.Random, bound: int = 1000) -> Fraction:
    """Numerator in [-bound, bound], denominator in [1, bound]."""
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


# -- identity for odd n ------------------------------------------------------

@dataclass(frozen=True)
class OddIdentityCoefficients:
    """
    Coefficients of

        quartic * sum s^4 - offset
            = linear * (sum s^2 - 1) + weight * sum (s^2 - shift)^2
    """

    quartic: Fraction
    offset: Fraction
    linear: Fraction
    weight: Fraction
    shift: Fraction

    @classmethod
    def exact(cls, n: int) -> "OddIdentityCoefficients":
        c = Fraction(1, n + 1)
        return cls(Fraction(1), c, 2 * c, Fraction(1), c)

    def bumped(self, name: str, delta=1) -> "OddIdentityCoefficients":
        vals = dict(self.__dict__)
        vals[name] = vals[name] + delta
        return OddIdentityCoefficients(**vals)


def _odd_identity_gap(s: Sequence, c: OddIdentityCoefficients):
    sq = [v * v for v in s]
    lhs = c.quartic * sum(q * q for q in sq) - c.offset
    rhs = c.linear * (sum(sq) - 1) + c.weight * sum((q - c.shift) ** 2 for q in sq)
    return lhs - rhs


def _odd_identity_symbolic(n: int, c: OddIdentityCoefficients) -> bool:
    s = sympy.symbols(f"s0:{n + 1}")
    gap = _odd_identity_gap(s, OddIdentityCoefficients(*(sympy.Rational(x) for x in c.__dict__.values())))
    return sympy.expand(gap) == 0


def verify_identity_odd(
    n: int,
    samples: int = 100,
    seed: int = 0,
    coefficients: Optional[OddIdentityCoefficients] = None,
    corrupt: bool = False,
) -> Certificate:
    """
    Exact check of the sum-of-squares identity that bounds the quartic
    program by 1/(n+1).  ``corrupt`` adds 1 to the offset (negative control).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    coef = coefficients or OddIdentityCoefficients.exact(n)
    if corrupt:
        coef = coef.bumped("offset")
    rng = random.Random(seed)
    for t in range(samples):
        s = [random_rational(rng) for _ in range(n + 1)]
        gap = _odd_identity_gap(s, coef)
        if gap != 0:
            return Certificate(
                CertKind.IDENTITY_ODD, False, f"n={n}: LHS-RHS = {gap} at sample {t}, s={s}", t + 1
            )
    symbolic = None
    if n <= SYMBOLIC_MAX_N:
        symbolic = _odd_identity_symbolic(n, coef)
        if not symbolic:
            return Certificate(
                CertKind.IDENTITY_ODD, False, f"n={n}: symbolic expansion is nonzero", samples
            )
    note = "; symbolic expansion is 0" if symbolic else ""
    return Certificate(
        CertKind.IDENTITY_ODD, True, f"n={n}: {samples} rational samples exact{note}", samples,
        details={"symbolic": symbolic},
    )


# -- three-value reduction ---------------------------------------------------

def _admissible_point(s1: Fraction, s3: Fraction, n: int):
    """(s2, k1, k2, k3) or None when the point hits a singular locus."""
    try:
        s2 = s2_from(s1, s3, n)
        k = ks_from_s(s1, s2, s3)
    except (SingularDenominator, DegenerateValues):
        return None
    return s2, k


def k1_minus_half_forms(s1: Fraction, s3: Fraction, n: int) -> tuple:
    """The two factorized expressions for k1 - (n+1)/2."""
    m = n + 1
    a = -((m * s1 * s1 - 1) * (m * s3 * (s3 - s1) - 2)) / (
        2 * (s3 - s1) * (m * s1 * s1 * s3 + 2 * s1 + s3)
    )
    b = -((m * s1 * s1 - 1) * ((m * s3 * s3 - 1) - (m * s1 * s3 + 1))) / (
        2 * (s3 - s1) * ((m * s1 * s3 + 1) * s1 + (s1 + s3))
    )
    return a, b


def k1_bound_forms(s1, s3, n: int) -> tuple:
    """Expanded and factored forms of the polynomial behind k1 <= n/2."""
    expanded = (
        2 - n * s3 ** 2 - 2 * s3 ** 2 - n ** 2 * s1 ** 3 * s3 + n ** 2 * s1 ** 2 * s3 ** 2
        - n * s1 ** 3 * s3 + n * s1 ** 2 * s3 ** 2 - 2 * n * s1 ** 2 + n * s1 * s3
    )
    factored = -2 * (n * s1 ** 2 - 1) * ((n + 1) * s1 * s3 + 1) + s3 * (s1 + s3) * (
        n * (n + 1) * s1 ** 2 - n - 2
    )
    return expanded, factored


def _sample_pairs(n: int, samples: int, seed: int):
    """Yields (s1, s3, reduced) for admissible points; ``None`` marks a skipped one."""
    rng = random.Random(seed)
    got = 0
    tries = 0
    while got < samples and tries < 20 * samples:
        tries += 1
        s1, s3 = random_rational(rng), random_rational(rng)
        red = _admissible_point(s1, s3, n)
        m = n + 1
        den_a = (s3 - s1) * (m * s1 * s1 * s3 + 2 * s1 + s3)
        den_obj = -m * s1 * s3 - 1
        if red is None or den_a == 0 or den_obj == 0:
            yield s1, s3, None
            continue
        got += 1
        yield s1, s3, red


def verify_k1_factorization(n: int, samples: int = 100, seed: int = 0, corrupt: bool = False) -> Certificate:
    """
    k1 from the multiplicity formula (with s2 eliminated) against both
    factorized forms of k1 - (n+1)/2, plus the expanded/factored forms of
    the k1 <= n/2 polynomial.
    """
    checked, skipped = 0, []
    for s1, s3, red in _sample_pairs(n, samples, seed):
        if red is None:
            skipped.append((s1, s3))
            continue
        _, (k1, _, _) = red
        lhs = k1 - Fraction(n + 1, 2) + (1 if corrupt else 0)
        a, b = k1_minus_half_forms(s1, s3, n)
        e, f = k1_bound_forms(s1, s3, n)
        checked += 1
        if not (lhs == a == b and e == f):
            return Certificate(
                CertKind.K1_FACTORIZATION, False,
                f"n={n}: mismatch at (s1, s3)=({s1}, {s3}): k1-(n+1)/2={lhs}, forms={a}, {b}; bound forms {e}, {f}",
                checked, len(skipped),
            )
    return Certificate(
        CertKind.K1_FACTORIZATION, checked > 0,
        f"n={n}: {checked} admissible points exact; skipped singular points {skipped[:5]}"
        + ("..." if len(skipped) > 5 else ""),
        checked, len(skipped),
    )


def objective_closed_form(s1, s3, n: int):
    m = n + 1
    return Fraction(1, m) + ((m * s1 * s1 - 1) * (m * s3 * s3 - 1)) / (m * (-m * s1 * s3 - 1))


def verify_objective_identity(n: int, samples: int = 100, seed: int = 0, corrupt: bool = False) -> Certificate:
    """k1 s1^4 + k2 s2^4 + k3 s3^4 against its closed form in (s1, s3)."""
    checked, skipped = 0, 0
    for s1, s3, red in _sample_pairs(n, samples, seed):
        if red is None:
            skipped += 1
            continue
        s2, (k1, k2, k3) = red
        lhs = k1 * s1 ** 4 + k2 * s2 ** 4 + k3 * s3 ** 4 + (1 if corrupt else 0)
        rhs = objective_closed_form(s1, s3, n)
        checked += 1
        if lhs != rhs:
            return Certificate(
                CertKind.OBJECTIVE_IDENTITY, False,
                f"n={n}: objective {lhs} != closed form {rhs} at (s1, s3)=({s1}, {s3})",
                checked, skipped,
            )
    return Certificate(
        CertKind.OBJECTIVE_IDENTITY, checked > 0, f"n={n}: {checked} admissible points exact", checked, skipped
    )


def verify_k_formulas(n: int, samples: int = 100, seed: int = 0, corrupt: bool = False) -> Certificate:
    """The multiplicity formulas reproduce the moment constraints (0, 1, 0) and sum to n+1."""
    checked, skipped = 0, 0
    for s1, s3, red in _sample_pairs(n, samples, seed):
        if red is None:
            skipped += 1
            continue
        s2, k = red
        s = (s1, s2, s3)
        moments = tuple(sum(ki * si ** p for ki, si in zip(k, s)) + (1 if corrupt else 0) for p in (3, 2, 1))
        checked += 1
        if moments != (0, 1, 0) or sum(k) != n + 1:
            return Certificate(
                CertKind.K_FORMULAS, False,
                f"n={n}: moments {moments}, sum k = {sum(k)} at s={s}", checked, skipped,
            )
    return Certificate(CertKind.K_FORMULAS, checked > 0, f"n={n}: {checked} points exact", checked, skipped)


def _det(rows) -> sympy.Rational:
    return sympy.Matrix(rows).det(method="bareiss")


def gradient_determinant(v: Sequence) -> sympy.Rational:
    """det of [-d/ds s^4, d/ds s^3, d/ds s^2, d/ds s] at four points."""
    return _det([[-4 * x ** 3, 3 * x ** 2, 2 * x, 1] for x in v])


def vandermonde_product(v: Sequence):
    out = sympy.Integer(1)
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            out *= v[j] - v[i]
    return out


def moment_determinant(s: Sequence) -> sympy.Rational:
    """det of rows (s^3, s^2, s) over three values."""
    return _det([[x ** p for x in s] for p in (3, 2, 1)])


def verify_vandermonde(samples: int = 100, seed: int = 0, corrupt: bool = False) -> Certificate:
    """
    Both determinant identities:
    gradient det = -24 * prod_{i<j}(v_j - v_i), and
    moment det = s1 s2 s3 (s1-s2)(s1-s3)(s2-s3).
    """
    rng = random.Random(seed)
    scale = 25 if corrupt else 24
    for t in range(samples):
        v = [sympy.Rational(random_rational(rng)) for _ in range(4)]
        if t % 10 == 0:
            v[1] = v[0]  # repeated values: both sides vanish
        g, want = gradient_determinant(v), -scale * vandermonde_product(v)
        s1, s2, s3 = v[:3]
        m, want3 = moment_determinant(v[:3]), s1 * s2 * s3 * (s1 - s2) * (s1 - s3) * (s2 - s3)
        if g != want or m != want3:
            return Certificate(
                CertKind.VANDERMONDE_DET, False,
                f"mismatch at {v}: 4x4 {g} vs {want}; 3x3 {m} vs {want3}", t + 1,
            )
    return Certificate(CertKind.VANDERMONDE_DET, True, f"{samples} rational points exact", samples)


# -- solver outputs ----------------------------------------------------------

def _as_rational(x: float, max_den: int = 10 ** 6) -> Optional[Fraction]:
    f = Fraction(x).limit_denominator(max_den)
    return f if abs(float(f) - x) <= 1e-15 * max(1.0, abs(x)) else None


def _validate(n: int, sol: SymSolution) -> tuple:
    try:
        k = tuple(int(c) for c in sol.k)
        s = tuple(float(v) for v in sol.s)
        vec = np.asarray(sol.full_vector, dtype=float).ravel()
    except (TypeError, ValueError) as exc:
        raise MalformedSolution(f"cannot read solution: {exc}") from exc
    if len(k) != 3 or len(s) != 3:
        raise MalformedSolution("expected three multiplicities and three values")
    if any(c != c0 for c, c0 in zip(k, sol.k)) or min(k) < 0:
        raise MalformedSolution(f"multiplicities must be nonnegative integers, got {sol.k}")
    if not (all(map(math.isfinite, s)) and np.all(np.isfinite(vec))):
        raise MalformedSolution("non-finite values")
    if n < 1:
        raise MalformedSolution("n must be >= 1")
    return k, s, vec


def _moments_hp(vec) -> list:
    return [
        mpmath.fsum(x ** 3 for x in vec),
        mpmath.fsum(x ** 2 for x in vec) - 1,
        mpmath.fsum(vec),
    ]


def _polish_hp(k: tuple, s: tuple, iters: int = 40) -> tuple:
    """Gauss-Newton at working precision on the distinct values with k > 0."""
    idx = [i for i in range(3) if k[i] > 0]
    x = [mpmath.mpf(s[i]) for i in idx]
    kk = [mpmath.mpf(k[i]) for i in idx]
    for _ in range(iters):
        f = mpmath.matrix([
            mpmath.fsum(c * v ** 3 for c, v in zip(kk, x)),
            mpmath.fsum(c * v ** 2 for c, v in zip(kk, x)) - 1,
            mpmath.fsum(c * v for c, v in zip(kk, x)),
        ])
        if mpmath.norm(f, mpmath.inf) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)):
            break
        jac = mpmath.matrix(3, len(x))
        for col, (c, v) in enumerate(zip(kk, x)):
            jac[0, col], jac[1, col], jac[2, col] = 3 * c * v ** 2, 2 * c * v, c
        try:
            step = mpmath.qr_solve(jac, -f)[0]
        except ZeroDivisionError:
            break
        x = [v + step[i] for i, v in enumerate(x)]
    out = list(s)
    for i, v in zip(idx, x):
        out[i] = v
    return tuple(out)


def _interior_pattern(k: tuple, s: tuple):
    """
    Sign-normalize a three-value solution to s1 < 0 < s2 < s3; returns
    (k1, s1) or None when the values are not of that pattern.
    """
    neg = [v < 0 for v in s]
    if any(abs(v) <= 1e-12 for v in s) or sum(neg) not in (1, 2):
        return None
    if sum(neg) == 2:
        k, s = k[::-1], tuple(-v for v in s[::-1])
    return k[0], s[0]


def certify_solution(n: int, sol: SymSolution, expect_optimal: bool = True) -> Certificate:
    """
    Re-check a solver output: constraints (i)-(iv) on the expanded vector,
    a 50-digit re-polish with residuals <= 1e-30, the lower bound on the
    objective (1/(n+1) for odd n, 1/n for even n) and, for even n and
    values of sign pattern s1 < 0 < s2 < s3, the bounds k1 <= n/2 and
    s1 <= -1/sqrt(n).
    """
    k, s, vec = _validate(n, sol)
    kind = CertKind.SOLUTION_RESIDUALS
    with mpmath.workdps(HP_DIGITS):
        hv = [mpmath.mpf(float(x)) for x in vec]
        res = _moments_hp(hv) + [mpmath.mpf(len(vec) - (n + 1))]
        if sum(k) != n + 1:
            res[3] = mpmath.mpf(sum(k) - (n + 1))
        bad = [name for name, r in zip(CONSTRAINT_NAMES, res) if abs(r) > INPUT_TOL]
        fmt = ", ".join(f"{name}={mpmath.nstr(r, 3)}" for name, r in zip(CONSTRAINT_NAMES, res))
        if bad:
            return Certificate(kind, False, f"n={n}: violated constraints {' '.join(bad)}; residuals {fmt}",
                               details={"violated": bad})

        expanded = sorted((v for v, c in zip(s, k) for _ in range(c)), reverse=True)
        if np.max(np.abs(np.array(expanded) - np.sort(vec)[::-1])) > 1e-12:
            return Certificate(kind, False, f"n={n}: full vector does not realize k={k}, s={s}")

        rat = [_as_rational(v) for v in s]
        if all(r is not None for r in rat):
            exact = [sum(c * r ** p for c, r in zip(k, rat)) for p in (3, 2, 1)]
            if exact == [0, 1, 0]:
                obj = sum(c * r ** 4 for c, r in zip(k, rat))
                return _bound_checks(n, k, tuple(rat), obj, "exact rational", expect_optimal)

        hs = _polish_hp(k, s)
        hres = [
            mpmath.fsum(c * v ** p for c, v in zip(k, hs)) - (1 if p == 2 else 0) for p in (3, 2, 1)
        ]
        worst = max(abs(r) for r in hres)
        if worst > HP_TOL:
            return Certificate(kind, False, f"n={n}: re-polished residual {mpmath.nstr(worst, 3)} > 1e-30")
        obj = mpmath.fsum(c * v ** 4 for c, v in zip(k, hs))
        return _bound_checks(n, k, hs, obj, f"50-digit residual {mpmath.nstr(worst, 3)}", expect_optimal)


def _bound_checks(n: int, k: tuple, s: tuple, obj, how: str, expect_optimal: bool) -> Certificate:
    kind = CertKind.SOLUTION_RESIDUALS
    bound = Fraction(1, n) if n % 2 == 0 else Fraction(1, n + 1)
    if isinstance(obj, Fraction):
        d = obj - bound
        gap = mpmath.mpf(d.numerator) / d.denominator
        shown = f"objective {obj} (exact)"
    else:
        gap = obj - mpmath.mpf(bound.numerator) / bound.denominator
        shown = f"objective {mpmath.nstr(obj, 20)}"
    msgs = [f"n={n}: {how}", shown]
    ok = gap >= -HP_TOL
    if not ok:
        msgs.append(f"below bound {bound}")
    if expect_optimal and abs(gap) > HP_TOL:
        ok = False
        msgs.append(f"differs from optimum {bound} by {mpmath.nstr(gap, 3)}")
    details = {"objective": float(obj), "bound": str(bound)}
    if n % 2 == 0:
        pat = _interior_pattern(k, tuple(float(v) for v in s))
        if pat is not None:
            k1, s1 = pat
            lim = -1 / math.sqrt(n)
            inner = k1 <= n / 2 and s1 <= lim + 1e-12
            details["interior"] = {"k1": k1, "s1": s1}
            msgs.append(f"interior: k1={k1} <= n/2, s1={s1:.6g} <= -1/sqrt(n)" if inner
                        else f"interior bound violated: k1={k1}, s1={s1:.6g}")
            ok = ok and inner
    return Certificate(kind, bool(ok), "; ".join(msgs), 1, details=details)


def perturb_solution(sol: SymSolution, delta: float = 1e-6, index: int = 0) -> SymSolution:
    """Copy of ``sol`` with one entry of the expanded vector shifted (negative control)."""
    vec = np.array(sol.full_vector, dtype=float)
    vec[index] += delta
    return SymSolution(sol.k, sol.s, sol.objective, sol.residuals, vec, sol.branch)


def identity_suite(n_max: int = 50, samples: int = 100, seed: int = 0, corrupt: bool = False) -> list:
    """Every identity certificate for 1 <= n <= n_max (k-based ones from n = 2)."""
    out = [verify_vandermonde(samples, seed, corrupt=corrupt)]
    for n in range(1, n_max + 1):
        out.append(verify_identity_odd(n, samples, seed + n, corrupt=corrupt))
        if n >= 2:
            out.append(verify_k1_factorization(n, samples, seed + n, corrupt=corrupt))
            out.append(verify_objective_identity(n, samples, seed + n, corrupt=corrupt))
            out.append(verify_k_formulas(n, samples, seed + n, corrupt=corrupt))
    return out


# -- touching structure of minimal cylinders ---------------------------------

def touching_rank_sweep(
    n: int, j: int, trials: int = 100, seed: int = 0, tol: float = 1e-6, cfg: Optional[SearchConfig] = None
) -> Certificate:
    """
    Minimal j-cylinders of seeded random n-simplices: the touching
    vertices must have affine rank at least n - j + 2.
    """
    if not 1 <= j <= n:
        raise ValueError(f"j={j} outside 1..{n}")
    need = n - j + 2
    counts: dict = {}
    for t in range(trials):
        simplex = random_simplex(n, seed * 100003 + t)
        cyl = minimize_rj(simplex, j, cfg).best
        rep = touching_set(simplex, cyl, tol=tol * (1.0 + cyl.radius))
        key = f"nu={rep.nu} case={rep.case.value}"
        counts[key] = counts.get(key, 0) + 1
        if rep.nu < need:
            return Certificate(
                CertKind.TOUCHING_RANK, False,
                f"n={n}, j={j}: trial {t} has nu={rep.nu} < {need} (touching {rep.touching})", t + 1,
                details={"counts": counts},
            )
    summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    return Certificate(
        CertKind.TOUCHING_RANK, True, f"n={n}, j={j}: all {trials} trials nu >= {need} ({summary})", trials,
        details={"counts": counts},
    )


def circumscribing_check(n: int, j: int, tol: float = 1e-6, cfg: Optional[SearchConfig] = None) -> Certificate:
    """Every vertex of the standard simplex lies on its minimal j-cylinder."""
    emb = standard_embedding(n)
    cyl = minimize_rj(emb, j, cfg).best
    rep = touching_set(emb, cyl, tol=tol * (1.0 + cyl.radius))
    ok = len(rep.touching) == n + 1
    return Certificate(
        CertKind.TOUCHING_RANK, ok, f"T^{n}, j={j}: {len(rep.touching)} of {n + 1} vertices touch", 1
    )

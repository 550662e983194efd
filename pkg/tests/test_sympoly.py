import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from outer_radii.errors import DegenerateValues, SingularDenominator
from outer_radii.sympoly import (
    enumerate_triples,
    ks_from_s,
    optimal_solutions,
    s2_from,
    solve_all,
    solve_full,
    solve_triple,
)

from oracles import cluster_count, sphere_multistart


def test_enumerate_triples():
    t2 = enumerate_triples(2)
    for k in [(1, 1, 1), (2, 1, 0), (1, 2, 0)]:
        assert k in t2
    for n in (2, 5, 9):
        t = enumerate_triples(n)
        assert len(t) == len(set(t)) == n * (n + 1) // 2
        assert all(sum(k) == n + 1 and k[0] >= 1 and k[1] >= 1 and k[2] >= 0 for k in t)


def test_no_two_value_branch_for_even_n():
    # k3 = 0 forces k1 = k2 = (n+1)/2, impossible for even n
    for n in (2, 4, 6):
        assert not any(s.branch == "two-value" for s in solve_all(n))


def test_ks_from_s():
    assert ks_from_s(-1.0, 1.0, 2.0) == pytest.approx((0.5, 0.5, 0.0))
    k = ks_from_s(Fraction(-1), Fraction(1), Fraction(2))
    assert k == (Fraction(1, 2), Fraction(1, 2), Fraction(0))
    k = ks_from_s(-0.5, 0.5, 3.0)
    assert k[0] == pytest.approx(k[1])
    with pytest.raises(DegenerateValues):
        ks_from_s(1.0, 1.0, 2.0)
    with pytest.raises(DegenerateValues):
        ks_from_s(0.0, 1.0, 2.0)


def test_s2_from():
    assert s2_from(-0.7, 0.7, 5) == 0.0
    assert s2_from(Fraction(-1), Fraction(2), 4) == Fraction(1, 9)
    assert sum(ks_from_s(Fraction(-1), Fraction(1, 9), Fraction(2))) == 5
    n = 6
    assert s2_from(-1 / math.sqrt(n), 1 / math.sqrt(n), n) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(SingularDenominator):
        s2_from(Fraction(-1, 2), Fraction(1, 2), 3)


def _rationals():
    return st.fractions(min_value=-10, max_value=10, max_denominator=50)


@given(_rationals(), _rationals(), _rationals())
def test_k_formulas_reproduce_constraints_exactly(a, b, c):
    try:
        k = ks_from_s(a, b, c)
    except DegenerateValues:
        return
    s = (a, b, c)
    assert sum(ki * si ** 3 for ki, si in zip(k, s)) == 0
    assert sum(ki * si ** 2 for ki, si in zip(k, s)) == 1
    assert sum(ki * si for ki, si in zip(k, s)) == 0


@given(st.integers(2, 40), _rationals(), _rationals())
def test_s2_gives_multiplicity_sum(n, s1, s3):
    try:
        s2 = s2_from(s1, s3, n)
        k = ks_from_s(s1, s2, s3)
    except (SingularDenominator, DegenerateValues):
        return
    assert sum(k) == n + 1


def test_solve_triple_odd_two_value():
    sols = solve_triple(3, (2, 2, 0))
    assert len(sols) == 1
    s = sols[0]
    assert s.branch == "two-value"
    assert s.s == pytest.approx((-0.5, 0.5, 0.0), abs=1e-15)
    assert s.objective == pytest.approx(0.25, abs=1e-15)


def test_solve_triple_even_zero_value():
    sols = solve_triple(4, (2, 2, 1))
    zero = [s for s in sols if s.branch == "zero-value"]
    assert len(zero) == 1
    assert zero[0].s == pytest.approx((-0.5, 0.5, 0.0), abs=1e-15)
    assert zero[0].objective == pytest.approx(0.25, abs=1e-15)


def test_solve_triple_131_is_not_better():
    sols = solve_triple(4, (1, 3, 1))
    assert sols
    assert all(s.objective >= 0.25 + 1e-12 for s in sols)
    # direct multistart on the sphere never goes below 1/4 either
    assert min(float(np.sum(x ** 4)) for x in sphere_multistart(4, 10, 3)) >= 0.25 - 1e-12


def test_solve_triple_rejects_bad_triple():
    with pytest.raises(ValueError):
        solve_triple(4, (1, 1, 1))
    with pytest.raises(ValueError):
        solve_triple(4, (0, 4, 1))


def test_solve_full_small_cases():
    s3 = solve_full(3)
    np.testing.assert_allclose(s3.full_vector, [0.5, 0.5, -0.5, -0.5], atol=1e-15)
    assert s3.objective == pytest.approx(0.25, abs=1e-15)
    s4 = solve_full(4)
    np.testing.assert_allclose(s4.full_vector, [0.5, 0.5, 0.0, -0.5, -0.5], atol=1e-15)
    assert s4.k == (2, 2, 1)
    assert solve_full(10).objective == pytest.approx(0.1, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 31))
def test_solve_full_values(n):
    sol = solve_full(n)
    want = 1 / (n + 1) if n % 2 else 1 / n
    assert sol.objective == pytest.approx(want, abs=1e-10)
    assert max(abs(r) for r in sol.residuals) <= 1e-11
    v = sol.full_vector
    assert v.size == n + 1 and np.all(np.diff(v) <= 0)
    assert sol.distinct_values() <= 3
    assert sum(sol.k) == n + 1


@pytest.mark.parametrize("n", [2, 4, 5, 8])
def test_every_solution_feasible(n):
    for s in solve_all(n):
        assert max(abs(r) for r in s.residuals) <= 1e-11
        vec = s.full_vector
        assert abs(np.sum(vec)) <= 1e-11
        assert abs(np.sum(vec ** 2) - 1) <= 1e-11
        assert abs(np.sum(vec ** 3)) <= 1e-11
        assert s.distinct_values(1e-8) <= 3


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_interior_sign_structure(n):
    checked = 0
    for s in solve_all(n):
        s1, s2, s3 = s.s
        if min(s.k) >= 1 and s1 < 0 < s2 < s3:
            checked += 1
            assert s1 + s3 > 0
            assert s1 + s2 < 0
            assert s.k[0] <= n / 2
            assert s1 <= -1 / math.sqrt(n) + 1e-12
    assert checked > 0


def test_sorted_by_objective_and_optimal_branches():
    sols = solve_all(6)
    objs = [s.objective for s in sols]
    assert objs == sorted(objs)
    best = optimal_solutions(6)
    assert best[0].objective == pytest.approx(1 / 6, abs=1e-14)
    assert all(abs(b.objective - 1 / 6) <= 1e-10 for b in best)


def test_solutions_agree_with_sphere_multistart():
    for n in (5, 6):
        ref = min(float(np.sum(x ** 4)) for x in sphere_multistart(n, 15, n))
        assert solve_full(n).objective == pytest.approx(ref, abs=1e-10)


def test_sphere_optima_have_three_values():
    for n in (4, 7):
        for x in sphere_multistart(n, 10, 100 + n):
            assert cluster_count(x, 1e-6) <= 3

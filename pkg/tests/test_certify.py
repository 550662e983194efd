import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from outer_radii.certify import (
    CertKind,
    OddIdentityCoefficients,
    _odd_identity_gap,
    certify_solution,
    circumscribing_check,
    gradient_determinant,
    identity_suite,
    k1_bound_forms,
    k1_minus_half_forms,
    moment_determinant,
    objective_closed_form,
    perturb_solution,
    random_rational,
    touching_rank_sweep,
    verify_identity_odd,
    verify_k1_factorization,
    verify_k_formulas,
    verify_objective_identity,
    verify_vandermonde,
)
from outer_radii.errors import MalformedSolution
from outer_radii.sympoly import SymSolution, ks_from_s, s2_from, solve_all, solve_full


def test_random_rational_range():
    rng = random.Random(0)
    for _ in range(200):
        q = random_rational(rng)
        assert abs(q.numerator) <= 1000 and 1 <= q.denominator <= 1000


# -- identity for odd n -------------------------------------------------------

def test_odd_identity_at_optimum_n3():
    c = OddIdentityCoefficients.exact(3)
    half = Fraction(1, 2)
    s = [half, half, -half, -half]
    lhs = sum(v ** 4 for v in s) - c.offset
    assert lhs == 0
    assert _odd_identity_gap(s, c) == 0


def test_odd_identity_at_zero_vector_n5():
    c = OddIdentityCoefficients.exact(5)
    s = [Fraction(0)] * 6
    lhs = -c.offset
    rhs = c.linear * (0 - 1) + c.weight * sum(c.shift ** 2 for _ in s)
    assert lhs == rhs == Fraction(-1, 6)


def test_odd_identity_random_points():
    cert = verify_identity_odd(7, samples=100, seed=1)
    assert cert.passed and cert.kind is CertKind.IDENTITY_ODD
    assert cert.details["symbolic"] is True


def test_odd_identity_large_n_skips_symbolic():
    cert = verify_identity_odd(31, samples=20, seed=2)
    assert cert.passed and cert.details["symbolic"] is None


@pytest.mark.parametrize("name", ["quartic", "offset", "linear", "weight", "shift"])
def test_odd_identity_any_coefficient_bump_fails(name):
    for n in (3, 8):
        coef = OddIdentityCoefficients.exact(n).bumped(name)
        assert not verify_identity_odd(n, samples=10, seed=0, coefficients=coef).passed


def test_odd_identity_symbolic_catches_corruption():
    # force the random stage to pass trivially with zero samples
    assert not verify_identity_odd(4, samples=0, corrupt=True).passed
    assert verify_identity_odd(4, samples=0).passed


# -- three-value reduction ----------------------------------------------------

def test_k1_factorization_example():
    s1, s3, n = Fraction(-1), Fraction(2), 4
    s2 = s2_from(s1, s3, n)
    k1 = ks_from_s(s1, s2, s3)[0]
    assert k1 == Fraction(19, 30)
    a, b = k1_minus_half_forms(s1, s3, n)
    assert k1 - Fraction(5, 2) == a == b == Fraction(-28, 15)


def test_objective_identity_example():
    s1, s3, n = Fraction(-1), Fraction(2), 4
    s2 = s2_from(s1, s3, n)
    k = ks_from_s(s1, s2, s3)
    obj = sum(c * v ** 4 for c, v in zip(k, (s1, s2, s3)))
    assert obj == objective_closed_form(s1, s3, n) == Fraction(17, 9)


def test_bound_forms_agree_symbolically():
    s1, s3, n = sympy.symbols("s1 s3 n")
    e, f = k1_bound_forms(s1, s3, n)
    assert sympy.expand(e - f) == 0


@pytest.mark.parametrize("n", [4, 6, 8, 17])
def test_reduction_certificates(n):
    for fn in (verify_k1_factorization, verify_objective_identity, verify_k_formulas):
        cert = fn(n, samples=100, seed=n)
        assert cert.passed, cert.witness
        assert cert.checked == 100


def test_singular_points_are_skipped_and_reported():
    # enough samples that some pair hits (n+1) s1 s3 + 1 = 0 or a repeated value
    cert = verify_k1_factorization(1, samples=3000, seed=0)
    assert cert.passed
    assert cert.skipped > 0
    assert "skipped singular points [(" in cert.witness


@pytest.mark.parametrize("fn", [verify_k1_factorization, verify_objective_identity, verify_k_formulas])
def test_reduction_corruption_fails(fn):
    assert not fn(4, samples=5, seed=0, corrupt=True).passed


# -- determinants -------------------------------------------------------------

def test_vandermonde_examples():
    assert gradient_determinant([1, 2, 3, 4]) == -288
    assert moment_determinant([1, 2, 3]) == -12
    assert gradient_determinant([1, 1, 3, 4]) == 0
    assert moment_determinant([2, 2, 5]) == 0


def test_vandermonde_certificate():
    assert verify_vandermonde(100, seed=3).passed
    assert not verify_vandermonde(5, seed=3, corrupt=True).passed


# -- solver outputs -----------------------------------------------------------

def test_certify_n4_exact():
    cert = certify_solution(4, solve_full(4))
    assert cert.passed
    assert "objective 1/4 (exact)" in cert.witness


def test_certify_n3_exact():
    cert = certify_solution(3, solve_full(3))
    assert cert.passed and "objective 1/4 (exact)" in cert.witness


@pytest.mark.parametrize("n", [5, 7, 9, 12, 33, 64])
def test_certify_optimal_solutions(n):
    cert = certify_solution(n, solve_full(n))
    assert cert.passed, cert.witness
    assert cert.kind is CertKind.SOLUTION_RESIDUALS


@pytest.mark.parametrize("n", [4, 6, 8])
def test_certify_all_critical_points_respect_bounds(n):
    interior = 0
    for s in solve_all(n):
        cert = certify_solution(n, s, expect_optimal=False)
        assert cert.passed, cert.witness
        interior += "interior" in cert.details
    assert interior > 0


def test_certify_non_optimal_fails_when_optimum_expected():
    sols = [s for s in solve_all(6) if s.objective > 1 / 6 + 1e-6]
    cert = certify_solution(6, sols[0])
    assert not cert.passed and "differs from optimum" in cert.witness


def test_perturbed_solution_names_constraint_iii():
    cert = certify_solution(4, perturb_solution(solve_full(4), 1e-6))
    assert not cert.passed
    assert "(iii)" in cert.details["violated"]
    assert "(iii)" in cert.witness


@settings(max_examples=20)
@given(st.integers(2, 30), st.floats(1e-6, 1e-2), st.data())
def test_any_perturbation_fails(n, delta, data):
    sol = solve_full(n)
    i = data.draw(st.integers(0, n))
    assert not certify_solution(n, perturb_solution(sol, delta, i)).passed


def test_wrong_multiplicity_sum_names_iv():
    sol = solve_full(4)
    bad = SymSolution((2, 2, 2), sol.s, sol.objective, sol.residuals, sol.full_vector, sol.branch)
    cert = certify_solution(4, bad)
    assert not cert.passed and "(iv)" in cert.witness


def test_malformed_solutions():
    sol = solve_full(4)
    with pytest.raises(MalformedSolution):
        certify_solution(4, SymSolution((2, 2), sol.s, 0.0, (), sol.full_vector))
    with pytest.raises(MalformedSolution):
        certify_solution(4, SymSolution((2, -1, 4), sol.s, 0.0, (), sol.full_vector))
    with pytest.raises(MalformedSolution):
        certify_solution(4, SymSolution(sol.k, (np.nan, 0.0, 1.0), 0.0, (), sol.full_vector))
    with pytest.raises(MalformedSolution):
        certify_solution(4, SymSolution((2.5, 1, 2), sol.s, 0.0, (), sol.full_vector))


def test_identity_suite_small():
    certs = identity_suite(6, samples=20, seed=0)
    assert all(c.passed for c in certs)
    kinds = {c.kind for c in certs}
    assert {CertKind.IDENTITY_ODD, CertKind.K1_FACTORIZATION, CertKind.OBJECTIVE_IDENTITY,
            CertKind.VANDERMONDE_DET, CertKind.K_FORMULAS} <= kinds
    assert not any(c.passed for c in identity_suite(3, samples=5, corrupt=True))


def test_touching_sweep_small():
    cert = touching_rank_sweep(3, 2, trials=5, seed=1)
    assert cert.passed and cert.kind is CertKind.TOUCHING_RANK
    assert sum(cert.details["counts"].values()) == 5
    assert circumscribing_check(3, 2).passed

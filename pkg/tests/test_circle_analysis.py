import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyneq.circle_analysis import (
    boundary_growth_check,
    growth_factor,
    locate_dubinin_min,
    locate_ratio_min,
    max_modulus,
    pointwise_dubinin_min,
    pointwise_ratio_min,
)
from polyneq.errors import ContractViolation
from polyneq.models import Polynomial, RootForm
from polyneq.poly_core import derivative, from_roots, scale_domain

from conftest import roots_in_disk


def _binom(n: int, k: float = 1.0) -> Polynomial:
    return from_roots(RootForm(leading=1, roots=[-k] * n))


def _dense_max(p: Polynomial, r: float, size: int = 200_000) -> float:
    thetas = 2 * np.pi * np.arange(size) / size
    return float(np.max(np.abs(np.polynomial.polynomial.polyval(r * np.exp(1j * thetas), p.array))))


# ============================================================================
# max_modulus
# ============================================================================

def test_max_modulus_examples():
    square = max_modulus(_binom(2), 1.0)
    assert square.value == pytest.approx(4.0, rel=1e-12)
    assert min(square.arg_theta, 2 * math.pi - square.arg_theta) < 1e-6

    assert max_modulus(_binom(3, 2.0), 1.0).value == pytest.approx(27.0, rel=1e-12)
    assert max_modulus(Polynomial(coeffs=[0, 0, 0, 0, 1]), 1.5).value == pytest.approx(1.5 ** 4, rel=1e-12)


@pytest.mark.parametrize("n", [1, 3, 8])
@pytest.mark.parametrize("k", [0.25, 0.5, 1.0, 2.0])
def test_max_modulus_binomial_family(n, k):
    assert max_modulus(_binom(n, k), 1.0).value == pytest.approx((1 + k) ** n, rel=1e-9)


def test_max_modulus_rejects_bad_radius():
    with pytest.raises(ContractViolation):
        max_modulus(_binom(2), 0.0)


@given(roots_in_disk(k=1.5, max_degree=8))
def test_max_modulus_dominates_dense_grid(r):
    p = from_roots(r)
    estimate = max_modulus(p, 1.0).value
    dense = _dense_max(p, 1.0)
    assert estimate >= dense * (1 - 1e-12)
    assert estimate <= dense * (1 + 1e-6)


@given(roots_in_disk(k=2.0, max_degree=6), st.floats(0.0, 2 * math.pi))
def test_max_modulus_rotation_invariant(r, phi):
    p = from_roots(r)
    rotated = Polynomial.from_array(p.array * np.exp(1j * phi * np.arange(p.degree + 1)))
    assert max_modulus(rotated, 1.0).value == pytest.approx(max_modulus(p, 1.0).value, rel=1e-11)


@given(roots_in_disk(k=2.0, max_degree=6), st.floats(0.5, 3.0))
def test_max_modulus_scaling_covariant(r, k):
    p = from_roots(r)
    assert max_modulus(scale_domain(p, k), 1.0).value == pytest.approx(max_modulus(p, k).value, rel=1e-11)


# ============================================================================
# 점별 최소
# ============================================================================

@pytest.mark.parametrize("n", [1, 2, 5])
def test_ratio_min_binomial(n):
    p = _binom(n)
    value, theta = locate_ratio_min(derivative(p), p, 1.0)
    assert value == pytest.approx(n / 2, rel=1e-10)
    assert min(theta, 2 * math.pi - theta) < 1e-4


def test_ratio_min_identity_and_zero():
    p = _binom(3, 0.5)
    assert pointwise_ratio_min(p, p, 1.0) == 1.0
    zero = Polynomial(coeffs=[0], degenerate=True)
    assert pointwise_ratio_min(zero, p, 1.0) == 0.0


@pytest.mark.parametrize("n", [1, 3, 6])
def test_dubinin_min_monomial(n):
    assert pointwise_dubinin_min(Polynomial(coeffs=[0] * n + [1]), 1.0) == pytest.approx(n, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_dubinin_min_binomial(n):
    # n Re(z / (z + 1)) = n/2 on |z| = 1 away from z = -1
    assert pointwise_dubinin_min(_binom(n), 1.0) == pytest.approx(n / 2, rel=1e-6)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_dubinin_min_from_roots_is_exact_on_boundary(n):
    r = RootForm(leading=1, roots=[-1] * n)
    value, _ = locate_dubinin_min(from_roots(r), 1.0, roots=r)
    assert value == pytest.approx(n / 2, rel=1e-14)


@given(roots_in_disk(k=0.8, max_degree=6))
def test_dubinin_min_root_and_coefficient_forms_agree(r):
    p = from_roots(r)
    assert pointwise_dubinin_min(p, 1.0, roots=r) == pytest.approx(pointwise_dubinin_min(p, 1.0), rel=1e-7)


# ============================================================================
# 성장 인자 / 경계 성장
# ============================================================================

def test_growth_factor_examples():
    assert growth_factor(Polynomial(coeffs=[0, 0, 0, 1]), 2.0) == pytest.approx(8.0, rel=1e-12)
    assert growth_factor(Polynomial(coeffs=[5]), 3.0) == pytest.approx(1.0, rel=1e-12)
    assert growth_factor(_binom(2), 2.0) == pytest.approx(9 / 4, rel=1e-12)


def test_growth_factor_requires_outer_circle():
    with pytest.raises(ContractViolation):
        growth_factor(_binom(2), 0.5)


@given(roots_in_disk(k=3.0, max_degree=7), st.floats(1.0, 4.0))
def test_growth_factor_bounded_by_power(r, big_r):
    assert growth_factor(from_roots(r), big_r) <= big_r ** r.degree * (1 + 1e-9)


def test_boundary_growth_examples():
    cube = RootForm(leading=1, roots=[-2, -2, -2])
    report = boundary_growth_check(cube, 2.0)
    assert report.hypothesis_ok and report.passed
    assert report.lhs == pytest.approx(64.0, rel=1e-12)
    assert report.rhs == pytest.approx(48.0, rel=1e-12)
    assert report.slack == pytest.approx(16.0, rel=1e-10)

    sharp = boundary_growth_check(RootForm(leading=1, roots=[-1] * 4), 1.0)
    assert sharp.equality_sharp


def test_boundary_growth_hypothesis_failure():
    report = boundary_growth_check(RootForm(leading=1, roots=[3.0]), 2.0)
    assert not report.hypothesis_ok
    assert report.passed is None


@given(roots_in_disk(k=2.5, max_degree=7))
def test_boundary_growth_random(r):
    report = boundary_growth_check(r, 2.5)
    assert report.hypothesis_ok
    assert report.passed

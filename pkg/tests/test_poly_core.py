import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.optimize import linear_sum_assignment

from polyneq.errors import ContractViolation
from polyneq.models import Polynomial, RootForm
from polyneq.poly_core import (
    derivative,
    evaluate,
    find_roots,
    from_roots,
    inclusion_radii,
    root_residual,
    scale_domain,
    scale_roots,
    zeros_in_disk,
)

from conftest import roots_in_disk

CUBE = Polynomial(coeffs=[8, 12, 6, 1])  # (z+2)^3


def _matched_distance(found: np.ndarray, expected: np.ndarray) -> float:
    cost = np.abs(found[:, None] - expected[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@st.composite
def separated_roots(draw) -> RootForm:
    """각도를 고르게 나눈 단순근 (서로 0.6 이상 떨어짐)"""
    n = draw(st.integers(1, 6))
    radii = draw(st.lists(st.floats(0.5, 1.0), min_size=n, max_size=n))
    jitter = draw(st.lists(st.floats(-0.2, 0.2), min_size=n, max_size=n))
    leading = draw(st.sampled_from([1, 2 - 1j, -0.5j]))
    roots = [rho * cmath.exp(1j * (2 * math.pi * j / n + d)) for j, (rho, d) in enumerate(zip(radii, jitter))]
    return RootForm(leading=leading, roots=roots)


# ============================================================================
# 모델 검증
# ============================================================================

def test_polynomial_rejects_zero_leading():
    with pytest.raises(ValidationError):
        Polynomial(coeffs=[1, 0])


def test_polynomial_rejects_non_finite():
    with pytest.raises(ValidationError):
        Polynomial(coeffs=[[float("nan"), 0.0], [1.0, 0.0]])


def test_polynomial_json_pairs():
    p = Polynomial(coeffs=[[1.0, 2.0], [0.0, -1.0]])
    assert p.coeffs == (1 + 2j, -1j)
    assert p.model_dump(mode="json")["coeffs"] == [[1.0, 2.0], [0.0, -1.0]]


def test_add_pads_to_common_length():
    total = Polynomial(coeffs=[1, 1]) + Polynomial(coeffs=[0, 0, 2])
    assert total.coeffs == (1, 1, 2)


def test_scaled_and_cancellation():
    p = Polynomial(coeffs=[1, 2j, 3])
    assert p.scaled(2).coeffs == (2, 4j, 6)
    zero = p + p.scaled(-1)
    assert zero.degenerate
    assert zero.coeffs == (0, 0, 0)


# ============================================================================
# 평가 / 미분
# ============================================================================

def test_evaluate_examples():
    assert evaluate(Polynomial(coeffs=[-1, 0, 1]), 2) == 3
    assert evaluate(CUBE, 1) == 27
    assert abs(evaluate(CUBE, 1j) - (2 + 11j)) < 1e-12


def test_derivative_examples():
    assert derivative(Polynomial(coeffs=[0, 0, 0, 1])).coeffs == (0, 0, 3)
    assert derivative(CUBE).coeffs == (12, 12, 3)

    zero = derivative(Polynomial(coeffs=[5]))
    assert zero.degenerate
    assert zero.coeffs == (0,)


@given(roots_in_disk(k=2.0), st.floats(-3, 3), st.floats(-3, 3))
def test_evaluate_matches_root_product(r, re, im):
    z = complex(re, im)
    product = r.leading * np.prod([z - zj for zj in r.roots])
    scale = abs(r.leading) * np.prod([abs(z) + abs(zj) for zj in r.roots])
    assert abs(evaluate(from_roots(r), z) - product) <= 1e-12 * max(scale, 1.0)


@given(roots_in_disk(max_degree=6), roots_in_disk(max_degree=6), st.floats(-3, 3), st.floats(-3, 3))
def test_derivative_is_linear(r1, r2, a, b):
    p, q = from_roots(r1), from_roots(r2)
    combined = derivative(p.scaled(a) + q.scaled(b)).array
    separate = (derivative(p).scaled(a) + derivative(q).scaled(b)).array
    assert np.allclose(combined, separate, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(separate))))


# ============================================================================
# 근 <-> 계수
# ============================================================================

def test_from_roots_examples():
    assert from_roots(RootForm(leading=1, roots=[1, -1])).coeffs == (-1, 0, 1)
    assert from_roots(RootForm(leading=1, roots=[-2, -2, -2])).coeffs == CUBE.coeffs

    constant = from_roots(RootForm(leading=3, roots=[]))
    assert constant.degree == 0
    assert constant.coeffs == (3,)


def test_find_roots_simple():
    found = find_roots(Polynomial(coeffs=[-1, 0, 1]))
    assert _matched_distance(found.roots_array, np.array([1, -1])) < 1e-12


def test_find_roots_triple_root_cluster():
    found = find_roots(CUBE)
    assert np.all(np.abs(found.roots_array + 2) < 1e-4)


def test_find_roots_monomial_origin():
    found = find_roots(Polynomial(coeffs=[0, 0, 0, 0, 0, 1]))
    assert found.degree == 5
    assert np.all(np.abs(found.roots_array) < 1e-8)


def test_find_roots_requires_degree():
    with pytest.raises(ContractViolation):
        find_roots(Polynomial(coeffs=[2]))


@given(separated_roots())
def test_find_roots_recovers_simple_roots(r):
    found = find_roots(from_roots(r))
    assert _matched_distance(found.roots_array, r.roots_array) <= 1e-8


@pytest.mark.parametrize("k, n", [(1.0, 3), (0.5, 4), (2.0, 3)])
def test_find_roots_merges_multiple_root(k, n):
    # (z+k)^n 계수에서 출발해도 근은 원판 |z| <= k 안에 있어야 한다
    found = find_roots(from_roots(RootForm(leading=1, roots=[-k] * n)))
    assert np.all(np.abs(found.roots_array + k) <= 1e-9 * k)
    assert zeros_in_disk(found, k)


def test_find_roots_keeps_distinct_neighbours():
    found = find_roots(from_roots(RootForm(leading=1, roots=[0.5, 0.5 + 1e-3, -0.7j])))
    assert _matched_distance(found.roots_array, np.array([0.5, 0.5 + 1e-3, -0.7j])) <= 1e-9


def test_inclusion_radii_cover_true_roots():
    p = Polynomial(coeffs=[-1, 0, 1])
    radii = inclusion_radii(p, np.array([1 + 1e-3, -1 + 0j]))
    assert radii[0] >= 1e-3
    assert radii[1] == 0.0


@given(roots_in_disk(k=2.0, max_degree=8))
def test_find_roots_roundtrip_residual(r):
    p = from_roots(r)
    found = find_roots(p)
    assert found.degree == r.degree
    assert root_residual(p, found.roots_array) <= 1e-10
    assert found.leading == p.leading


# ============================================================================
# 스케일링 / 영점 위치
# ============================================================================

def test_scale_domain_examples():
    assert scale_domain(Polynomial(coeffs=[-1, 0, 1]), 2).coeffs == (-1, 0, 4)
    assert scale_domain(CUBE, 2).coeffs == tuple(8 * c for c in (1, 3, 3, 1))
    assert scale_domain(CUBE, 1).coeffs == CUBE.coeffs


@given(roots_in_disk(k=2.0), st.floats(0.2, 5.0))
def test_scale_domain_inverse(r, k):
    p = from_roots(r)
    back = scale_domain(scale_domain(p, k), 1.0 / k).array
    assert np.allclose(back, p.array, rtol=1e-12, atol=1e-12 * np.max(np.abs(p.array)))


@given(roots_in_disk(k=3.0))
def test_scale_roots_matches_scale_domain(r):
    k = 1.7
    direct = scale_domain(from_roots(r), k).array
    via_roots = from_roots(scale_roots(r, k)).array
    assert np.allclose(direct, via_roots, rtol=1e-10, atol=1e-10 * np.max(np.abs(direct)))


def test_scale_domain_evaluates_at_kz():
    p = Polynomial(coeffs=[1 + 1j, -2, 0.5j, 3])
    z = cmath.exp(0.3j)
    assert abs(evaluate(scale_domain(p, 2.5), z) - evaluate(p, 2.5 * z)) < 1e-10


def test_zeros_in_disk_examples():
    triple = RootForm(leading=1, roots=[-2, -2, -2])
    assert zeros_in_disk(triple, 2)
    assert not zeros_in_disk(triple, 1.99)
    assert zeros_in_disk(RootForm(leading=1, roots=[]), 0.5)


def test_zeros_in_disk_rejects_nonpositive_k():
    with pytest.raises(ContractViolation):
        zeros_in_disk(RootForm(leading=1, roots=[0]), 0)

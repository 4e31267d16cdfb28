import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyneq.circle_analysis import limit_defect_max
from polyneq.errors import ContractViolation, InadmissiblePointError
from polyneq.models import GammaWeights, PolarPoint, Polynomial, RootForm
from polyneq.operators import (
    dubinin_quantity,
    generalized_derivative,
    generalized_polar_derivative,
    limit_ratio_defect,
    polar_derivative,
)
from polyneq.poly_core import derivative, evaluate, from_roots, scale_roots

from conftest import gamma_weights, roots_in_disk


def _close(a: np.ndarray, b: np.ndarray, rel: float = 1e-10) -> bool:
    size = max(len(a), len(b))
    a = np.pad(a, (0, size - len(a)))
    b = np.pad(b, (0, size - len(b)))
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), 1e-300)
    return bool(np.max(np.abs(a - b)) <= rel * scale)


# ============================================================================
# 일반화 미분
# ============================================================================

def test_generalized_derivative_example():
    r = RootForm(leading=1, roots=[1, -1])
    q = generalized_derivative(r, GammaWeights(gamma=(2.0, 3.0)))
    # 2(z + 1) + 3(z - 1)
    assert q.coeffs == (-1, 5)


def test_generalized_derivative_origin_roots():
    gamma = 0.7
    q = generalized_derivative(RootForm(leading=1, roots=[0, 0, 0]), GammaWeights(gamma=(gamma,) * 3))
    assert _close(q.array, np.array([0, 0, 3 * gamma]))


def test_generalized_derivative_length_mismatch():
    with pytest.raises(ContractViolation):
        generalized_derivative(RootForm(leading=1, roots=[1, 2]), GammaWeights.ones(3))


@given(roots_in_disk(max_degree=8))
def test_ones_weights_give_plain_derivative(r):
    q = generalized_derivative(r, GammaWeights.ones(r.degree))
    assert _close(q.array, derivative(from_roots(r)).array)


@given(roots_in_disk(max_degree=6), st.floats(0.0, 2 * math.pi))
def test_generalized_derivative_matches_log_derivative(r, theta):
    """z != z_j 에서 P^gamma(z) = P(z) sum gamma_j / (z - z_j)"""
    g = GammaWeights(gamma=tuple(float(j + 1) for j in range(r.degree)))
    z = 1.5 * cmath.exp(1j * theta)
    expected = evaluate(from_roots(r), z) * sum(w / (z - zj) for w, zj in zip(g.gamma, r.roots))
    assert abs(evaluate(generalized_derivative(r, g), z) - expected) <= 1e-9 * max(1.0, abs(expected))


@given(data=st.data())
def test_generalized_derivative_is_linear_in_gamma(data):
    r = data.draw(roots_in_disk(max_degree=6))
    g1 = data.draw(gamma_weights(r.degree))
    g2 = data.draw(gamma_weights(r.degree))
    c = data.draw(st.floats(0.1, 4.0))

    combined = GammaWeights(gamma=tuple(c * x + y for x, y in zip(g1.gamma, g2.gamma)))
    expected = generalized_derivative(r, g1).scaled(c) + generalized_derivative(r, g2)
    assert _close(generalized_derivative(r, combined).array, expected.array)


# ============================================================================
# 극 미분
# ============================================================================

@pytest.mark.parametrize("n", [1, 3, 6])
def test_polar_derivative_monomial(n):
    alpha = 2.0 - 1.5j
    q = polar_derivative(Polynomial(coeffs=[0] * n + [1]), PolarPoint(alpha=alpha))
    assert q.degree == n - 1
    assert _close(q.array, np.array([0] * (n - 1) + [n * alpha]))


def test_polar_derivative_binomial():
    n, alpha = 4, 3.0
    p = from_roots(RootForm(leading=1, roots=[-1] * n))
    expected = n * (1 + alpha) * from_roots(RootForm(leading=1, roots=[-1] * (n - 1))).array
    assert _close(polar_derivative(p, PolarPoint(alpha=alpha)).array, expected)


def test_polar_derivative_at_origin():
    q = polar_derivative(Polynomial(coeffs=[1, 0, 1]), PolarPoint(alpha=0))
    assert _close(q.array, np.array([2, 0]))


@given(roots_in_disk(max_degree=8), st.floats(-5, 5), st.floats(-5, 5))
def test_ones_weights_give_polar_derivative(r, re, im):
    a = PolarPoint(alpha=complex(re, im))
    general = generalized_polar_derivative(r, GammaWeights.ones(r.degree), a)
    assert _close(general.array, polar_derivative(from_roots(r), a).array)


@given(roots_in_disk(max_degree=8), st.floats(-5, 5), st.floats(-5, 5))
def test_polar_derivative_drops_a_degree(r, re, im):
    q = polar_derivative(from_roots(r), PolarPoint(alpha=complex(re, im)))
    assert q.degree <= r.degree - 1


@given(data=st.data())
def test_generalized_polar_decomposition(data):
    r = data.draw(roots_in_disk(max_degree=6))
    g = data.draw(gamma_weights(r.degree))
    alpha = complex(data.draw(st.floats(-5, 5)), data.draw(st.floats(-5, 5)))
    z = complex(data.draw(st.floats(-1.5, 1.5)), data.draw(st.floats(-1.5, 1.5)))

    p, q = from_roots(r), generalized_derivative(r, g)
    weighted = evaluate(q, z)
    lhs = evaluate(generalized_polar_derivative(r, g, PolarPoint(alpha=alpha)), z) - g.lambda_sum * evaluate(p, z)
    rhs = (alpha - z) * weighted
    # 계수 크기 기준 (반올림 오차 상한)
    size = g.lambda_sum * np.sum(np.abs(p.array)) + (abs(alpha) + abs(z) + 1) * np.sum(np.abs(q.array))
    scale = size * max(1.0, abs(z)) ** r.degree
    assert abs(lhs - rhs) <= 1e-9 * scale


def test_generalized_polar_examples():
    r = RootForm(leading=1, roots=[1, -1])
    q = generalized_polar_derivative(r, GammaWeights(gamma=(2.0, 3.0)), PolarPoint(alpha=0))
    # 5(z^2 - 1) - z(5z - 1) = z - 5
    assert _close(q.array, np.array([-5, 1, 0]))

    gamma, alpha = 1.3, 0.4 + 2j
    single = generalized_polar_derivative(
        RootForm(leading=1, roots=[0]), GammaWeights(gamma=(gamma,)), PolarPoint(alpha=alpha)
    )
    assert _close(single.array, np.array([gamma * alpha, 0]))


@given(roots_in_disk(k=2.0, max_degree=5), st.floats(0.0, 2 * math.pi))
def test_scaled_generalized_polar_identity(r, theta):
    """D_{alpha/k}^gamma[P(kz)](z) = D_alpha^gamma[P](kz)"""
    k = 2.0
    g = GammaWeights(gamma=tuple(0.5 + j for j in range(r.degree)))
    a = PolarPoint(alpha=3.0 + 1j)
    z = cmath.exp(1j * theta)
    scaled = generalized_polar_derivative(scale_roots(r, k), g, PolarPoint(alpha=a.alpha / k))
    direct = generalized_polar_derivative(r, g, a)
    left, right = evaluate(scaled, z), evaluate(direct, k * z)
    assert abs(left - right) <= 1e-9 * max(1.0, abs(right))


# ============================================================================
# Dubinin / 극한 결손
# ============================================================================

@pytest.mark.parametrize("theta", [0.0, 1.0, 2.5])
def test_dubinin_monomial(theta):
    p = Polynomial(coeffs=[0, 0, 0, 1])
    assert dubinin_quantity(p, cmath.exp(1j * theta)) == pytest.approx(3.0, rel=1e-12)


def test_dubinin_binomial_at_one():
    assert dubinin_quantity(Polynomial(coeffs=[1, 2, 1]), 1) == pytest.approx(1.0, rel=1e-12)


def test_dubinin_rejects_zero():
    with pytest.raises(InadmissiblePointError):
        dubinin_quantity(Polynomial(coeffs=[1, 1]), -1)


def test_limit_defect_examples():
    assert limit_ratio_defect(Polynomial(coeffs=[0, 0, 1]), PolarPoint(alpha=1e6), 1) == pytest.approx(0.0, abs=1e-12)
    assert limit_ratio_defect(Polynomial(coeffs=[1, 0, 1]), PolarPoint(alpha=1000), 1) == pytest.approx(0.002, rel=1e-10)


def test_limit_defect_requires_large_alpha():
    with pytest.raises(ContractViolation):
        limit_ratio_defect(Polynomial(coeffs=[1, 1]), PolarPoint(alpha=0.5), 1)


@given(roots_in_disk(max_degree=6), st.floats(1.0, 100.0), st.floats(0.0, 2 * math.pi))
def test_limit_defect_halves_when_alpha_doubles(r, modulus, theta):
    p = from_roots(r)
    z = 0.8 * cmath.exp(1j * theta)
    once = limit_ratio_defect(p, PolarPoint(alpha=modulus), z)
    twice = limit_ratio_defect(p, PolarPoint(alpha=2 * modulus), z)
    n = p.degree
    closed = abs(n * evaluate(p, z) - z * evaluate(derivative(p), z)) / modulus
    assert once == pytest.approx(closed, rel=1e-9, abs=1e-12)
    assert twice == pytest.approx(once / 2, rel=1e-9, abs=1e-12)


def test_limit_defect_max_uniform_form():
    p = Polynomial(coeffs=[1, 0, 1])
    # |2P - zP'| = 2 on every circle
    assert limit_defect_max(p, PolarPoint(alpha=1000), 2.0) == pytest.approx(0.002, rel=1e-10)
    assert limit_defect_max(p, PolarPoint(alpha=2000), 2.0) == pytest.approx(0.001, rel=1e-10)
